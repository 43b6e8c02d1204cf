//! Linear relaxation toward equilibrium, with entropy production read off
//! in both quadratic forms.

use entropy_picture::onsager::{
    entropy_rate, harmonic_hamiltonian, reciprocity_check, relax, OnsagerSystem,
};
use nalgebra::{DMatrix, DVector};

fn main() -> entropy_picture::Result<()> {
    let l = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 0.8, 0.1, 0.0, 0.1, 0.5]);
    let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.0, 0.0, 0.0, 1.5]);
    let sys = OnsagerSystem::new(l.clone(), g, DVector::from_vec(vec![1.0, -0.5, 0.25]))?;
    println!("reciprocity: {:?}", reciprocity_check(&l)?);
    println!("slowest decay rate: {:.4}", sys.lyapunov_rate());

    let ts: Vec<f64> = (0..=10).map(|i| i as f64).collect();
    let tr = relax(&sys, &ts)?;
    println!("{:>4} {:>12} {:>12}", "t'", "S - S_eq", "dS/dt'");
    for ((t, s), r) in ts.iter().zip(&tr.entropies).zip(&tr.entropy_rates) {
        println!("{t:>4} {s:>12.4e} {r:>12.4e}");
    }

    let r = entropy_rate(&sys, sys.y0())?;
    println!(
        "rate via velocities {:.12}, via forces {:.12}",
        r.via_velocities, r.via_forces
    );
    println!(
        "harmonic energy at y0: {:.6}",
        harmonic_hamiltonian(&sys, sys.y0())?
    );

    // a non-reciprocal kinetic matrix still relaxes, through a dense exponential
    let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.4, -0.4, 1.0]);
    let sys2 = OnsagerSystem::new(
        skew,
        DMatrix::identity(2, 2),
        DVector::from_vec(vec![1.0, 0.0]),
    )?;
    let tr2 = relax(&sys2, &[0.0, 1.0, 2.0])?;
    println!("non-reciprocal: y(2) = {:?}", tr2.ys[2]);
    Ok(())
}
