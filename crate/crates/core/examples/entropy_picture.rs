//! Thermal-time evolution generated by S = H/T: the unitary limit, and
//! dilatation or contraction once a dissipative phase enters.

use entropy_picture::opcore::{HermitianOperator, StateVector};
use entropy_picture::spicture::{
    entropy_operator, equation_residuals, evolve_s, evolve_s_with, EvolveOptions,
    GeneratorSchedule, Propagation,
};
use entropy_picture::{Constants, Unit};

fn main() -> entropy_picture::Result<()> {
    let k = Constants::natural();
    let h = HermitianOperator::from_real_rows(
        3,
        &[0.0, 0.2, 0.0, 0.2, 1.0, 0.1, 0.0, 0.1, 2.0],
        Unit::Energy,
    )?;
    let s = entropy_operator(&h, 1.5)?;
    let psi = StateVector::basis(3, 0)?;
    let taus: Vec<f64> = (0..=40).map(|i| 0.1 * i as f64).collect();
    let sched = GeneratorSchedule::constant(s.operator().clone());

    let unitary = evolve_s(&psi, &sched, &taus, 0.0, &k)?;
    println!("eps = 0: norm at tau = 4 is {:.15}", unitary.norms[40]);

    let opts = EvolveOptions {
        allow_antidissipative: true,
        ..Default::default()
    };
    // S is not >= 0 here, so shift it for a clean monotone picture
    let pos = s
        .operator()
        .shifted(-s.operator().decompose().min_eigenvalue());
    let sched_pos = GeneratorSchedule::constant(pos);
    for eps in [-0.1, 0.1] {
        let p = Propagation::weak_field(eps);
        let tr = evolve_s_with(&psi, &sched_pos, &taus, p, &opts, &k)?;
        let worst = equation_residuals(&tr, &sched_pos, p.equation_lhs(), &k)?
            .into_iter()
            .fold(0.0, f64::max);
        println!(
            "eps = {eps:+}: norm {:.4} -> {:.4} -> {:.4}, max residual {worst:.1e}",
            tr.norms[0], tr.norms[20], tr.norms[40]
        );
    }

    // a temperature-dependent generator, integrated piecewise
    let hh = h.clone();
    let chart = GeneratorSchedule::piecewise(move |tau| hh.scaled((-tau).exp(), Unit::Entropy));
    let tr = evolve_s(&psi, &chart, &taus, -0.05, &k)?;
    println!(
        "chart generator, eps = -0.05: <S> at tau = 4 is {:.6}",
        tr.entropy_expectations[40]
    );
    Ok(())
}
