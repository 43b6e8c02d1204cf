//! Energy-picture dynamics: unitary evolution, energy conservation and the
//! norm decay of the perturbed equation.

use entropy_picture::hpicture::{
    evolve_h, evolve_h_perturbed, noether_energy_drift, PerturbationMode,
};
use entropy_picture::opcore::{build_hamiltonian, HamiltonianPreset, HamiltonianSpec, StateVector};
use entropy_picture::Constants;

fn main() -> entropy_picture::Result<()> {
    let k = Constants::natural();
    let spec = HamiltonianSpec::new(
        HamiltonianPreset::TruncatedOscillator { n: 8, omega: 1.0 },
        false,
    );
    let h = build_hamiltonian(&spec, &k)?;
    let psi = StateVector::equal_superposition(8)?;
    let ts: Vec<f64> = (0..=100).map(|i| 0.2 * i as f64).collect();

    let tr = evolve_h(&psi, &h, &ts, &k)?;
    println!(
        "unitary: final norm {:.15}, energy drift {:.2e}",
        tr.norms[100],
        noether_energy_drift(&tr)?
    );

    println!(
        "{:>6} {:>14} {:>14}",
        "eps'", "norm (exact)", "norm (1st ord)"
    );
    for eps in [-0.05, -0.01, 0.01, 0.05] {
        let a = evolve_h_perturbed(&psi, &h, &ts, eps, PerturbationMode::Exact, &k)?;
        let b = evolve_h_perturbed(&psi, &h, &ts, eps, PerturbationMode::FirstOrder, &k)?;
        println!("{eps:>6} {:>14.6e} {:>14.6e}", a.norms[100], b.norms[100]);
    }
    Ok(())
}
