//! Spectral toolkit: decompose a Hermitian operator, reconstruct it and
//! apply functions of it to a state.

use entropy_picture::opcore::{expectation, uncertainty, HermitianOperator, StateVector};
use entropy_picture::Unit;
use num_complex::Complex64;

fn main() -> entropy_picture::Result<()> {
    let h = HermitianOperator::random(5, 2024, Unit::Energy)?;
    let d = h.decompose();
    let evs: Vec<String> = d.eigenvalues().iter().map(|e| format!("{e:.4}")).collect();
    println!("eigenvalues: [{}]", evs.join(", "));

    let err = (d.reconstruct() - h.matrix()).norm();
    println!("reconstruction error: {err:.2e}");

    let psi = StateVector::random(5, 7)?;
    println!(
        "<H> = {:.6}, dH = {:.6}",
        expectation(&h, &psi)?,
        uncertainty(&h, &psi)?
    );

    // exp(-iH) is unitary; exp(-H) contracts
    let u = d.exp_apply(Complex64::new(0.0, -1.0), &psi)?;
    let shifted = h.shifted(-d.min_eigenvalue()).decompose();
    let c = shifted.exp_apply(Complex64::new(-1.0, 0.0), &psi)?;
    println!("|exp(-iH) psi| = {:.15}", u.norm());
    println!("|exp(-(H - E0)) psi| = {:.6}", c.norm());
    Ok(())
}
