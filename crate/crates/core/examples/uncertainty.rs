//! Entropy-time uncertainty in Mandelstam–Tamm form: dS * dtau_A >= kB/2.

use std::f64::consts::FRAC_PI_4;

use entropy_picture::opcore::{HermitianOperator, StateVector};
use entropy_picture::spicture::{entropy_operator, second_law_refinement, uncertainty_product};
use entropy_picture::{Constants, Unit};

fn main() -> entropy_picture::Result<()> {
    let k = Constants::new(1.0, 0.5)?;
    let h = HermitianOperator::from_real_diagonal(&[0.0, 2.0 * k.k_b], Unit::Energy)?;
    let s = entropy_operator(&h, 1.0)?;
    let plus = HermitianOperator::from_real_rows(2, &[0.5, 0.5, 0.5, 0.5], Unit::Dimensionless)?;
    let psi = StateVector::equal_superposition(2)?;

    let r = uncertainty_product(&psi, &s, &plus, FRAC_PI_4, &k)?;
    println!(
        "two-level: dS = {:.4}, dtau_A = {:.4}, product / kB = {:.6}",
        r.delta_s,
        r.delta_tau_a,
        r.product.unwrap_or(f64::NAN) / k.k_b
    );
    println!("thresholds: {:?}", r.thresholds(&k));
    println!(
        "second-law reading: {:?}",
        second_law_refinement(r.delta_s, &k)
    );

    let mut lowest = f64::INFINITY;
    for seed in 0..200 {
        let h = HermitianOperator::random(6, seed, Unit::Energy)?;
        let a = HermitianOperator::random(6, seed + 1000, Unit::Dimensionless)?;
        let psi = StateVector::random(6, seed + 2000)?;
        let r = uncertainty_product(&psi, &entropy_operator(&h, 2.0)?, &a, 0.1 * seed as f64, &k)?;
        if let Some(p) = r.product {
            lowest = lowest.min(p / k.k_b);
        }
    }
    println!("smallest product / kB over 200 random cases: {lowest:.4}");
    Ok(())
}
