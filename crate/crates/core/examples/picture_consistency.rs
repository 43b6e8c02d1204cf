//! The energy and entropy pictures describe the same trajectory once clock
//! time and thermal time are matched.

use entropy_picture::opcore::{HermitianOperator, StateVector};
use entropy_picture::spicture::{picture_consistency, PictureMode, ThermalTimeChart};
use entropy_picture::{Constants, Unit};
use num_complex::Complex64;

fn main() -> entropy_picture::Result<()> {
    let k = Constants::natural();
    let h = HermitianOperator::random(16, 3, Unit::Energy)?;
    let psi = StateVector::random(16, 4)?;
    let taus: Vec<f64> = (0..=20).map(|i| 0.05 * i as f64).collect();

    let chart = ThermalTimeChart::new(1.0, Complex64::new(1.0, 0.0), k)?;
    for tau in [0.0, 0.5, 1.0] {
        println!("tau = {tau}: t = {:.6}", chart.tau_to_t(tau).re);
    }

    for (mode, eps) in [
        (PictureMode::RealC, 0.0),
        (PictureMode::ChartS, -0.1),
        (PictureMode::FrozenS, -0.1),
    ] {
        let r = picture_consistency(&psi, &h, 1.0, mode, &taus, eps, &k)?;
        println!(
            "{mode:?}: max deviation {:.2e}, final norm ratio {:.4}, integrator error {:.1e}",
            r.max_deviation, r.norm_ratios[20], r.integrator_error
        );
    }
    Ok(())
}
