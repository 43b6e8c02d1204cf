use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Gravity-controlled rotation of the time axis.
///
/// `phi = -(pi/2)(1 - e^{-x})`, `C = e^{i phi}` and the weak-field
/// parameter `epsilon = -pi x / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WickFactor {
    pub x: f64,
    pub phi: f64,
    pub c: Complex64,
    pub epsilon: f64,
}

impl WickFactor {
    /// Weak-field linearization `1 + i epsilon`.
    pub fn weak_field_c(&self) -> Complex64 {
        Complex64::new(1.0, self.epsilon)
    }

    /// Gravity strength reproducing a given weak-field `epsilon <= 0`.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        wick_factor(-2.0 * epsilon / std::f64::consts::PI)
    }
}

pub fn wick_factor(x: f64) -> Result<WickFactor> {
    if !x.is_finite() {
        return Err(Error::param("x", "gravity strength must be finite"));
    }
    if x < 0.0 {
        return Err(Error::param(
            "x",
            format!("gravity strength must be >= 0, got {x}"),
        ));
    }
    // -expm1(-x) = 1 - e^{-x} without cancellation at small x
    let phi = -FRAC_PI_2 * (-(-x).exp_m1());
    Ok(WickFactor {
        x,
        phi,
        c: Complex64::from_polar(1.0, phi),
        epsilon: -FRAC_PI_2 * x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, LN_2};

    #[test]
    fn no_gravity_is_unitary() {
        let w = wick_factor(0.0).unwrap();
        assert_eq!(w.phi, 0.0);
        assert_eq!(w.c, Complex64::new(1.0, 0.0));
        assert_eq!(w.epsilon, 0.0);
    }

    #[test]
    fn strong_field_limit() {
        let w = wick_factor(1e6).unwrap();
        assert!((w.phi + FRAC_PI_2).abs() < 1e-9);
        assert!((w.c - Complex64::new(0.0, -1.0)).norm() < 1e-9);
    }

    #[test]
    fn ln2_gives_quarter_turn() {
        let w = wick_factor(LN_2).unwrap();
        assert!((w.phi + FRAC_PI_4).abs() < 1e-12);
        assert!((w.c - Complex64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-12);
        assert!((w.epsilon + FRAC_PI_2 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn invariants_hold_on_a_sweep() {
        for i in 0..200 {
            let x = i as f64 * 0.05;
            let w = wick_factor(x).unwrap();
            assert!((w.phi + FRAC_PI_2 * (1.0 - (-x).exp())).abs() < 1e-12);
            assert!((w.c.norm() - 1.0).abs() < 1e-12);
            assert!((-FRAC_PI_2..=0.0).contains(&w.phi));
            assert!(w.epsilon <= 0.0);
        }
    }

    #[test]
    fn rejects_bad_x() {
        assert!(wick_factor(-0.1).is_err());
        assert!(wick_factor(f64::NAN).is_err());
        assert!(wick_factor(f64::INFINITY).is_err());
    }

    #[test]
    fn from_epsilon_round_trips() {
        let w = WickFactor::from_epsilon(-0.05).unwrap();
        assert!((w.epsilon + 0.05).abs() < 1e-16);
    }
}
