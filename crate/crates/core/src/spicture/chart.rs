use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opcore::HermitianOperator;
use crate::units::Constants;

/// Coordinate change between clock time `t`, temperature `T` and thermal
/// time `tau`: `C / t = kB T / hbar`, `tau = ln(T / T0)`.
///
/// For complex `C` the temperature attached to a real `t` is complex; only
/// the real-`C` branch round-trips through real values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalTimeChart {
    t0: f64,
    c: Complex64,
    constants: Constants,
    first_order: bool,
}

impl ThermalTimeChart {
    pub fn new(t0: f64, c: Complex64, constants: Constants) -> Result<Self> {
        constants.validate()?;
        if !(t0.is_finite() && t0 > 0.0) {
            return Err(Error::param(
                "T0",
                format!("reference temperature must be > 0, got {t0}"),
            ));
        }
        if c.norm() == 0.0 || !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::param("C", "Wick factor must be finite and nonzero"));
        }
        Ok(ThermalTimeChart {
            t0,
            c,
            constants,
            first_order: false,
        })
    }

    /// Chart with the weak-field factor `C = 1 + i epsilon`.
    pub fn weak_field(t0: f64, epsilon: f64, constants: Constants) -> Result<Self> {
        Self::new(t0, Complex64::new(1.0, epsilon), constants)
    }

    /// Replace `1/C` by its first-order expansion `2 - C` (drops `O(eps^2)`).
    pub fn with_first_order(mut self, first_order: bool) -> Self {
        self.first_order = first_order;
        self
    }

    pub fn reference_temperature(&self) -> f64 {
        self.t0
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn inverse_c(&self) -> Complex64 {
        if self.first_order {
            Complex64::new(2.0, 0.0) - self.c
        } else {
            self.c.inv()
        }
    }

    fn is_real(&self) -> bool {
        self.c.im == 0.0
    }

    /// `T = hbar C / (kB t)`; complex unless `C` is real.
    pub fn t_to_temperature(&self, t: f64) -> Result<Complex64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::param("t", format!("time must be > 0, got {t}")));
        }
        Ok(self.c * self.constants.hbar / (self.constants.k_b * t))
    }

    /// Real temperature; only defined on the real-`C` branch.
    pub fn t_to_real_temperature(&self, t: f64) -> Result<f64> {
        if !self.is_real() {
            return Err(Error::param(
                "C",
                "real temperature requires a real Wick factor",
            ));
        }
        let temp = self.t_to_temperature(t)?.re;
        if temp <= 0.0 {
            return Err(Error::param("C", "real branch requires C > 0"));
        }
        Ok(temp)
    }

    pub fn temperature_to_tau(&self, temperature: f64) -> Result<f64> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::param(
                "T",
                format!("temperature must be > 0, got {temperature}"),
            ));
        }
        Ok((temperature / self.t0).ln())
    }

    /// `t(tau) = hbar C / (kB T0 e^tau)`.
    pub fn tau_to_t(&self, tau: f64) -> Complex64 {
        self.c * self.constants.hbar / (self.constants.k_b * self.t0 * tau.exp())
    }

    /// `1/T = kB t / (hbar C)` evaluated with [`Self::inverse_c`].
    pub fn inverse_temperature(&self, t: f64) -> Result<Complex64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::param("t", format!("time must be > 0, got {t}")));
        }
        Ok(self.inverse_c() * self.constants.k_b * t / self.constants.hbar)
    }

    /// `S(t) = H / T(t)` along the chart.
    pub fn entropy_along_chart(&self, h: &HermitianOperator, t: f64) -> Result<DMatrix<Complex64>> {
        let inv_t = self.inverse_temperature(t)?;
        Ok(h.matrix().map(|z| z * inv_t))
    }
}
