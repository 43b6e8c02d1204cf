//! Gaussian thermodynamic fluctuations of a simple fluid, their canonical
//! log-coordinates, and the symplectic area / boundary action pair.

mod symplectic;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Constants;
pub use symplectic::{
    boundary_action, boundary_action_path, random_smooth_patch, symplectic_area, BoundaryPath,
    DiskPatch, FnPatch, Plane, RectanglePatch, SymplecticPatch, TwoPlanePatch,
};

/// Minimum sample count accepted by [`covariance_report`].
pub const MIN_REPORT_SAMPLES: usize = 1000;

/// Equilibrium reference state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoReference {
    pub p0: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "S0")]
    pub s0: f64,
    /// `C_V`, energy per temperature.
    pub heat_capacity_cv: f64,
    /// `(dV/dp)_T`, negative for a stable phase.
    pub compressibility_term: f64,
}

impl ThermoReference {
    pub fn new(
        p0: f64,
        v0: f64,
        t0: f64,
        s0: f64,
        heat_capacity_cv: f64,
        compressibility_term: f64,
    ) -> Result<Self> {
        let r = ThermoReference {
            p0,
            v0,
            t0,
            s0,
            heat_capacity_cv,
            compressibility_term,
        };
        r.validate()?;
        Ok(r)
    }

    /// Monatomic ideal gas: `S0 = p0 V0 / T0`, `C_V = 3 S0 / 2`,
    /// `(dV/dp)_T = -V0 / p0`.
    pub fn ideal_gas(p0: f64, v0: f64, t0: f64) -> Result<Self> {
        let s0 = p0 * v0 / t0;
        Self::new(p0, v0, t0, s0, 1.5 * s0, -v0 / p0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p0", self.p0),
            ("V0", self.v0),
            ("T0", self.t0),
            ("S0", self.s0),
            ("heat_capacity_cv", self.heat_capacity_cv),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be > 0, got {v}")));
            }
        }
        let c = self.compressibility_term;
        if !(c.is_finite() && c < 0.0) {
            return Err(Error::param(
                "compressibility_term",
                format!("must be < 0, got {c}"),
            ));
        }
        Ok(())
    }

    /// Relative violation of `p0 V0 = S0 T0`.
    pub fn ideal_gas_residual(&self) -> f64 {
        (self.p0 * self.v0 - self.s0 * self.t0).abs() / (self.p0 * self.v0)
    }

    pub fn var_t(&self, constants: &Constants) -> f64 {
        constants.k_b * self.t0 * self.t0 / self.heat_capacity_cv
    }

    pub fn var_v(&self, constants: &Constants) -> f64 {
        -constants.k_b * self.t0 * self.compressibility_term
    }
}

/// One joint fluctuation, physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSample {
    pub dp: f64,
    #[serde(rename = "dV")]
    pub dv: f64,
    #[serde(rename = "dT")]
    pub dt: f64,
    #[serde(rename = "dS")]
    pub ds: f64,
}

/// Draws `n` joint fluctuations. Sample `i` depends only on `(seed, i)`.
///
/// `(dT, dV)` are independent Gaussians; `dS` and `dp` follow linearly via
/// ideal-gas partials `(dp/dT)_V = S0/V0`, `(dp/dV)_T = -p0/V0`.
pub fn gaussian_sample(
    reference: &ThermoReference,
    n: usize,
    seed: u64,
    constants: &Constants,
) -> Result<Vec<FluctuationSample>> {
    reference.validate()?;
    constants.validate()?;
    if n == 0 {
        return Err(Error::param("n", "need at least one sample"));
    }
    let sd_t = reference.var_t(constants).sqrt();
    let sd_v = reference.var_v(constants).sqrt();
    let dp_dt = reference.s0 / reference.v0;
    let dp_dv = -reference.p0 / reference.v0;
    let cv_t = reference.heat_capacity_cv / reference.t0;
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let dt = sd_t * Distribution::<f64>::sample(&StandardNormal, &mut rng);
            let dv = sd_v * Distribution::<f64>::sample(&StandardNormal, &mut rng);
            FluctuationSample {
                dp: dp_dt * dt + dp_dv * dv,
                dv,
                dt,
                ds: cv_t * dt + dp_dt * dv,
            }
        })
        .collect())
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_values(values: impl Iterator<Item = f64> + Clone, n: usize) -> Self {
        let nf = n as f64;
        let mean = values.clone().sum::<f64>() / nf;
        let var = values.map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        Estimate {
            mean,
            std_error: (var / nf).sqrt(),
        }
    }

    /// `|mean - target|` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.std_error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub n: usize,
    /// `<dS dT> / (kB T0)`; 1 in the Gaussian limit.
    #[serde(rename = "ds_dt_over_kBT")]
    pub ds_dt_over_kbt: Estimate,
    /// `<dp dV> / (kB T0)`; -1 for the ideal gas.
    #[serde(rename = "dp_dV_over_kBT")]
    pub dp_dv_over_kbt: Estimate,
    /// `<dT dV> / (sd_T sd_V)`, the standardized cross term; 0.
    #[serde(rename = "dT_dV")]
    pub dt_dv: Estimate,
    /// `<dS dtau> / kB` with `dtau = dT / T0`; 1.
    #[serde(rename = "ds_dtau_over_kB")]
    pub ds_dtau_over_kb: Estimate,
    /// `<-dp dV + dT dS> / (kB T0)`; positive for a stable ensemble.
    #[serde(rename = "stability_form_over_kBT")]
    pub stability_form_over_kbt: Estimate,
}

pub fn covariance_report(
    samples: &[FluctuationSample],
    reference: &ThermoReference,
    constants: &Constants,
) -> Result<CovarianceReport> {
    if samples.len() < MIN_REPORT_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_REPORT_SAMPLES,
            got: samples.len(),
        });
    }
    let n = samples.len();
    let kt = constants.k_b * reference.t0;
    let sd = (reference.var_t(constants) * reference.var_v(constants)).sqrt();
    let t0 = reference.t0;
    let kb = constants.k_b;
    Ok(CovarianceReport {
        n,
        ds_dt_over_kbt: Estimate::from_values(samples.iter().map(|s| s.ds * s.dt / kt), n),
        dp_dv_over_kbt: Estimate::from_values(samples.iter().map(|s| s.dp * s.dv / kt), n),
        dt_dv: Estimate::from_values(samples.iter().map(|s| s.dt * s.dv / sd), n),
        ds_dtau_over_kb: Estimate::from_values(samples.iter().map(|s| s.ds * (s.dt / t0) / kb), n),
        stability_form_over_kbt: Estimate::from_values(
            samples.iter().map(|s| (-s.dp * s.dv + s.dt * s.ds) / kt),
            n,
        ),
    })
}

/// Writes `dp,dV,dT,dS` rows.
pub fn write_samples_csv<W: Write>(samples: &[FluctuationSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

/// Absolute thermodynamic state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub p: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

/// Dimensionless canonical coordinates. The reference state with `S = S0`
/// sits at `(0, 0, 0, 1)`: the entropy coordinate is not shifted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPoint {
    pub p1: f64,
    pub q1: f64,
    pub p2: f64,
    pub q2: f64,
}

/// Increments of canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CanonicalDelta {
    pub dp1: f64,
    pub dq1: f64,
    pub dp2: f64,
    pub dq2: f64,
}

impl CanonicalPoint {
    pub fn delta_to(&self, other: &CanonicalPoint) -> CanonicalDelta {
        CanonicalDelta {
            dp1: other.p1 - self.p1,
            dq1: other.q1 - self.q1,
            dp2: other.p2 - self.p2,
            dq2: other.q2 - self.q2,
        }
    }
}

/// `p1 = -ln(p/p0)`, `q1 = ln(V/V0)`, `p2 = ln(T/T0)`, `q2 = S/S0`.
pub fn to_canonical(state: &ThermoState, reference: &ThermoReference) -> Result<CanonicalPoint> {
    reference.validate()?;
    for (name, v) in [("p", state.p), ("V", state.v), ("T", state.t)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::param(name, format!("must be > 0, got {v}")));
        }
    }
    Ok(CanonicalPoint {
        p1: -(state.p / reference.p0).ln(),
        q1: (state.v / reference.v0).ln(),
        p2: (state.t / reference.t0).ln(),
        q2: state.s / reference.s0,
    })
}

/// Canonical increments of a fluctuation to first order in the deviations.
pub fn linearized_delta(sample: &FluctuationSample, reference: &ThermoReference) -> CanonicalDelta {
    CanonicalDelta {
        dp1: -sample.dp / reference.p0,
        dq1: sample.dv / reference.v0,
        dp2: sample.dt / reference.t0,
        dq2: sample.ds / reference.s0,
    }
}

/// `-(S0 / 2kB)(dp1 dq1 + dp2 dq2)`, unnormalized.
pub fn log_probability(
    delta: &CanonicalDelta,
    reference: &ThermoReference,
    constants: &Constants,
) -> f64 {
    -reference.s0 / (2.0 * constants.k_b) * (delta.dp1 * delta.dq1 + delta.dp2 * delta.dq2)
}

/// Physical-units exponent `-(1/2kB)(-S0 dp dV / (p0 V0) + dT dS / T0)`.
pub fn log_probability_physical(
    sample: &FluctuationSample,
    reference: &ThermoReference,
    constants: &Constants,
) -> f64 {
    let mech = -reference.s0 * sample.dp * sample.dv / (reference.p0 * reference.v0);
    let thermal = sample.dt * sample.ds / reference.t0;
    -(mech + thermal) / (2.0 * constants.k_b)
}
