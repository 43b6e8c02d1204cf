//! Cross-checks between the energy picture (integrated in `t`) and the
//! entropy picture (integrated in `tau`) at matched points of the chart
//! `t(tau) = hbar / (kB T0 e^tau)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::evolve::{evolve_s_with, EvolveOptions, GeneratorSchedule, Propagation};
use crate::error::{Error, Result};
use crate::hpicture::propagate_h;
use crate::opcore::{HermitianOperator, StateVector};
use crate::units::{Constants, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PictureMode {
    /// `C = 1`, `epsilon = 0`, chart generator `S(tau) = H e^{-tau} / T0`.
    #[serde(rename = "real_C")]
    RealC,
    /// `S` frozen at `H / T0`.
    #[serde(rename = "frozen_S")]
    FrozenS,
    /// `S(tau) = H e^{-tau} / T0` with dissipation.
    #[serde(rename = "chart_S")]
    ChartS,
}

impl std::str::FromStr for PictureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real_C" => Ok(PictureMode::RealC),
            "frozen_S" => Ok(PictureMode::FrozenS),
            "chart_S" => Ok(PictureMode::ChartS),
            other => Err(Error::Config(format!("unknown picture mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PictureReport {
    pub mode: PictureMode,
    pub taus: Vec<f64>,
    /// Clock times `t(tau)` matched to each grid point.
    pub times: Vec<f64>,
    /// Per-point deviation from the energy picture. Phase-sensitive state
    /// distance for `real_C`; ray distance (global phase and norm removed)
    /// for the dissipative modes.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// Norm of the S-picture state relative to its initial norm.
    pub norm_ratios: Vec<f64>,
    /// Distance of the integrated S-picture states from the closed-form
    /// spectral solution.
    pub integrator_error: f64,
}

/// Closed-form S-picture state: `exp(kappa H g(tau) / (kB T0)) psi0`, with
/// `g = tau` (frozen) or `g = 1 - e^{-tau}` (chart).
fn closed_form(
    decomp: &crate::opcore::SpectralDecomposition,
    psi0: &StateVector,
    kappa: Complex64,
    g: f64,
    t0: f64,
    constants: &Constants,
) -> Result<StateVector> {
    decomp.exp_apply(kappa * g / (constants.k_b * t0), psi0)
}

pub fn picture_consistency(
    psi0: &StateVector,
    h: &HermitianOperator,
    t0: f64,
    mode: PictureMode,
    tau_grid: &[f64],
    epsilon: f64,
    constants: &Constants,
) -> Result<PictureReport> {
    constants.validate()?;
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::param(
            "T0",
            format!("reference temperature must be > 0, got {t0}"),
        ));
    }
    if mode == PictureMode::RealC && epsilon != 0.0 {
        return Err(Error::param("epsilon", "real_C mode requires epsilon = 0"));
    }
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    let propagation = Propagation::weak_field(epsilon);
    let kappa = propagation.kappa();
    let chart_schedule = {
        let hh = h.clone();
        GeneratorSchedule::piecewise(move |tau| hh.scaled((-tau).exp() / t0, Unit::Entropy))
    };
    let schedule = match mode {
        PictureMode::FrozenS => GeneratorSchedule::constant(h.scaled(1.0 / t0, Unit::Entropy)),
        PictureMode::RealC | PictureMode::ChartS => chart_schedule,
    };
    let traj = evolve_s_with(
        psi0,
        &schedule,
        tau_grid,
        propagation,
        &EvolveOptions::default(),
        constants,
    )?;

    let decomp = h.decompose();
    let t_of = |tau: f64| constants.hbar / (constants.k_b * t0 * tau.exp());
    let t_start = t_of(0.0);
    let n0 = psi0.norm();

    let mut report = PictureReport {
        mode,
        taus: tau_grid.to_vec(),
        times: Vec::with_capacity(tau_grid.len()),
        deviations: Vec::with_capacity(tau_grid.len()),
        max_deviation: 0.0,
        norm_ratios: traj.norms.iter().map(|n| n / n0).collect(),
        integrator_error: 0.0,
    };
    for (&tau, psi_s) in tau_grid.iter().zip(&traj.states) {
        let t = t_of(tau);
        // align psi_H(t_start) = psi0 and run the energy picture to t(tau)
        let psi_h = propagate_h(&decomp, psi0, t - t_start, constants)?;
        let dev = match mode {
            PictureMode::RealC => psi_s.distance(&psi_h),
            _ => psi_s.ray_distance(&psi_h)?,
        };
        let g = match mode {
            PictureMode::FrozenS => tau,
            _ => -(-tau).exp_m1(),
        };
        let exact = closed_form(&decomp, psi0, kappa, g, t0, constants)?;
        report.integrator_error = report.integrator_error.max(psi_s.distance(&exact));
        report.max_deviation = report.max_deviation.max(dev);
        report.deviations.push(dev);
        report.times.push(t);
    }
    Ok(report)
}

/// Ray distance at `tau` between the frozen-`S` and chart-`S` closed forms.
pub fn generator_reading_divergence(
    psi0: &StateVector,
    h: &HermitianOperator,
    t0: f64,
    tau: f64,
    epsilon: f64,
    constants: &Constants,
) -> Result<f64> {
    let kappa = Propagation::weak_field(epsilon).kappa();
    let d = h.decompose();
    let frozen = closed_form(&d, psi0, kappa, tau, t0, constants)?;
    let chart = closed_form(&d, psi0, kappa, -(-tau).exp_m1(), t0, constants)?;
    frozen.ray_distance(&chart)
}
