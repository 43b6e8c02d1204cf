//! Entropic Schrödinger evolution `dpsi/dtau = kappa S psi / kB`.
//!
//! The weak-field coefficient is `kappa = i - epsilon` (`C = 1 + i epsilon`);
//! a full Wick factor gives `kappa = i C`. Constant generators are
//! exponentiated exactly. Schedules `S(tau)` are integrated with ordered
//! products of midpoint factors, halving the step until successive
//! refinements agree, then Richardson-extrapolating the last pair.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::wick::WickFactor;
use crate::error::{Error, Result};
use crate::hpicture::validate_grid;
use crate::opcore::{expectation, HermitianOperator, StateVector};
use crate::units::Constants;

pub type ScheduleFn = dyn Fn(f64) -> HermitianOperator + Send + Sync;

/// Generator of the S-picture evolution.
#[derive(Clone)]
pub enum GeneratorSchedule {
    Constant(HermitianOperator),
    /// Side-effect-free callable, sampled piecewise-constant at midpoints.
    Piecewise(Arc<ScheduleFn>),
}

impl fmt::Debug for GeneratorSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSchedule::Constant(s) => f.debug_tuple("Constant").field(&s.dim()).finish(),
            GeneratorSchedule::Piecewise(_) => f.write_str("Piecewise(..)"),
        }
    }
}

impl GeneratorSchedule {
    pub fn constant(s: HermitianOperator) -> Self {
        GeneratorSchedule::Constant(s)
    }

    pub fn piecewise<F>(f: F) -> Self
    where
        F: Fn(f64) -> HermitianOperator + Send + Sync + 'static,
    {
        GeneratorSchedule::Piecewise(Arc::new(f))
    }

    pub fn at(&self, tau: f64) -> HermitianOperator {
        match self {
            GeneratorSchedule::Constant(s) => s.clone(),
            GeneratorSchedule::Piecewise(f) => f(tau),
        }
    }
}

/// Complex coefficient `kappa` in `kB dpsi/dtau = kappa S psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation {
    kappa: Complex64,
}

impl Propagation {
    /// `kappa = i - epsilon`.
    pub fn weak_field(epsilon: f64) -> Self {
        Propagation {
            kappa: Complex64::new(-epsilon, 1.0),
        }
    }

    /// `kappa = i C` with an arbitrary Wick factor.
    pub fn with_c(c: Complex64) -> Self {
        Propagation {
            kappa: Complex64::i() * c,
        }
    }

    /// `kappa = i e^{i phi(x)}`, no weak-field truncation.
    pub fn from_wick(w: &WickFactor) -> Self {
        Self::with_c(w.c)
    }

    pub fn kappa(&self) -> Complex64 {
        self.kappa
    }

    /// Effective `epsilon = -Re(kappa)`; positive means contraction.
    pub fn epsilon(&self) -> f64 {
        -self.kappa.re
    }

    /// Prefactor `1/kappa` in `(1/kappa) kB dpsi/dtau = S psi`.
    pub fn equation_lhs(&self) -> Complex64 {
        self.kappa.inv()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub allow_antidissipative: bool,
    pub rtol: f64,
    pub max_halvings: u32,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            allow_antidissipative: false,
            rtol: 1e-8,
            max_halvings: 22,
        }
    }
}

#[derive(Debug, Clone)]
pub struct STrajectory {
    pub taus: Vec<f64>,
    pub states: Vec<StateVector>,
    pub norms: Vec<f64>,
    pub entropy_expectations: Vec<f64>,
}

/// Weak-field evolution with default options.
pub fn evolve_s(
    psi0: &StateVector,
    schedule: &GeneratorSchedule,
    tau_grid: &[f64],
    epsilon: f64,
    constants: &Constants,
) -> Result<STrajectory> {
    evolve_s_with(
        psi0,
        schedule,
        tau_grid,
        Propagation::weak_field(epsilon),
        &EvolveOptions::default(),
        constants,
    )
}

pub fn evolve_s_with(
    psi0: &StateVector,
    schedule: &GeneratorSchedule,
    tau_grid: &[f64],
    propagation: Propagation,
    options: &EvolveOptions,
    constants: &Constants,
) -> Result<STrajectory> {
    constants.validate()?;
    validate_grid(tau_grid)?;
    let eps = propagation.epsilon();
    if !eps.is_finite() {
        return Err(Error::param("epsilon", "must be finite"));
    }
    if eps > 0.0 && !options.allow_antidissipative {
        return Err(Error::Antidissipative(eps));
    }
    let z_unit = propagation.kappa / constants.k_b;

    let states = match schedule {
        GeneratorSchedule::Constant(s) => {
            check_dim(s, psi0)?;
            let d = s.decompose();
            tau_grid
                .iter()
                .map(|&tau| d.exp_apply(z_unit * tau, psi0))
                .collect::<Result<Vec<_>>>()?
        }
        GeneratorSchedule::Piecewise(f) => {
            let mut out = Vec::with_capacity(tau_grid.len());
            let mut psi = psi0.clone();
            out.push(psi.clone());
            for w in tau_grid.windows(2) {
                psi = ordered_interval(f.as_ref(), &psi, w[0], w[1], z_unit, options)?;
                out.push(psi.clone());
            }
            out
        }
    };

    let mut traj = STrajectory {
        taus: tau_grid.to_vec(),
        norms: states.iter().map(StateVector::norm).collect(),
        entropy_expectations: Vec::with_capacity(states.len()),
        states,
    };
    for (tau, psi) in traj.taus.iter().zip(&traj.states) {
        traj.entropy_expectations
            .push(expectation(&schedule.at(*tau), psi)?);
    }
    Ok(traj)
}

fn check_dim(s: &HermitianOperator, psi: &StateVector) -> Result<()> {
    if s.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Ordered product of `steps` midpoint factors across `[a, b]`.
fn midpoint_product(
    f: &ScheduleFn,
    psi: &StateVector,
    a: f64,
    b: f64,
    steps: usize,
    z_unit: Complex64,
) -> Result<StateVector> {
    let h = (b - a) / steps as f64;
    let mut out = psi.clone();
    for k in 0..steps {
        let s = f(a + (k as f64 + 0.5) * h);
        check_dim(&s, &out)?;
        out = s.decompose().exp_apply(z_unit * h, &out)?;
    }
    Ok(out)
}

fn ordered_interval(
    f: &ScheduleFn,
    psi: &StateVector,
    a: f64,
    b: f64,
    z_unit: Complex64,
    options: &EvolveOptions,
) -> Result<StateVector> {
    let mut steps = 1usize;
    let mut coarse = midpoint_product(f, psi, a, b, steps, z_unit)?;
    let mut last_change = f64::INFINITY;
    for _ in 0..options.max_halvings {
        steps *= 2;
        let fine = midpoint_product(f, psi, a, b, steps, z_unit)?;
        let diff = fine.distance(&coarse);
        last_change = diff;
        if diff <= options.rtol * fine.norm() {
            // second-order scheme: error of `fine` is ~ diff / 3
            let corrected =
                fine.amplitudes() + (fine.amplitudes() - coarse.amplitudes()).unscale(3.0);
            return StateVector::new(corrected);
        }
        coarse = fine;
    }
    Err(Error::NonConvergent {
        halvings: options.max_halvings,
        last_change,
    })
}

/// Relative residual `||lhs kB dpsi/dtau - S psi|| / ||S psi||` at the
/// midpoints of consecutive grid points, using central differences.
///
/// `lhs = 1/kappa` tests the equation actually integrated;
/// `lhs = -(i + epsilon)` tests its first-order weak-field form.
pub fn equation_residuals(
    traj: &STrajectory,
    schedule: &GeneratorSchedule,
    lhs: Complex64,
    constants: &Constants,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(traj.taus.len().saturating_sub(1));
    for k in 0..traj.taus.len().saturating_sub(1) {
        let h = traj.taus[k + 1] - traj.taus[k];
        let (a, b) = (traj.states[k].amplitudes(), traj.states[k + 1].amplitudes());
        let deriv = (b - a) / Complex64::new(h, 0.0);
        let mid = StateVector::new((a + b) / Complex64::new(2.0, 0.0))?;
        let s_psi = schedule
            .at(0.5 * (traj.taus[k] + traj.taus[k + 1]))
            .apply(&mid)?;
        let lhs_vec = deriv * (lhs * constants.k_b);
        let denom = s_psi.norm();
        let r = (lhs_vec - s_psi.amplitudes()).norm();
        out.push(if denom > 0.0 { r / denom } else { r });
    }
    Ok(out)
}
