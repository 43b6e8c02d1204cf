//! Energy-picture evolution: `i hbar dpsi/dt = H psi` and the
//! phenomenological variant `(i + eps') hbar dpsi/dt = H psi`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opcore::{expectation, HermitianOperator, SpectralDecomposition, StateVector};
use crate::units::Constants;

#[derive(Debug, Clone)]
pub struct HTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub energy_expectations: Vec<f64>,
    pub norms: Vec<f64>,
}

impl HTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// How the perturbed equation is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationMode {
    /// Closed form `exp[(eps' - i) H t / (hbar (1 + eps'^2))]`.
    #[default]
    Exact,
    /// Drops the `1/(1 + eps'^2)` factor.
    FirstOrder,
}

/// Checks that `grid` ascends strictly and starts at zero.
pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!(
            "first point is {}, not 0",
            grid[0]
        )));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "{} does not follow {}",
            w[1], w[0]
        )));
    }
    Ok(())
}

fn trajectory(
    psi0: &StateVector,
    h: &HermitianOperator,
    t_grid: &[f64],
    rate: Complex64,
) -> Result<HTrajectory> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    validate_grid(t_grid)?;
    let decomp = h.decompose();
    let mut out = HTrajectory {
        times: Vec::with_capacity(t_grid.len()),
        states: Vec::with_capacity(t_grid.len()),
        energy_expectations: Vec::with_capacity(t_grid.len()),
        norms: Vec::with_capacity(t_grid.len()),
    };
    for &t in t_grid {
        let psi = decomp.exp_apply(rate * t, psi0)?;
        out.energy_expectations.push(expectation(h, &psi)?);
        out.norms.push(psi.norm());
        out.times.push(t);
        out.states.push(psi);
    }
    Ok(out)
}

/// `psi(t) = exp(-i H t / hbar) psi0` on an ascending grid from zero.
pub fn evolve_h(
    psi0: &StateVector,
    h: &HermitianOperator,
    t_grid: &[f64],
    constants: &Constants,
) -> Result<HTrajectory> {
    constants.validate()?;
    trajectory(psi0, h, t_grid, Complex64::new(0.0, -1.0 / constants.hbar))
}

/// Single unitary step `exp(-i H t / hbar) psi` for any real `t`, including
/// negative times.
pub fn propagate_h(
    decomp: &SpectralDecomposition,
    psi: &StateVector,
    t: f64,
    constants: &Constants,
) -> Result<StateVector> {
    decomp.exp_apply(Complex64::new(0.0, -t / constants.hbar), psi)
}

/// Solves `(i + eps') hbar dpsi/dt = H psi` in closed form.
pub fn evolve_h_perturbed(
    psi0: &StateVector,
    h: &HermitianOperator,
    t_grid: &[f64],
    eps_prime: f64,
    mode: PerturbationMode,
    constants: &Constants,
) -> Result<HTrajectory> {
    constants.validate()?;
    if !(eps_prime.is_finite() && eps_prime.abs() < 1.0) {
        return Err(Error::param(
            "eps_prime",
            format!("|eps'| must be < 1, got {eps_prime}"),
        ));
    }
    let denom = match mode {
        PerturbationMode::Exact => 1.0 + eps_prime * eps_prime,
        PerturbationMode::FirstOrder => 1.0,
    };
    let rate = Complex64::new(eps_prime, -1.0) / (constants.hbar * denom);
    trajectory(psi0, h, t_grid, rate)
}

/// `max_t |<H>(t) - <H>(0)|`.
pub fn noether_energy_drift(traj: &HTrajectory) -> Result<f64> {
    let e0 = *traj
        .energy_expectations
        .first()
        .ok_or_else(|| Error::param("trajectory", "empty trajectory"))?;
    Ok(traj
        .energy_expectations
        .iter()
        .map(|e| (e - e0).abs())
        .fold(0.0, f64::max))
}
