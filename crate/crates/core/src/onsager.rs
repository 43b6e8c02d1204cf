//! Linear irreversible thermodynamics: `ydot = L Y`, `Y = dS/dy = -G y`,
//! `R = L^-1`, and the two equal quadratic forms of the entropy production.

use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hpicture::validate_grid;

/// Largest accepted condition number of `L`.
pub const MAX_CONDITION: f64 = 1e12;
/// Relative asymmetry below which `L` counts as reciprocal.
pub const RECIPROCITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OnsagerSystem {
    l: DMatrix<f64>,
    r: DMatrix<f64>,
    g: DMatrix<f64>,
    y0: DVector<f64>,
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn check_square(m: &DMatrix<f64>, name: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::param(
            name,
            format!("must be square, got {}x{}", m.nrows(), m.ncols()),
        ));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::param(name, "entries must be finite"));
    }
    Ok(())
}

impl OnsagerSystem {
    pub fn new(l: DMatrix<f64>, g: DMatrix<f64>, y0: DVector<f64>) -> Result<Self> {
        check_square(&l, "L")?;
        check_square(&g, "G")?;
        let n = l.nrows();
        if n == 0 {
            return Err(Error::param("N", "dimension must be >= 1"));
        }
        for found in [g.nrows(), y0.len()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        if (&g - g.transpose()).norm() > RECIPROCITY_TOL * g.norm() {
            return Err(Error::param("G", "entropy Hessian must be symmetric"));
        }
        if g.clone().cholesky().is_none() {
            return Err(Error::param(
                "G",
                "entropy Hessian must be positive definite",
            ));
        }
        let cond = condition_number(&l);
        if cond.is_nan() || cond > MAX_CONDITION {
            return Err(Error::IllConditioned(cond));
        }
        let r = l
            .clone()
            .try_inverse()
            .ok_or(Error::IllConditioned(f64::INFINITY))?;
        let resid = (&r * &l - DMatrix::identity(n, n)).norm();
        if resid > 1e-10 {
            return Err(Error::IllConditioned(cond));
        }
        Ok(OnsagerSystem { l, r, g, y0 })
    }

    /// Random SPD `L` and `G` (`A^T A / n + shift I`) and normal `y0`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spd = |rng: &mut ChaCha8Rng| {
            let a = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
            let m = a.transpose() * &a / n as f64 + DMatrix::identity(n, n) * 0.5;
            (&m + m.transpose()) * 0.5
        };
        let l = spd(&mut rng);
        let g = spd(&mut rng);
        let y0 = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        Self::new(l, g, y0)
    }

    pub fn from_descriptor(desc: &OnsagerDescriptor) -> Result<Self> {
        let n = desc.n;
        for (name, v, want) in [
            ("L", &desc.l, n * n),
            ("G", &desc.g, n * n),
            ("y0", &desc.y0, n),
        ] {
            if v.len() != want {
                return Err(Error::Config(format!(
                    "{name} has {} entries, expected {want}",
                    v.len()
                )));
            }
        }
        Self::new(
            DMatrix::from_row_slice(n, n, &desc.l),
            DMatrix::from_row_slice(n, n, &desc.g),
            DVector::from_column_slice(&desc.y0),
        )
    }

    pub fn read_descriptor(path: impl AsRef<Path>) -> Result<Self> {
        let desc: OnsagerDescriptor = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        Self::from_descriptor(&desc)
    }

    pub fn to_descriptor(&self) -> OnsagerDescriptor {
        let row_major = |m: &DMatrix<f64>| m.transpose().iter().copied().collect();
        OnsagerDescriptor {
            n: self.dim(),
            l: row_major(&self.l),
            g: row_major(&self.g),
            y0: self.y0.iter().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn kinetic(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn resistance(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn y0(&self) -> &DVector<f64> {
        &self.y0
    }

    /// `S(y) - S_eq = -y^T G y / 2`.
    pub fn entropy(&self, y: &DVector<f64>) -> Result<f64> {
        self.check(y)?;
        Ok(-0.5 * y.dot(&(&self.g * y)))
    }

    /// Symmetric positive-definite `L`: the dissipative case.
    pub fn is_dissipative(&self) -> bool {
        reciprocity_check(&self.l)
            .map(|r| r.symmetric)
            .unwrap_or(false)
            && self.l.clone().cholesky().is_some()
    }

    /// Smallest eigenvalue of the symmetric part of `L G`; bounds the decay
    /// `|y(t')| <= |y0| exp(-lambda t')`.
    pub fn lyapunov_rate(&self) -> f64 {
        let lg = &self.l * &self.g;
        let sym = (&lg + lg.transpose()) * 0.5;
        SymmetricEigen::new(sym).eigenvalues.min()
    }

    fn check(&self, y: &DVector<f64>) -> Result<()> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: y.len(),
            });
        }
        Ok(())
    }
}

/// JSON system descriptor; matrices are row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnsagerDescriptor {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: Vec<f64>,
    #[serde(rename = "G")]
    pub g: Vec<f64>,
    pub y0: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OnsagerTrajectory {
    pub tprimes: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub entropy_rates: Vec<f64>,
    /// `S(y) - S_eq` along the trajectory.
    pub entropies: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRate {
    pub via_velocities: f64,
    pub via_forces: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reciprocity {
    pub symmetric: bool,
    pub asymmetry_norm: f64,
}

/// `Y = -G y`.
pub fn forces(system: &OnsagerSystem, y: &DVector<f64>) -> Result<DVector<f64>> {
    system.check(y)?;
    Ok(-(&system.g * y))
}

/// Exact solution of `ydot = -L G y` on an ascending grid from zero.
///
/// Reciprocal `L` goes through the symmetric similarity
/// `G^{1/2} L G^{1/2}`; otherwise each point uses a dense matrix exponential.
pub fn relax(system: &OnsagerSystem, tprime_grid: &[f64]) -> Result<OnsagerTrajectory> {
    validate_grid(tprime_grid)?;
    let reciprocal = reciprocity_check(&system.l)?.symmetric;
    let propagate: Box<dyn Fn(f64) -> DVector<f64>> = if reciprocal {
        let ge = SymmetricEigen::new(system.g.clone());
        let sqrt = ge.eigenvalues.map(f64::sqrt);
        let gh = &ge.eigenvectors * DMatrix::from_diagonal(&sqrt) * ge.eigenvectors.transpose();
        let gh_inv = &ge.eigenvectors
            * DMatrix::from_diagonal(&sqrt.map(|x| 1.0 / x))
            * ge.eigenvectors.transpose();
        let l_sym = (&system.l + system.l.transpose()) * 0.5;
        let m = &gh * l_sym * &gh;
        let me = SymmetricEigen::new((&m + m.transpose()) * 0.5);
        let z0 = me.eigenvectors.transpose() * (&gh * &system.y0);
        let q = me.eigenvectors;
        let rates = me.eigenvalues;
        Box::new(move |t| {
            let zt = DVector::from_fn(z0.len(), |i, _| z0[i] * (-rates[i] * t).exp());
            &gh_inv * (&q * zt)
        })
    } else {
        let a = -(&system.l * &system.g);
        let y0 = system.y0.clone();
        Box::new(move |t| (&a * t).exp() * &y0)
    };
    let mut out = OnsagerTrajectory {
        tprimes: tprime_grid.to_vec(),
        ys: Vec::with_capacity(tprime_grid.len()),
        entropy_rates: Vec::with_capacity(tprime_grid.len()),
        entropies: Vec::with_capacity(tprime_grid.len()),
    };
    for &t in tprime_grid {
        let y = propagate(t);
        out.entropy_rates.push(entropy_rate(system, &y)?.via_forces);
        out.entropies.push(system.entropy(&y)?);
        out.ys.push(y.iter().copied().collect());
    }
    Ok(out)
}

/// `ydot^T R ydot` and `Y^T L Y` with `ydot = L Y`, evaluated separately.
pub fn entropy_rate(system: &OnsagerSystem, y: &DVector<f64>) -> Result<EntropyRate> {
    let yf = forces(system, y)?;
    let ydot = &system.l * &yf;
    Ok(EntropyRate {
        via_velocities: ydot.dot(&(&system.r * &ydot)),
        via_forces: yf.dot(&(&system.l * &yf)),
    })
}

/// `(ydot^T R ydot + Y^T L Y) / 2`.
pub fn harmonic_hamiltonian(system: &OnsagerSystem, y: &DVector<f64>) -> Result<f64> {
    let r = entropy_rate(system, y)?;
    Ok(0.5 * (r.via_velocities + r.via_forces))
}

/// `|L - L^T| / |L|` (Frobenius); a zero matrix is symmetric.
pub fn reciprocity_check(l: &DMatrix<f64>) -> Result<Reciprocity> {
    check_square(l, "L")?;
    let norm = l.norm();
    let asymmetry_norm = if norm == 0.0 {
        0.0
    } else {
        (l - l.transpose()).norm() / norm
    };
    Ok(Reciprocity {
        symmetric: asymmetry_norm <= RECIPROCITY_TOL,
        asymmetry_norm,
    })
}

/// `t' = i t`.
pub fn wick_map(t: f64) -> Complex64 {
    Complex64::new(0.0, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, l: &[f64], g: &[f64], y0: &[f64]) -> OnsagerSystem {
        OnsagerSystem::new(
            DMatrix::from_row_slice(n, n, l),
            DMatrix::from_row_slice(n, n, g),
            DVector::from_column_slice(y0),
        )
        .unwrap()
    }

    #[test]
    fn forces_examples() {
        let s = sys(2, &[1.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0]);
        assert_eq!(
            forces(&s, &DVector::from_vec(vec![1.0, 0.0]))
                .unwrap()
                .as_slice(),
            &[-1.0, 0.0]
        );
        assert_eq!(
            forces(&s, &DVector::zeros(2)).unwrap().as_slice(),
            &[0.0, 0.0]
        );
        let s = sys(2, &[1.0, 0.0, 0.0, 1.0], &[2.0, 0.0, 0.0, 3.0], &[0.0, 0.0]);
        assert_eq!(
            forces(&s, &DVector::from_vec(vec![1.0, 1.0]))
                .unwrap()
                .as_slice(),
            &[-2.0, -3.0]
        );
        assert!(matches!(
            forces(&s, &DVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scalar_decay() {
        let s = sys(1, &[1.0], &[1.0], &[1.0]);
        let grid = [0.0, 0.5, 1.0, 4.0];
        let tr = relax(&s, &grid).unwrap();
        for (t, y) in grid.iter().zip(&tr.ys) {
            assert!((y[0] - (-t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn decay_rates_are_eigenvalues_of_l() {
        let s = sys(2, &[2.0, 1.0, 1.0, 2.0], &[1.0, 0.0, 0.0, 1.0], &[1.0, 0.0]);
        // y0 = (e1 + e2)/2 + (e1 - e2)/2 with rates 3 and 1
        let tr = relax(&s, &[0.0, 0.7]).unwrap();
        let (a, b) = ((-3.0 * 0.7f64).exp() / 2.0, (-0.7f64).exp() / 2.0);
        assert!((tr.ys[1][0] - (a + b)).abs() < 1e-14);
        assert!((tr.ys[1][1] - (a - b)).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_l_is_flagged_but_integrates() {
        let s = sys(
            2,
            &[2.0, 0.5, -0.5, 2.0],
            &[1.0, 0.0, 0.0, 1.0],
            &[1.0, 1.0],
        );
        let rc = reciprocity_check(s.kinetic()).unwrap();
        assert!(!rc.symmetric);
        assert!(!s.is_dissipative());
        let tr = relax(&s, &[0.0, 1.0, 3.0]).unwrap();
        // rotation-plus-decay: |y| = |y0| e^{-2t}
        let n = |y: &Vec<f64>| (y[0] * y[0] + y[1] * y[1]).sqrt();
        assert!((n(&tr.ys[2]) - 2f64.sqrt() * (-6.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn entropy_rate_examples() {
        let s = sys(1, &[2.0], &[1.0], &[1.0]);
        let r = entropy_rate(&s, &DVector::from_vec(vec![1.0])).unwrap();
        assert!((r.via_velocities - 2.0).abs() < 1e-15 && (r.via_forces - 2.0).abs() < 1e-15);
        assert!(
            (harmonic_hamiltonian(&s, &DVector::from_vec(vec![1.0])).unwrap() - 2.0).abs() < 1e-15
        );
        let z = entropy_rate(&s, &DVector::zeros(1)).unwrap();
        assert_eq!((z.via_velocities, z.via_forces), (0.0, 0.0));
        assert_eq!(harmonic_hamiltonian(&s, &DVector::zeros(1)).unwrap(), 0.0);
    }

    #[test]
    fn random_forms_agree() {
        let s = OnsagerSystem::random(5, 42).unwrap();
        assert!(s.is_dissipative());
        let r = entropy_rate(&s, s.y0()).unwrap();
        let scale = r.via_velocities.abs().max(r.via_forces.abs());
        assert!((r.via_velocities - r.via_forces).abs() <= 1e-12 * scale);
        let hh = harmonic_hamiltonian(&s, s.y0()).unwrap();
        assert!((hh - r.via_forces).abs() <= 1e-12 * scale);
        assert!(hh > 0.0);
    }

    #[test]
    fn reciprocity_examples() {
        let sym = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 2.0]);
        assert_eq!(
            reciprocity_check(&sym).unwrap(),
            Reciprocity {
                symmetric: true,
                asymmetry_norm: 0.0
            }
        );
        let l = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let rc = reciprocity_check(&l).unwrap();
        assert!(!rc.symmetric);
        assert!((rc.asymmetry_norm - 2f64.sqrt() / 3f64.sqrt()).abs() < 1e-15);
        assert!(reciprocity_check(&DMatrix::zeros(2, 3)).is_err());
        assert!(
            reciprocity_check(OnsagerSystem::random(6, 1).unwrap().kinetic())
                .unwrap()
                .symmetric
        );
    }

    #[test]
    fn singular_l_rejected() {
        let r = OnsagerSystem::new(
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]),
            DMatrix::identity(2, 2),
            DVector::zeros(2),
        );
        assert!(matches!(r, Err(Error::IllConditioned(_))));
        let r = OnsagerSystem::new(
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-13]),
            DMatrix::identity(2, 2),
            DVector::zeros(2),
        );
        assert!(matches!(r, Err(Error::IllConditioned(_))));
        let r = OnsagerSystem::new(
            DMatrix::identity(2, 2),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
            DVector::zeros(2),
        );
        assert!(r.is_err());
    }

    #[test]
    fn entropy_increases_along_relaxation() {
        let s = OnsagerSystem::random(6, 8).unwrap();
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let tr = relax(&s, &grid).unwrap();
        assert!(tr.entropy_rates.iter().all(|&r| r >= -1e-12));
        assert!(tr.entropies.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        let lam = s.lyapunov_rate();
        let n0 = s.y0().norm();
        for (t, y) in grid.iter().zip(&tr.ys) {
            let n = DVector::from_column_slice(y).norm();
            assert!(n <= n0 * (-lam * t).exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let s = sys(
            2,
            &[2.0, 0.5, 0.5, 1.0],
            &[3.0, 0.0, 0.0, 1.0],
            &[1.0, -1.0],
        );
        let json = serde_json::to_string(&s.to_descriptor()).unwrap();
        assert!(json.contains("\"N\":2"));
        let back = OnsagerSystem::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.kinetic(), s.kinetic());
        assert_eq!(back.to_descriptor().l, vec![2.0, 0.5, 0.5, 1.0]);
        let bad = OnsagerDescriptor {
            n: 2,
            l: vec![1.0],
            g: vec![1.0, 0.0, 0.0, 1.0],
            y0: vec![0.0, 0.0],
        };
        assert!(OnsagerSystem::from_descriptor(&bad).is_err());
    }

    #[test]
    fn wick_map_examples() {
        assert_eq!(wick_map(0.0), Complex64::new(0.0, 0.0));
        assert_eq!(wick_map(1.0), Complex64::i());
        assert_eq!(wick_map(-2.0), Complex64::new(0.0, -2.0));
    }
}
