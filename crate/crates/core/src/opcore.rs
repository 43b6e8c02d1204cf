//! Dense Hermitian operator core.
//!
//! All generators in this crate are Hermitian and desk-sized, so operator
//! exponentials are evaluated exactly through the spectral decomposition
//! `A = V diag(lambda) V^dagger` rather than by scaling and squaring.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Constants, Unit};

/// Relative Frobenius tolerance on `A - A^dagger`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Largest exponent accepted before `exp` leaves the f64 range.
const MAX_EXPONENT: f64 = 709.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
    unit: Unit,
}

impl HermitianOperator {
    /// Wraps `matrix`, rejecting (not symmetrizing) inputs whose relative
    /// asymmetry exceeds [`HERMITIAN_TOL`].
    pub fn new(matrix: DMatrix<Complex64>, unit: Unit) -> Result<Self> {
        if matrix.nrows() == 0 {
            return Err(Error::param("dim", "operator dimension must be >= 1"));
        }
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::param("entries", "operator has non-finite entries"));
        }
        let asymmetry = relative_asymmetry(&matrix);
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(HermitianOperator { matrix, unit })
    }

    pub fn from_real_diagonal(diag: &[f64], unit: Unit) -> Result<Self> {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&d), unit)
    }

    /// Builds from row-major real entries.
    pub fn from_real_rows(n: usize, rows: &[f64], unit: Unit) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: rows.len(),
            });
        }
        let m = DMatrix::from_row_iterator(n, n, rows.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(m, unit)
    }

    pub fn identity(n: usize, unit: Unit) -> Result<Self> {
        Self::new(DMatrix::identity(n, n), unit)
    }

    /// Gaussian Hermitian matrix `(B + B^dagger)/2`, deterministic in `seed`.
    pub fn random(n: usize, seed: u64, unit: Unit) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "dimension must be >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let a = (&b + b.adjoint()).map(|z| z * 0.5);
        Self::new(a, unit)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `factor * A` relabelled with `unit`.
    pub fn scaled(&self, factor: f64, unit: Unit) -> Self {
        HermitianOperator {
            matrix: self.matrix.map(|z| z * factor),
            unit,
        }
    }

    /// `A + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += Complex64::new(shift, 0.0);
        }
        HermitianOperator {
            matrix: m,
            unit: self.unit,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), psi.dim())?;
        Ok(StateVector(&self.matrix * &psi.0))
    }

    pub fn decompose(&self) -> SpectralDecomposition {
        spectral_decompose(self)
    }
}

fn relative_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / scale
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::param("dim", "state dimension must be >= 1"));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::param("amplitudes", "state has non-finite entries"));
        }
        Ok(StateVector(amplitudes))
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::param(
                "index",
                format!("{index} out of range for dim {dim}"),
            ));
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    /// `(1, 1, ..., 1) / sqrt(dim)`.
    pub fn equal_superposition(dim: usize) -> Result<Self> {
        let a = 1.0 / (dim as f64).sqrt();
        Self::new(DVector::from_element(dim, Complex64::new(a, 0.0)))
    }

    /// Normalized complex Gaussian vector, deterministic in `seed`.
    pub fn random(dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = DVector::from_fn(dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        Self::new(v)?.normalized()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(StateVector(self.0.unscale(n)))
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, factor: Complex64) -> StateVector {
        StateVector(self.0.map(|z| z * factor))
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// Distance between the normalized rays after removing the optimal
    /// global phase.
    pub fn ray_distance(&self, other: &StateVector) -> Result<f64> {
        let a = self.normalized()?;
        let b = other.normalized()?;
        let overlap = b.inner(&a);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok((&a.0 - b.0.map(|z| z * phase)).norm())
    }
}

/// Ascending eigenvalues with column-orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from caller-supplied parts, checking that
    /// the eigenvalues ascend and the columns are orthonormal.
    pub fn from_parts(eigenvalues: DVector<f64>, eigenvectors: DMatrix<Complex64>) -> Result<Self> {
        let n = eigenvalues.len();
        check_dims(n, eigenvectors.nrows())?;
        check_dims(n, eigenvectors.ncols())?;
        if eigenvalues.as_slice().windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("eigenvalues", "must be sorted ascending"));
        }
        let gram = eigenvectors.adjoint() * &eigenvectors;
        let err = (gram - DMatrix::<Complex64>::identity(n, n)).norm();
        if err > 1e-12 * (n as f64).max(1.0) {
            return Err(Error::param(
                "eigenvectors",
                format!("not orthonormal (error {err:e})"),
            ));
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let lam = self.eigenvalues.map(|l| Complex64::new(l, 0.0));
        &self.eigenvectors * DMatrix::from_diagonal(&lam) * self.eigenvectors.adjoint()
    }

    /// `V diag(f(lambda)) V^dagger psi`.
    pub fn apply_function<F>(&self, psi: &StateVector, f: F) -> Result<StateVector>
    where
        F: Fn(f64) -> Complex64,
    {
        check_dims(self.eigenvalues.len(), psi.dim())?;
        let mut coeffs = self.eigenvectors.adjoint() * &psi.0;
        for (c, &l) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= f(l);
        }
        Ok(StateVector(&self.eigenvectors * coeffs))
    }

    /// `e^{z A} psi`; reports overflow instead of saturating.
    pub fn exp_apply(&self, z: Complex64, psi: &StateVector) -> Result<StateVector> {
        let max_exponent = self
            .eigenvalues
            .iter()
            .map(|&l| z.re * l)
            .fold(f64::NEG_INFINITY, f64::max);
        if !max_exponent.is_finite() || max_exponent > MAX_EXPONENT {
            return Err(Error::Overflow { max_exponent });
        }
        self.apply_function(psi, |l| (z * l).exp())
    }
}

/// Eigen-decomposition with eigenvalues sorted ascending. Within a
/// degenerate cluster the basis is whatever the solver returns.
pub fn spectral_decompose(a: &HermitianOperator) -> SpectralDecomposition {
    let eig = SymmetricEigen::new(a.matrix.clone());
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Decomposes a raw matrix, rejecting non-Hermitian input.
pub fn spectral_decompose_matrix(m: &DMatrix<Complex64>) -> Result<SpectralDecomposition> {
    let op = HermitianOperator::new(m.clone(), Unit::Dimensionless)?;
    Ok(spectral_decompose(&op))
}

/// `e^{z A} psi`, exact through the spectral decomposition of `A`.
pub fn apply_exponential(
    a: &HermitianOperator,
    z: Complex64,
    psi: &StateVector,
) -> Result<StateVector> {
    check_dims(a.dim(), psi.dim())?;
    a.decompose().exp_apply(z, psi)
}

/// `psi^dagger A psi / psi^dagger psi`.
pub fn expectation(a: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_dims(a.dim(), psi.dim())?;
    let n2 = psi.0.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(psi.0.dotc(&(&a.matrix * &psi.0)).re / n2)
}

/// `sqrt(<A^2> - <A>^2)`, evaluated as `||(A - <A>) psi|| / ||psi||` so the
/// variance cannot go negative through cancellation.
pub fn uncertainty(a: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let mean = expectation(a, psi)?;
    let centered = &a.matrix * &psi.0 - psi.0.map(|z| z * mean);
    Ok(centered.norm() / psi.0.norm())
}

/// Hamiltonian presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum HamiltonianPreset {
    TwoLevel { e0: f64, e1: f64 },
    TruncatedOscillator { n: i64, omega: f64 },
    RandomHermitian { n: i64, seed: u64 },
}

/// Unknown keys are rejected by the config schema; serde cannot combine
/// `flatten` with `deny_unknown_fields`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    #[serde(flatten)]
    pub preset: HamiltonianPreset,
    /// Subtract the ground-state energy so that `H >= 0`.
    #[serde(default)]
    pub shift_nonnegative: bool,
}

impl HamiltonianSpec {
    pub fn new(preset: HamiltonianPreset, shift_nonnegative: bool) -> Self {
        HamiltonianSpec {
            preset,
            shift_nonnegative,
        }
    }
}

fn positive_dim(n: i64) -> Result<usize> {
    if n <= 0 {
        return Err(Error::param(
            "n",
            format!("dimension must be positive, got {n}"),
        ));
    }
    Ok(n as usize)
}

fn finite(name: &'static str, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::param(name, "must be finite"));
    }
    Ok(x)
}

pub fn build_hamiltonian(
    spec: &HamiltonianSpec,
    constants: &Constants,
) -> Result<HermitianOperator> {
    constants.validate()?;
    let h = match spec.preset {
        HamiltonianPreset::TwoLevel { e0, e1 } => HermitianOperator::from_real_diagonal(
            &[finite("e0", e0)?, finite("e1", e1)?],
            Unit::Energy,
        )?,
        HamiltonianPreset::TruncatedOscillator { n, omega } => {
            let n = positive_dim(n)?;
            let omega = finite("omega", omega)?;
            let levels: Vec<f64> = (0..n)
                .map(|k| constants.hbar * omega * (k as f64 + 0.5))
                .collect();
            HermitianOperator::from_real_diagonal(&levels, Unit::Energy)?
        }
        HamiltonianPreset::RandomHermitian { n, seed } => {
            HermitianOperator::random(positive_dim(n)?, seed, Unit::Energy)?
        }
    };
    if spec.shift_nonnegative {
        let ground = h.decompose().min_eigenvalue();
        Ok(h.shifted(-ground))
    } else {
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0], Unit::Dimensionless).unwrap()
    }

    #[test]
    fn two_level_preset_is_diagonal() {
        let h = build_hamiltonian(
            &HamiltonianSpec::new(HamiltonianPreset::TwoLevel { e0: 0.0, e1: 1.0 }, false),
            &Constants::natural(),
        )
        .unwrap();
        assert_eq!(h.unit(), Unit::Energy);
        assert_eq!(h.matrix()[(0, 0)], c(0.0, 0.0));
        assert_eq!(h.matrix()[(1, 1)], c(1.0, 0.0));
        assert_eq!(h.matrix()[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn oscillator_levels_are_half_integer() {
        let h = build_hamiltonian(
            &HamiltonianSpec::new(
                HamiltonianPreset::TruncatedOscillator { n: 3, omega: 1.0 },
                false,
            ),
            &Constants::natural(),
        )
        .unwrap();
        let ev = h.decompose();
        for (k, expected) in [0.5, 1.5, 2.5].iter().enumerate() {
            assert!((ev.eigenvalues()[k] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn random_preset_shift_puts_ground_state_at_zero() {
        let h = build_hamiltonian(
            &HamiltonianSpec::new(HamiltonianPreset::RandomHermitian { n: 8, seed: 42 }, true),
            &Constants::natural(),
        )
        .unwrap();
        assert!(h.decompose().min_eigenvalue().abs() < 1e-12);
    }

    #[test]
    fn builder_rejects_bad_parameters() {
        let k = Constants::natural();
        let bad = [
            HamiltonianPreset::TruncatedOscillator { n: 0, omega: 1.0 },
            HamiltonianPreset::RandomHermitian { n: -3, seed: 1 },
            HamiltonianPreset::TwoLevel {
                e0: f64::NAN,
                e1: 1.0,
            },
            HamiltonianPreset::TruncatedOscillator {
                n: 2,
                omega: f64::INFINITY,
            },
        ];
        for preset in bad {
            assert!(build_hamiltonian(&HamiltonianSpec::new(preset, false), &k).is_err());
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            HermitianOperator::new(m.clone(), Unit::Energy),
            Err(Error::NotHermitian { .. })
        ));
        assert!(spectral_decompose_matrix(&m).is_err());
    }

    #[test]
    fn diagonal_decomposition_sorts_ascending() {
        let a = HermitianOperator::from_real_diagonal(&[2.0, 1.0], Unit::Dimensionless).unwrap();
        let d = a.decompose();
        assert_eq!(d.eigenvalues().as_slice(), &[1.0, 2.0]);
        // eigenvectors are the swapped identity columns up to phase
        assert!((d.eigenvectors()[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((d.eigenvectors()[(0, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let d = pauli_x().decompose();
        assert!((d.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_is_fully_degenerate() {
        let d = HermitianOperator::identity(4, Unit::Dimensionless)
            .unwrap()
            .decompose();
        assert!(d.eigenvalues().iter().all(|&l| (l - 1.0).abs() < 1e-14));
        let gram = d.eigenvectors().adjoint() * d.eigenvectors();
        assert!((gram - DMatrix::<Complex64>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn decomposition_reconstructs() {
        for seed in 0..5 {
            let a = HermitianOperator::random(24, seed, Unit::Energy).unwrap();
            let d = a.decompose();
            assert!((d.reconstruct() - a.matrix()).norm() <= 1e-10 * a.norm());
            let gram = d.eigenvectors().adjoint() * d.eigenvectors();
            assert!((gram - DMatrix::<Complex64>::identity(24, 24)).norm() < 1e-12);
        }
    }

    #[test]
    fn exponential_examples() {
        let psi = StateVector::basis(2, 0).unwrap();
        let a = HermitianOperator::from_real_diagonal(&[1.0, -1.0], Unit::Dimensionless).unwrap();
        assert_eq!(apply_exponential(&a, c(0.0, 0.0), &psi).unwrap(), psi);

        let out = apply_exponential(&a, c(0.0, PI), &psi).unwrap();
        assert!(
            out.distance(&StateVector::from_slice(&[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap()) < 1e-14
        );

        let out = apply_exponential(&pauli_x(), c(0.0, PI / 2.0), &psi).unwrap();
        assert!(
            out.distance(&StateVector::from_slice(&[c(0.0, 0.0), c(0.0, 1.0)]).unwrap()) < 1e-14
        );
    }

    #[test]
    fn exponential_errors() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, 1000.0], Unit::Dimensionless).unwrap();
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            apply_exponential(&a, c(1.0, 0.0), &psi),
            Err(Error::Overflow { .. })
        ));
        let psi3 = StateVector::basis(3, 0).unwrap();
        assert!(matches!(
            apply_exponential(&a, c(0.0, 1.0), &psi3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_basis_does_not_matter() {
        // A = diag(1, 1, 3) and a rotated basis within the degenerate block.
        let a =
            HermitianOperator::from_real_diagonal(&[1.0, 1.0, 3.0], Unit::Dimensionless).unwrap();
        let (cth, sth) = (0.3f64.cos(), 0.3f64.sin());
        let phase = Complex64::from_polar(1.0, 0.7);
        let v = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(cth, 0.0),
                -phase.conj() * sth,
                c(0.0, 0.0),
                phase * sth,
                c(cth, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        let alt =
            SpectralDecomposition::from_parts(DVector::from_vec(vec![1.0, 1.0, 3.0]), v).unwrap();
        assert!((alt.reconstruct() - a.matrix()).norm() < 1e-14);
        let psi = StateVector::random(3, 9).unwrap();
        let z = c(-0.4, 2.1);
        let x = a.decompose().exp_apply(z, &psi).unwrap();
        let y = alt.exp_apply(z, &psi).unwrap();
        assert!(x.distance(&y) <= 1e-10);
    }

    #[test]
    fn expectation_examples() {
        let a = HermitianOperator::from_real_diagonal(&[0.0, 1.0], Unit::Dimensionless).unwrap();
        assert_eq!(
            expectation(&a, &StateVector::basis(2, 0).unwrap()).unwrap(),
            0.0
        );
        let plus = StateVector::equal_superposition(2).unwrap();
        assert!((expectation(&a, &plus).unwrap() - 0.5).abs() < 1e-15);
        let id = HermitianOperator::identity(2, Unit::Dimensionless).unwrap();
        let unnormalized = StateVector::from_slice(&[c(3.0, 1.0), c(-2.0, 0.5)]).unwrap();
        assert!((expectation(&id, &unnormalized).unwrap() - 1.0).abs() < 1e-15);
        let zero = StateVector::from_real(&[0.0, 0.0]).unwrap();
        assert!(matches!(expectation(&a, &zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn uncertainty_examples() {
        let a = HermitianOperator::from_real_diagonal(&[0.0, 2.0], Unit::Dimensionless).unwrap();
        assert_eq!(
            uncertainty(&a, &StateVector::basis(2, 1).unwrap()).unwrap(),
            0.0
        );
        let s = 1.0 / 2f64.sqrt();
        let plus = StateVector::from_slice(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        let plus_i = StateVector::from_slice(&[c(s, 0.0), c(0.0, s)]).unwrap();
        assert!((uncertainty(&a, &plus).unwrap() - 1.0).abs() < 1e-15);
        assert!((uncertainty(&a, &plus_i).unwrap() - 1.0).abs() < 1e-15);
        let zero = StateVector::from_real(&[0.0, 0.0]).unwrap();
        assert!(matches!(uncertainty(&a, &zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn ray_distance_ignores_global_phase() {
        let psi = StateVector::random(5, 3).unwrap();
        let rotated = psi.scale(Complex64::from_polar(2.0, 1.1));
        assert!(psi.ray_distance(&rotated).unwrap() < 1e-15);
    }

    #[test]
    fn spec_parses_with_flattened_preset() {
        let spec: HamiltonianSpec = serde_json::from_str(
            r#"{"preset": "two_level", "e0": -1, "e1": 1, "shift_nonnegative": true}"#,
        )
        .unwrap();
        assert!(spec.shift_nonnegative);
        let h = build_hamiltonian(&spec, &Constants::natural()).unwrap();
        assert_eq!(h.decompose().min_eigenvalue(), 0.0);
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(json["preset"], "two_level");
    }
}
