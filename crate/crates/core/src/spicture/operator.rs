use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opcore::{HermitianOperator, StateVector};
use crate::units::{Constants, Unit};

/// `S = H / T`.
#[derive(Debug, Clone)]
pub struct EntropyOperator {
    s: HermitianOperator,
    temperature: f64,
    source_h: HermitianOperator,
}

impl EntropyOperator {
    pub fn operator(&self) -> &HermitianOperator {
        &self.s
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn source_hamiltonian(&self) -> &HermitianOperator {
        &self.source_h
    }
}

pub fn entropy_operator(h: &HermitianOperator, temperature: f64) -> Result<EntropyOperator> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::param(
            "T",
            format!("temperature must be > 0, got {temperature}"),
        ));
    }
    if h.unit() != Unit::Energy {
        return Err(Error::param(
            "H",
            format!("expected energy units, got {:?}", h.unit()),
        ));
    }
    Ok(EntropyOperator {
        s: h.scaled(1.0 / temperature, Unit::Entropy),
        temperature,
        source_h: h.clone(),
    })
}

/// A `tau`-independent factor `chi` with `S chi = s kB chi`.
#[derive(Debug, Clone)]
pub struct EigenSolutionSpec {
    chi: StateVector,
    s: f64,
}

impl EigenSolutionSpec {
    /// Validates the eigenvalue equation within `1e-10 ||S|| ||chi||`.
    pub fn new(
        chi: StateVector,
        s: f64,
        entropy: &HermitianOperator,
        constants: &Constants,
    ) -> Result<Self> {
        let s_chi = entropy.apply(&chi)?;
        let residual = s_chi.distance(&chi.scale(Complex64::new(s * constants.k_b, 0.0)));
        let scale = entropy.norm().max(constants.k_b * s.abs()) * chi.norm();
        if !s.is_finite() || residual > 1e-10 * scale {
            return Err(Error::NotEigenvector { residual });
        }
        Ok(EigenSolutionSpec { chi, s })
    }

    /// Every eigenpair of `entropy`, in ascending order.
    pub fn all(entropy: &HermitianOperator, constants: &Constants) -> Result<Vec<Self>> {
        let d = entropy.decompose();
        (0..entropy.dim())
            .map(|k| {
                let chi = StateVector::new(d.eigenvectors().column(k).into_owned())?;
                Self::new(chi, d.eigenvalues()[k] / constants.k_b, entropy, constants)
            })
            .collect()
    }

    pub fn chi(&self) -> &StateVector {
        &self.chi
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Factorized solution `chi exp((i - epsilon) tau s)`.
pub fn eigen_solution(spec: &EigenSolutionSpec, tau: f64, epsilon: f64) -> StateVector {
    spec.chi
        .scale((Complex64::new(-epsilon, 1.0) * tau * spec.s).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diag(d: &[f64], unit: Unit) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(d, unit).unwrap()
    }

    #[test]
    fn entropy_is_h_over_t() {
        let s = entropy_operator(&diag(&[0.0, 1.0], Unit::Energy), 1.0).unwrap();
        assert_eq!(
            s.operator().matrix(),
            diag(&[0.0, 1.0], Unit::Entropy).matrix()
        );
        assert_eq!(s.operator().unit(), Unit::Entropy);
        let s = entropy_operator(&diag(&[2.0, 4.0], Unit::Energy), 2.0).unwrap();
        assert_eq!(
            s.operator().matrix(),
            diag(&[1.0, 2.0], Unit::Entropy).matrix()
        );
        assert_eq!(s.temperature(), 2.0);
    }

    #[test]
    fn entropy_rejects_bad_input() {
        let h = diag(&[0.0, 1.0], Unit::Energy);
        assert!(entropy_operator(&h, 0.0).is_err());
        assert!(entropy_operator(&h, -3.0).is_err());
        assert!(entropy_operator(&diag(&[0.0, 1.0], Unit::Entropy), 1.0).is_err());
    }

    #[test]
    fn eigen_solution_examples() {
        let k = Constants::natural();
        let s_op = diag(&[0.0, 1.0], Unit::Entropy);
        let zero =
            EigenSolutionSpec::new(StateVector::basis(2, 0).unwrap(), 0.0, &s_op, &k).unwrap();
        for tau in [0.0, 1.0, 10.0] {
            assert_eq!(&eigen_solution(&zero, tau, -0.3), zero.chi());
        }
        let one =
            EigenSolutionSpec::new(StateVector::basis(2, 1).unwrap(), 1.0, &s_op, &k).unwrap();
        assert!(eigen_solution(&one, 2.0 * PI, 0.0).distance(one.chi()) < 1e-14);
        let grown = eigen_solution(&one, 1.0, -0.5);
        assert!((grown.norm() - 0.5f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_eigenvector() {
        let k = Constants::natural();
        let s_op = diag(&[0.0, 1.0], Unit::Entropy);
        assert!(matches!(
            EigenSolutionSpec::new(StateVector::equal_superposition(2).unwrap(), 1.0, &s_op, &k),
            Err(Error::NotEigenvector { .. })
        ));
        assert!(EigenSolutionSpec::new(StateVector::basis(2, 1).unwrap(), 0.9, &s_op, &k).is_err());
    }

    #[test]
    fn all_eigenpairs_validate() {
        let k = Constants::new(1.0, 2.5).unwrap();
        let h = HermitianOperator::random(7, 5, Unit::Energy).unwrap();
        let s = entropy_operator(&h, 1.7).unwrap();
        let specs = EigenSolutionSpec::all(s.operator(), &k).unwrap();
        assert_eq!(specs.len(), 7);
    }
}
