use nalgebra::DMatrix;
use num_complex::Complex64;

use super::wick::WickFactor;
use crate::error::Result;
use crate::opcore::HermitianOperator;
use crate::units::Constants;

/// Complex entropy production `dS/dt = (kB/hbar)(1 - i epsilon) H`.
#[derive(Debug, Clone)]
pub struct EntropyProduction {
    /// Eigenvalues of `H`, ascending.
    pub energies: Vec<f64>,
    /// Rate per energy eigenmode.
    pub rates: Vec<Complex64>,
    /// Operator statement `(kB/hbar)(1 - i epsilon) H`.
    pub operator: DMatrix<Complex64>,
}

impl EntropyProduction {
    /// Dissipative part `Im(dS/dt) = -epsilon kB H / hbar`, in the sense of
    /// [`hermitian_imaginary_part`].
    pub fn dissipation(&self) -> DMatrix<Complex64> {
        hermitian_imaginary_part(&self.operator)
    }
}

/// `B` in the unique split `X = A + iB` with `A`, `B` Hermitian:
/// `B = (X - X^dagger) / 2i`. Differs from the entrywise imaginary part
/// whenever `X` has complex off-diagonal entries.
pub fn hermitian_imaginary_part(x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (x - x.adjoint()) * Complex64::new(0.0, -0.5)
}

pub fn entropy_production(
    h: &HermitianOperator,
    wick: &WickFactor,
    constants: &Constants,
) -> Result<EntropyProduction> {
    constants.validate()?;
    let factor = Complex64::new(1.0, -wick.epsilon) * (constants.k_b / constants.hbar);
    let energies: Vec<f64> = h.decompose().eigenvalues().iter().copied().collect();
    Ok(EntropyProduction {
        rates: energies.iter().map(|&e| factor * e).collect(),
        operator: h.matrix().map(|z| z * factor),
        energies,
    })
}
