use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants carried explicitly through every formula.
///
/// Defaults to natural units; SI values can be injected through
/// [`Constants::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub hbar: f64,
    #[serde(rename = "kB")]
    pub k_b: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            hbar: 1.0,
            k_b: 1.0,
        }
    }
}

impl Constants {
    pub fn new(hbar: f64, k_b: f64) -> Result<Self> {
        let c = Constants { hbar, k_b };
        c.validate()?;
        Ok(c)
    }

    pub fn natural() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::param(
                "hbar",
                format!("must be finite and > 0, got {}", self.hbar),
            ));
        }
        if !(self.k_b.is_finite() && self.k_b > 0.0) {
            return Err(Error::param(
                "kB",
                format!("must be finite and > 0, got {}", self.k_b),
            ));
        }
        Ok(())
    }
}

/// Physical dimension attached to an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Energy,
    Entropy,
    Dimensionless,
}
