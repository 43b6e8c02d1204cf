//! Run configuration: JSON validated against the shipped schema, then
//! deserialized with unknown keys rejected.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fluctuations::ThermoReference;
use crate::gravity::{RegionShape, RegionSpec, SourceDescriptor};
use crate::onsager::OnsagerDescriptor;
use crate::opcore::{HamiltonianPreset, HamiltonianSpec, StateVector};
use crate::spicture::PictureMode;
use crate::units::Constants;

/// JSON schema every config is checked against before execution.
pub const SCHEMA: &str = include_str!("../../schema/run_config.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subcommand {
    #[serde(rename = "evolve-h")]
    EvolveH,
    #[serde(rename = "evolve-s")]
    EvolveS,
    #[serde(rename = "compare-pictures")]
    ComparePictures,
    #[serde(rename = "gravity")]
    Gravity,
    #[serde(rename = "onsager")]
    Onsager,
    #[serde(rename = "fluct")]
    Fluct,
    #[serde(rename = "stokes")]
    Stokes,
    #[serde(rename = "check-all")]
    CheckAll,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::EvolveH,
        Subcommand::EvolveS,
        Subcommand::ComparePictures,
        Subcommand::Gravity,
        Subcommand::Onsager,
        Subcommand::Fluct,
        Subcommand::Stokes,
        Subcommand::CheckAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::EvolveH => "evolve-h",
            Subcommand::EvolveS => "evolve-s",
            Subcommand::ComparePictures => "compare-pictures",
            Subcommand::Gravity => "gravity",
            Subcommand::Onsager => "onsager",
            Subcommand::Fluct => "fluct",
            Subcommand::Stokes => "stokes",
            Subcommand::CheckAll => "check-all",
        }
    }

    /// Stem used for default artifact names.
    pub fn file_stem(self) -> String {
        self.name().replace('-', "_")
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand this config is meant for; checked when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Subcommand>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub constants: Constants,
    /// First-order conventions: weak-field `kappa = i - epsilon` for gravity
    /// couplings and the truncated perturbed H-picture rate.
    #[serde(default)]
    pub paper_mode: bool,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub evolve_h: EvolveHConfig,
    #[serde(default)]
    pub evolve_s: EvolveSConfig,
    #[serde(default)]
    pub compare_pictures: CompareConfig,
    #[serde(default)]
    pub gravity: GravityConfig,
    #[serde(default)]
    pub onsager: OnsagerConfig,
    #[serde(default)]
    pub fluct: FluctConfig,
    #[serde(default)]
    pub stokes: StokesConfig,
    #[serde(default)]
    pub check_all: CheckAllConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all sections have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for artifacts; `--out-dir` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Initial state.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Basis {
        index: usize,
    },
    #[default]
    EqualSuperposition,
    Random {
        seed: u64,
    },
    /// Normalized on load.
    Amplitudes {
        re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        im: Vec<f64>,
    },
}

impl StateSpec {
    pub fn build(&self, dim: usize) -> Result<StateVector> {
        match self {
            StateSpec::Basis { index } => StateVector::basis(dim, *index),
            StateSpec::EqualSuperposition => StateVector::equal_superposition(dim),
            StateSpec::Random { seed } => StateVector::random(dim, *seed),
            StateSpec::Amplitudes { re, im } => {
                if re.len() != dim || !(im.is_empty() || im.len() == dim) {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: re.len(),
                    });
                }
                let amps: Vec<Complex64> = re
                    .iter()
                    .enumerate()
                    .map(|(k, &r)| Complex64::new(r, im.get(k).copied().unwrap_or(0.0)))
                    .collect();
                StateVector::from_slice(&amps)?.normalized()
            }
        }
    }
}

fn default_hamiltonian() -> HamiltonianSpec {
    HamiltonianSpec::new(HamiltonianPreset::TwoLevel { e0: 0.0, e1: 1.0 }, false)
}

fn one() -> f64 {
    1.0
}

fn default_steps() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveHConfig {
    #[serde(default = "default_hamiltonian")]
    pub hamiltonian: HamiltonianSpec,
    #[serde(default)]
    pub state: StateSpec,
    #[serde(default = "ten")]
    pub t_max: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Phenomenological `eps'` with `|eps'| < 1`; zero is unitary.
    #[serde(default)]
    pub eps_prime: f64,
}

fn ten() -> f64 {
    10.0
}

impl Default for EvolveHConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

/// Shape of the entropy generator along `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `S = H / T`.
    #[default]
    Constant,
    /// `S(tau) = H e^{-tau} / T`.
    Chart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSConfig {
    #[serde(default = "default_hamiltonian")]
    pub hamiltonian: HamiltonianSpec,
    #[serde(default)]
    pub state: StateSpec,
    #[serde(default = "one")]
    pub temperature: f64,
    #[serde(default = "five")]
    pub tau_max: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Dissipation parameter; mutually exclusive with `gravity_x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Gravity strength `x`, converted through the Wick factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gravity_x: Option<f64>,
    #[serde(default)]
    pub generator: GeneratorKind,
    #[serde(default)]
    pub allow_antidissipative: bool,
}

fn five() -> f64 {
    5.0
}

impl Default for EvolveSConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    #[serde(default = "default_hamiltonian")]
    pub hamiltonian: HamiltonianSpec,
    #[serde(default)]
    pub state: StateSpec,
    #[serde(rename = "T0", default = "one")]
    pub t0: f64,
    #[serde(default = "default_mode")]
    pub mode: PictureMode,
    #[serde(default = "one")]
    pub tau_max: f64,
    #[serde(default = "twenty")]
    pub steps: usize,
    #[serde(default)]
    pub epsilon: f64,
}

fn default_mode() -> PictureMode {
    PictureMode::RealC
}

fn twenty() -> usize {
    20
}

impl Default for CompareConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

/// Where a lattice source comes from. Paths are relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceInput {
    /// JSON descriptor file.
    Descriptor { path: PathBuf },
    /// Raw lattice header file.
    Raw { header: PathBuf },
    /// Descriptor embedded in the config.
    Inline { descriptor: SourceDescriptor },
}

impl Default for SourceInput {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({
            "kind": "inline",
            "descriptor": {
                "grid": {"dims": [1, 1, 1], "spacing": 0.1, "origin": [-0.05, -0.05, -0.05]},
                "primitives": [{"kind": "point", "position": [0.0, 0.0, 0.0], "mass": 1.0}]
            }
        }))
        .expect("valid default source")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GravityConfig {
    #[serde(default)]
    pub source: SourceInput,
    #[serde(default = "default_region")]
    pub region: RegionSpec,
    /// Points where `h` is tabulated.
    #[serde(default = "default_probes")]
    pub probes: Vec<[f64; 3]>,
    /// Vacuum points for the Laplacian spot-check.
    #[serde(default)]
    pub laplacian_points: Vec<[f64; 3]>,
}

fn default_region() -> RegionSpec {
    RegionSpec::new(
        RegionShape::Shell {
            center: [0.0; 3],
            radius: 4.0,
        },
        1000,
    )
}

fn default_probes() -> Vec<[f64; 3]> {
    (1..=8).map(|k| [k as f64, 0.0, 0.0]).collect()
}

impl Default for GravityConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemInput {
    Descriptor {
        path: PathBuf,
    },
    Inline {
        descriptor: OnsagerDescriptor,
    },
    /// Random SPD system; seed defaults to the run seed.
    Random {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl Default for SystemInput {
    fn default() -> Self {
        SystemInput::Random { n: 4, seed: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnsagerConfig {
    #[serde(default)]
    pub system: SystemInput,
    #[serde(default = "five")]
    pub t_max: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

impl Default for OnsagerConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceInput {
    /// Monatomic ideal gas built from `(p0, V0, T0)`.
    IdealGas {
        p0: f64,
        #[serde(rename = "V0")]
        v0: f64,
        #[serde(rename = "T0")]
        t0: f64,
    },
    Custom {
        reference: ThermoReference,
    },
}

impl Default for ReferenceInput {
    fn default() -> Self {
        ReferenceInput::IdealGas {
            p0: 1.0,
            v0: 1.0,
            t0: 1.0,
        }
    }
}

impl ReferenceInput {
    pub fn build(&self) -> Result<ThermoReference> {
        match *self {
            ReferenceInput::IdealGas { p0, v0, t0 } => ThermoReference::ideal_gas(p0, v0, t0),
            ReferenceInput::Custom { reference } => {
                reference.validate()?;
                Ok(reference)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluctConfig {
    #[serde(default)]
    pub reference: ReferenceInput,
    #[serde(default = "default_fluct_n")]
    pub n: usize,
}

fn default_fluct_n() -> usize {
    100_000
}

impl Default for FluctConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PatchSpec {
    Rectangle {
        q: (f64, f64),
        p: (f64, f64),
    },
    Disk {
        center: (f64, f64),
        radius: f64,
    },
    TwoPlane {
        a: f64,
        b: f64,
    },
    /// Random smooth patch; seed defaults to the run seed.
    Random {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl Default for PatchSpec {
    fn default() -> Self {
        PatchSpec::Disk {
            center: (0.0, 0.0),
            radius: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StokesConfig {
    #[serde(default)]
    pub patch: PatchSpec,
    /// Increasing resolutions; dyadic steps give the cleanest order estimate.
    #[serde(default = "default_resolutions")]
    pub resolutions: Vec<usize>,
}

fn default_resolutions() -> Vec<usize> {
    vec![32, 64, 128, 256]
}

impl Default for StokesConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

/// Sizes of the invariant suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckAllConfig {
    /// Randomized repetitions per property.
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Hilbert-space dimension of the randomized operator checks.
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_fluct_n")]
    pub fluct_samples: usize,
}

fn default_trials() -> usize {
    20
}

fn default_dim() -> usize {
    16
}

impl Default for CheckAllConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

fn schema_validator() -> &'static jsonschema::Validator {
    static VALIDATOR: OnceLock<jsonschema::Validator> = OnceLock::new();
    VALIDATOR.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is valid JSON");
        jsonschema::validator_for(&schema).expect("shipped schema compiles")
    })
}

/// Schema diagnostics for `value`, one line per violation.
pub fn schema_errors(value: &Value) -> Vec<String> {
    schema_validator()
        .iter_errors(value)
        .map(|e| {
            let at = e.instance_path().to_string();
            format!("{}: {e}", if at.is_empty() { "/" } else { &at })
        })
        .collect()
}

impl RunConfig {
    /// Validates against the schema, then deserializes.
    pub fn from_value(value: Value) -> Result<Self> {
        let errors = schema_errors(&value);
        if !errors.is_empty() {
            return Err(Error::Config(format!(
                "schema validation failed:\n  {}",
                errors.join("\n  ")
            )));
        }
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;
        Self::from_value(value)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
