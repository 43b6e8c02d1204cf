//! Static weak-field potential `h = 4 sum T V / d` of a lattice source, its
//! regional average `x = <h>`, and a vacuum Laplacian spot-check.
//!
//! Geometric units (`G = c = 1`) throughout; `x` is dimensionless.

mod source;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitBall, UnitSphere};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use source::{GridSpec, Primitive, RawHeader, SourceDescriptor, SourceDistribution};

/// Averaging region for [`mean_h`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RegionShape {
    Box {
        min: [f64; 3],
        max: [f64; 3],
    },
    Ball {
        center: [f64; 3],
        radius: f64,
    },
    /// Spherical surface: every sample sits at exactly `radius` from `center`.
    Shell {
        center: [f64; 3],
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    #[serde(flatten)]
    pub shape: RegionShape,
    pub samples: usize,
}

impl RegionSpec {
    pub fn new(shape: RegionShape, samples: usize) -> Self {
        RegionSpec { shape, samples }
    }

    fn validate_shape(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidRegion("sample count must be >= 1".into()));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match &self.shape {
            RegionShape::Box { min, max } => {
                if !finite(min) || !finite(max) || (0..3).any(|d| min[d] > max[d]) {
                    return Err(Error::InvalidRegion(format!(
                        "box bounds {min:?}..{max:?} are not ordered"
                    )));
                }
            }
            RegionShape::Ball { center, radius } | RegionShape::Shell { center, radius } => {
                if !finite(center) || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidRegion(format!(
                        "radius must be > 0, got {radius}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Euclidean distance from `p` to the closest point of the region.
    fn distance_to(&self, p: [f64; 3]) -> f64 {
        match &self.shape {
            RegionShape::Box { min, max } => (0..3)
                .map(|d| (min[d] - p[d]).max(p[d] - max[d]).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt(),
            RegionShape::Ball { center, radius } => (dist(p, *center) - radius).max(0.0),
            RegionShape::Shell { center, radius } => (dist(p, *center) - radius).abs(),
        }
    }

    /// Sample `i` of the stream; depends only on `(seed, i)`.
    fn sample(&self, seed: u64, i: u64) -> [f64; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        match &self.shape {
            RegionShape::Box { min, max } => {
                let mut p = [0.0; 3];
                for d in 0..3 {
                    p[d] = min[d] + (max[d] - min[d]) * rng.random::<f64>();
                }
                p
            }
            RegionShape::Ball { center, radius } => {
                let u: [f64; 3] = UnitBall.sample(&mut rng);
                [0, 1, 2].map(|d| center[d] + radius * u[d])
            }
            RegionShape::Shell { center, radius } => {
                let u: [f64; 3] = UnitSphere.sample(&mut rng);
                [0, 1, 2].map(|d| center[d] + radius * u[d])
            }
        }
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// `h(p) = 4 sum_cells T V / |p - c|`.
///
/// Points within half a cell (Chebyshev) of any nonzero cell centre count as
/// inside the support.
pub fn trace_potential(source: &SourceDistribution, point: [f64; 3]) -> Result<f64> {
    if point.iter().any(|x| !x.is_finite()) {
        return Err(Error::param("point", "coordinates must be finite"));
    }
    let half = 0.5 * source.spacing();
    let mut sum = 0.0;
    for cell in source.mass_cells() {
        let cheb = (0..3)
            .map(|d| (point[d] - cell.center[d]).abs())
            .fold(0.0, f64::max);
        if cheb <= half {
            return Err(Error::InsideSource { point });
        }
        sum += cell.mass / dist(point, cell.center);
    }
    Ok(4.0 * sum)
}

/// Monte Carlo average of [`trace_potential`] over `region`.
///
/// The region must stay at least one cell clear of every nonzero cell.
/// Samples are drawn in parallel but each depends only on `(seed, index)` and
/// the reduction runs in index order, so the result is bit-identical for any
/// thread count.
pub fn mean_h(source: &SourceDistribution, region: &RegionSpec, seed: u64) -> Result<f64> {
    region.validate_shape()?;
    let clearance = 1.5 * source.spacing();
    for cell in source.mass_cells() {
        let d = region.distance_to(cell.center);
        if d < clearance {
            return Err(Error::InvalidRegion(format!(
                "region comes within {d:.3e} of the source cell at {:?}; need {clearance:.3e}",
                cell.center
            )));
        }
    }
    let values: Vec<f64> = (0..region.samples as u64)
        .into_par_iter()
        .map(|i| trace_potential(source, region.sample(seed, i)))
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Seven-point Laplacian of `f` at `p` with stencil step `step`.
pub fn discrete_laplacian(
    f: impl Fn([f64; 3]) -> Result<f64>,
    p: [f64; 3],
    step: f64,
) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::param("step", format!("must be > 0, got {step}")));
    }
    let centre = f(p)?;
    let mut acc = 0.0;
    for d in 0..3 {
        for s in [-1.0, 1.0] {
            let mut q = p;
            q[d] += s * step;
            acc += f(q)? - centre;
        }
    }
    Ok(acc / (step * step))
}

/// Discrete Laplacian of `h` at a vacuum point, stencil step = lattice
/// spacing. Vanishes as `O(spacing^2)` under refinement.
///
/// Rejects points whose stencil would come within one cell of the support.
pub fn laplacian_spot_check(source: &SourceDistribution, point: [f64; 3]) -> Result<f64> {
    let step = source.spacing();
    for cell in source.mass_cells() {
        let cheb = (0..3)
            .map(|d| (point[d] - cell.center[d]).abs())
            .fold(0.0, f64::max);
        if cheb < 2.5 * step {
            return Err(Error::param(
                "point",
                format!("stencil at {point:?} is within one cell of the source support"),
            ));
        }
    }
    discrete_laplacian(|q| trace_potential(source, q), point, step)
}
