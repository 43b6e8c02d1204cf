//! `Omega = dp1^dq1 + dp2^dq2` integrated over parametric surfaces, and
//! `theta = p1 dq1 + p2 dq2` integrated around their boundaries.
//!
//! A patch maps the unit square `(u, v)` into canonical space. The area
//! integrand is the pulled-back `(p_u q_v - p_v q_u)` summed over both
//! planes; the boundary is the image of the square's edges traversed
//! counterclockwise, which is the orientation Stokes' theorem pairs with it.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CanonicalDelta, CanonicalPoint};
use crate::error::{Error, Result};

/// Central-difference step for patches without analytic tangents.
const FD_STEP: f64 = 1e-5;
/// Endpoint mismatch above which a boundary path counts as open.
const CLOSURE_TOL: f64 = 1e-9;

pub trait SymplecticPatch: Sync {
    /// Image of `(u, v)`; must be smooth on a neighbourhood of the unit square.
    fn point(&self, u: f64, v: f64) -> CanonicalPoint;

    /// `(d/du, d/dv)` of [`point`](Self::point). Central differences by default.
    fn tangents(&self, u: f64, v: f64) -> (CanonicalDelta, CanonicalDelta) {
        let h = FD_STEP;
        let diff = |a: CanonicalPoint, b: CanonicalPoint| {
            let d = a.delta_to(&b);
            CanonicalDelta {
                dp1: d.dp1 / (2.0 * h),
                dq1: d.dq1 / (2.0 * h),
                dp2: d.dp2 / (2.0 * h),
                dq2: d.dq2 / (2.0 * h),
            }
        };
        (
            diff(self.point(u - h, v), self.point(u + h, v)),
            diff(self.point(u, v - h), self.point(u, v + h)),
        )
    }

    /// Image of the square's boundary, `resolution` segments per edge,
    /// counterclockwise from `(0, 0)`; the last point repeats the first.
    fn boundary_path(&self, resolution: usize) -> BoundaryPath {
        let n = resolution;
        let s = |k: usize| k as f64 / n as f64;
        let mut pts = Vec::with_capacity(4 * n + 1);
        pts.extend((0..n).map(|k| self.point(s(k), 0.0)));
        pts.extend((0..n).map(|k| self.point(1.0, s(k))));
        pts.extend((0..n).map(|k| self.point(1.0 - s(k), 1.0)));
        pts.extend((0..n).map(|k| self.point(0.0, 1.0 - s(k))));
        pts.push(self.point(0.0, 0.0));
        BoundaryPath { points: pts }
    }
}

/// Closed curve samples in canonical space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPath {
    pub points: Vec<CanonicalPoint>,
}

fn validate_resolution(resolution: usize) -> Result<()> {
    if resolution == 0 {
        return Err(Error::param("resolution", "must be >= 1"));
    }
    Ok(())
}

/// Midpoint quadrature of the pulled-back `Omega` on a
/// `resolution x resolution` grid.
pub fn symplectic_area<P: SymplecticPatch + ?Sized>(patch: &P, resolution: usize) -> Result<f64> {
    validate_resolution(resolution)?;
    let h = 1.0 / resolution as f64;
    // (sum of Omega, sum of |wedge terms|, sum of |t_u||t_v|) per row
    let rows: Vec<(f64, f64, f64)> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let v = (j as f64 + 0.5) * h;
            let mut acc = (0.0, 0.0, 0.0);
            for i in 0..resolution {
                let u = (i as f64 + 0.5) * h;
                let (a, b) = patch.tangents(u, v);
                let w1 = a.dp1 * b.dq1 - b.dp1 * a.dq1;
                let w2 = a.dp2 * b.dq2 - b.dp2 * a.dq2;
                let na = (a.dp1.powi(2) + a.dq1.powi(2) + a.dp2.powi(2) + a.dq2.powi(2)).sqrt();
                let nb = (b.dp1.powi(2) + b.dq1.powi(2) + b.dp2.powi(2) + b.dq2.powi(2)).sqrt();
                acc.0 += w1 + w2;
                acc.1 += w1.abs() + w2.abs();
                acc.2 += na * nb;
            }
            acc
        })
        .collect();
    let (mut total, mut wedge, mut scale) = (0.0, 0.0, 0.0);
    for r in rows {
        total += r.0;
        wedge += r.1;
        scale += r.2;
    }
    if wedge.is_nan() || wedge <= 1e-12 * scale {
        return Err(Error::DegeneratePatch);
    }
    Ok(total * h * h)
}

/// Trapezoid rule for `theta` along the polyline; exact on each straight
/// segment.
pub fn boundary_action_path(path: &BoundaryPath) -> Result<f64> {
    let pts = &path.points;
    if pts.len() < 2 {
        return Err(Error::param("boundary", "need at least two points"));
    }
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let d = first.delta_to(&last);
    let gap = (d.dp1.powi(2) + d.dq1.powi(2) + d.dp2.powi(2) + d.dq2.powi(2)).sqrt();
    if gap.is_nan() || gap > CLOSURE_TOL {
        return Err(Error::OpenBoundary(gap));
    }
    Ok(pts
        .windows(2)
        .map(|w| {
            0.5 * (w[0].p1 + w[1].p1) * (w[1].q1 - w[0].q1)
                + 0.5 * (w[0].p2 + w[1].p2) * (w[1].q2 - w[0].q2)
        })
        .sum())
}

/// `oint theta` around the image of the square's boundary.
pub fn boundary_action<P: SymplecticPatch + ?Sized>(patch: &P, resolution: usize) -> Result<f64> {
    validate_resolution(resolution)?;
    boundary_action_path(&patch.boundary_path(resolution))
}

/// Which canonical pair a planar patch lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// `(q1, p1)`
    #[default]
    First,
    /// `(q2, p2)`
    Second,
}

fn planar(plane: Plane, p: f64, q: f64, rest: (f64, f64)) -> CanonicalPoint {
    match plane {
        Plane::First => CanonicalPoint {
            p1: p,
            q1: q,
            p2: rest.1,
            q2: rest.0,
        },
        Plane::Second => CanonicalPoint {
            p1: rest.1,
            q1: rest.0,
            p2: p,
            q2: q,
        },
    }
}

fn planar_delta(plane: Plane, dp: f64, dq: f64) -> CanonicalDelta {
    let p = planar(plane, dp, dq, (0.0, 0.0));
    CanonicalDelta {
        dp1: p.p1,
        dq1: p.q1,
        dp2: p.p2,
        dq2: p.q2,
    }
}

/// Axis-aligned rectangle `q in [q.0, q.1]`, `p in [p.0, p.1]` in one
/// plane, the other pair held at `rest = (q, p)`. Area `|dq| |dp|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectanglePatch {
    pub plane: Plane,
    pub q: (f64, f64),
    pub p: (f64, f64),
    pub rest: (f64, f64),
}

impl SymplecticPatch for RectanglePatch {
    fn point(&self, u: f64, v: f64) -> CanonicalPoint {
        planar(
            self.plane,
            self.p.0 + u * (self.p.1 - self.p.0),
            self.q.0 + v * (self.q.1 - self.q.0),
            self.rest,
        )
    }

    fn tangents(&self, _u: f64, _v: f64) -> (CanonicalDelta, CanonicalDelta) {
        (
            planar_delta(self.plane, self.p.1 - self.p.0, 0.0),
            planar_delta(self.plane, 0.0, self.q.1 - self.q.0),
        )
    }
}

/// Disk of `radius` about `center = (q, p)`; `u` is radial, `v` angular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPatch {
    pub plane: Plane,
    pub center: (f64, f64),
    pub radius: f64,
    pub rest: (f64, f64),
}

impl SymplecticPatch for DiskPatch {
    fn point(&self, u: f64, v: f64) -> CanonicalPoint {
        let (s, c) = (2.0 * PI * v).sin_cos();
        let r = self.radius * u;
        planar(
            self.plane,
            self.center.1 + r * c,
            self.center.0 + r * s,
            self.rest,
        )
    }

    fn tangents(&self, u: f64, v: f64) -> (CanonicalDelta, CanonicalDelta) {
        let (s, c) = (2.0 * PI * v).sin_cos();
        let r = self.radius;
        let w = 2.0 * PI * r * u;
        (
            planar_delta(self.plane, r * c, r * s),
            planar_delta(self.plane, -w * s, w * c),
        )
    }
}

/// Unit-square images of signed areas `a` in the first plane and `b` in the
/// second, sharing one parametrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPlanePatch {
    pub a: f64,
    pub b: f64,
}

impl SymplecticPatch for TwoPlanePatch {
    fn point(&self, u: f64, v: f64) -> CanonicalPoint {
        CanonicalPoint {
            p1: self.a * u,
            q1: v,
            p2: self.b * u,
            q2: v,
        }
    }
}

/// Patch from an arbitrary smooth map; tangents by central differences.
pub struct FnPatch<F>(pub F);

impl<F> SymplecticPatch for FnPatch<F>
where
    F: Fn(f64, f64) -> CanonicalPoint + Sync,
{
    fn point(&self, u: f64, v: f64) -> CanonicalPoint {
        (self.0)(u, v)
    }
}

pub type BoxedMap = Box<dyn Fn(f64, f64) -> CanonicalPoint + Send + Sync>;

/// A bilinear map plus two low-frequency sinusoids per coordinate, all
/// coefficients drawn from `seed`.
pub fn random_smooth_patch(seed: u64) -> FnPatch<BoxedMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coord = || {
        let lin: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let waves: [[f64; 4]; 2] = std::array::from_fn(|_| {
            [
                rng.random_range(-0.3..0.3),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.0..2.0 * PI),
            ]
        });
        move |u: f64, v: f64| {
            lin[0]
                + lin[1] * u
                + lin[2] * v
                + lin[3] * u * v
                + waves
                    .iter()
                    .map(|w| w[0] * (w[1] * u + w[2] * v + w[3]).sin())
                    .sum::<f64>()
        }
    };
    let (p1, q1, p2, q2) = (coord(), coord(), coord(), coord());
    FnPatch(Box::new(move |u, v| CanonicalPoint {
        p1: p1(u, v),
        q1: q1(u, v),
        p2: p2(u, v),
        q2: q2(u, v),
    }))
}
