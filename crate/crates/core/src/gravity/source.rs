use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lattice of nonnegative trace values `T^a_a` in geometric units.
///
/// Cell `(i, j, k)` is centred at `origin + (i + 1/2, j + 1/2, k + 1/2) * spacing`;
/// storage is x-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceDistribution {
    dims: [usize; 3],
    spacing: f64,
    origin: [f64; 3],
    trace: Vec<f64>,
}

/// A nonzero cell reduced to its centre and integrated mass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MassCell {
    pub center: [f64; 3],
    pub mass: f64,
}

impl SourceDistribution {
    pub fn new(dims: [usize; 3], spacing: f64, origin: [f64; 3], trace: Vec<f64>) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::param(
                "spacing",
                format!("must be > 0, got {spacing}"),
            ));
        }
        if origin.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("origin", "must be finite"));
        }
        let n = dims.iter().product::<usize>();
        if n == 0 {
            return Err(Error::param("dims", "lattice must have at least one cell"));
        }
        if trace.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: trace.len(),
            });
        }
        if let Some(bad) = trace.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::param(
                "trace",
                format!("trace values must be finite and >= 0, got {bad}"),
            ));
        }
        Ok(SourceDistribution {
            dims,
            spacing,
            origin,
            trace,
        })
    }

    pub fn empty(dims: [usize; 3], spacing: f64, origin: [f64; 3]) -> Result<Self> {
        Self::new(dims, spacing, origin, vec![0.0; dims.iter().product()])
    }

    /// Single cell of integrated mass `mass` centred on `center`.
    pub fn point_mass(center: [f64; 3], mass: f64, spacing: f64) -> Result<Self> {
        let origin = center.map(|c| c - 0.5 * spacing);
        Self::new([1, 1, 1], spacing, origin, vec![mass / spacing.powi(3)])
    }

    /// Voxelized uniform ball on an `n^3` lattice spanning its bounding box.
    pub fn uniform_ball(center: [f64; 3], radius: f64, density: f64, n: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::param("radius", "must be > 0"));
        }
        let spacing = 2.0 * radius / n as f64;
        let origin = center.map(|c| c - radius);
        let mut src = Self::empty([n, n, n], spacing, origin)?;
        src.add_ball(center, radius, density)?;
        Ok(src)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(3)
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.spacing,
            self.origin[1] + (j as f64 + 0.5) * self.spacing,
            self.origin[2] + (k as f64 + 0.5) * self.spacing,
        ]
    }

    pub fn total_mass(&self) -> f64 {
        self.trace.iter().sum::<f64>() * self.cell_volume()
    }

    /// Half-width of the smallest cube around the mass centroid holding
    /// every nonzero cell (cell extent included).
    pub fn extent(&self) -> f64 {
        let cells = self.mass_cells();
        let m: f64 = cells.iter().map(|c| c.mass).sum();
        if m == 0.0 {
            return 0.0;
        }
        let mut centroid = [0.0; 3];
        for c in &cells {
            for (a, x) in centroid.iter_mut().zip(c.center) {
                *a += c.mass * x / m;
            }
        }
        cells
            .iter()
            .map(|c| {
                (0..3)
                    .map(|d| (c.center[d] - centroid[d]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
            + 0.5 * self.spacing
    }

    pub(crate) fn mass_cells(&self) -> Vec<MassCell> {
        let vol = self.cell_volume();
        let mut out = Vec::new();
        for k in 0..self.dims[2] {
            for j in 0..self.dims[1] {
                for i in 0..self.dims[0] {
                    let t = self.trace[self.index(i, j, k)];
                    if t > 0.0 {
                        out.push(MassCell {
                            center: self.cell_center(i, j, k),
                            mass: t * vol,
                        });
                    }
                }
            }
        }
        out
    }

    fn for_each_cell_mut(&mut self, mut f: impl FnMut([f64; 3], &mut f64)) {
        for k in 0..self.dims[2] {
            for j in 0..self.dims[1] {
                for i in 0..self.dims[0] {
                    let c = self.cell_center(i, j, k);
                    let idx = self.index(i, j, k);
                    f(c, &mut self.trace[idx]);
                }
            }
        }
    }

    pub fn add_ball(&mut self, center: [f64; 3], radius: f64, density: f64) -> Result<()> {
        check_density(density)?;
        let r2 = radius * radius;
        self.for_each_cell_mut(|c, t| {
            let d2: f64 = (0..3).map(|d| (c[d] - center[d]).powi(2)).sum();
            if d2 <= r2 {
                *t += density;
            }
        });
        Ok(())
    }

    pub fn add_box(&mut self, min: [f64; 3], max: [f64; 3], density: f64) -> Result<()> {
        check_density(density)?;
        self.for_each_cell_mut(|c, t| {
            if (0..3).all(|d| c[d] >= min[d] && c[d] <= max[d]) {
                *t += density;
            }
        });
        Ok(())
    }

    /// Deposits `mass` into the cell containing `position`.
    pub fn add_point(&mut self, position: [f64; 3], mass: f64) -> Result<()> {
        check_density(mass)?;
        let mut idx = [0usize; 3];
        for d in 0..3 {
            let f = (position[d] - self.origin[d]) / self.spacing;
            if !(f >= 0.0 && f < self.dims[d] as f64) {
                return Err(Error::param(
                    "position",
                    format!("{position:?} is outside the lattice"),
                ));
            }
            idx[d] = f as usize;
        }
        let vol = self.cell_volume();
        let i = self.index(idx[0], idx[1], idx[2]);
        self.trace[i] += mass / vol;
        Ok(())
    }

    pub fn from_descriptor(desc: &SourceDescriptor) -> Result<Self> {
        let g = &desc.grid;
        let mut src = Self::empty(g.dims, g.spacing, g.origin)?;
        for p in &desc.primitives {
            match *p {
                Primitive::Point { position, mass } => src.add_point(position, mass)?,
                Primitive::Ball {
                    center,
                    radius,
                    density,
                } => src.add_ball(center, radius, density)?,
                Primitive::Box { min, max, density } => src.add_box(min, max, density)?,
            }
        }
        Ok(src)
    }

    pub fn read_descriptor(path: impl AsRef<Path>) -> Result<Self> {
        let desc: SourceDescriptor = serde_json::from_str(&fs::read_to_string(path)?)?;
        Self::from_descriptor(&desc)
    }

    /// Reads a detached-header raw lattice (see [`RawHeader`]).
    pub fn read_raw(header_path: impl AsRef<Path>) -> Result<Self> {
        let header_path = header_path.as_ref();
        let header: RawHeader = serde_json::from_str(&fs::read_to_string(header_path)?)?;
        header.check()?;
        let data_path = resolve(header_path, &header.data);
        let bytes = fs::read(&data_path)?;
        let n: usize = header.dims.iter().product();
        if bytes.len() != 8 * n {
            return Err(Error::Config(format!(
                "{} holds {} bytes, expected {} for dims {:?}",
                data_path.display(),
                bytes.len(),
                8 * n,
                header.dims
            )));
        }
        let trace = bytes
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
            .collect();
        Self::new(header.dims, header.spacing, header.origin, trace)
    }

    /// Writes `header_path` and a sibling `.bin` data file.
    pub fn write_raw(&self, header_path: impl AsRef<Path>) -> Result<()> {
        let header_path = header_path.as_ref();
        let data_path = header_path.with_extension("bin");
        let header = RawHeader {
            dims: self.dims,
            spacing: self.spacing,
            origin: self.origin,
            data: data_path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            dtype: "f64".into(),
            byte_order: "little_endian".into(),
        };
        let bytes: Vec<u8> = self.trace.iter().flat_map(|t| t.to_le_bytes()).collect();
        fs::write(&data_path, bytes)?;
        fs::write(header_path, serde_json::to_string_pretty(&header)?)?;
        Ok(())
    }
}

fn check_density(x: f64) -> Result<()> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::param(
            "density",
            format!("trace density must be finite and >= 0, got {x}"),
        ));
    }
    Ok(())
}

fn resolve(header_path: &Path, data: &str) -> PathBuf {
    let p = Path::new(data);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        header_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dims: [usize; 3],
    pub spacing: f64,
    pub origin: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Primitive {
    Point {
        position: [f64; 3],
        mass: f64,
    },
    Ball {
        center: [f64; 3],
        radius: f64,
        density: f64,
    },
    Box {
        min: [f64; 3],
        max: [f64; 3],
        density: f64,
    },
}

/// JSON source descriptor: a lattice plus shape primitives rasterized on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDescriptor {
    pub grid: GridSpec,
    pub primitives: Vec<Primitive>,
}

/// Detached JSON header for a raw little-endian f64 lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHeader {
    pub dims: [usize; 3],
    pub spacing: f64,
    pub origin: [f64; 3],
    /// Data file, relative to the header's directory.
    pub data: String,
    #[serde(default = "default_dtype")]
    pub dtype: String,
    #[serde(default = "default_byte_order")]
    pub byte_order: String,
}

fn default_dtype() -> String {
    "f64".into()
}

fn default_byte_order() -> String {
    "little_endian".into()
}

impl RawHeader {
    fn check(&self) -> Result<()> {
        if self.dtype != "f64" {
            return Err(Error::Config(format!("unsupported dtype `{}`", self.dtype)));
        }
        if self.byte_order != "little_endian" {
            return Err(Error::Config(format!(
                "unsupported byte order `{}`",
                self.byte_order
            )));
        }
        Ok(())
    }
}
