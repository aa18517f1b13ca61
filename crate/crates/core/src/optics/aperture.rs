use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

/// Square sampling grid on the aperture plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Samples per side; must be a power of two.
    pub size: usize,
    /// Metres per sample.
    pub pitch: f64,
}

impl GridSpec {
    pub fn new(size: usize, pitch: f64) -> Result<Self> {
        let g = GridSpec { size, pitch };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 2 || !self.size.is_power_of_two() {
            return Err(Error::invalid(format!("grid size must be a power of two, got {}", self.size)));
        }
        if !(self.pitch > 0.0 && self.pitch.is_finite()) {
            return Err(Error::invalid(format!("grid pitch must be positive, got {}", self.pitch)));
        }
        Ok(())
    }

    /// Physical coordinate of sample index `i`; index `size/2` is the origin.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.size / 2) as f64) * self.pitch
    }

    /// Largest radius that still leaves a 10 % margin to the grid edge.
    pub fn max_radius(&self) -> f64 {
        (self.size / 2) as f64 * self.pitch / 1.1
    }
}

/// Regular polygonal stop intersected with the circular pupil.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonStop {
    pub sides: u32,
    #[serde(default)]
    pub rotation: f64,
}

/// Opaque dirt on the aperture. All lengths in metres, positions relative to
/// the optical axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DirtPrimitive {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Capsule of total `width` around the segment `p0`-`p1`.
    Segment {
        p0: [f64; 2],
        p1: [f64; 2],
        width: f64,
    },
    /// Parallel opaque bars running along `orientation`, filling the fraction
    /// `duty` of every `period`, confined to a disk of radius `extent`.
    Grating {
        orientation: f64,
        period: f64,
        duty: f64,
        extent: f64,
        #[serde(default)]
        center: [f64; 2],
    },
}

impl DirtPrimitive {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            DirtPrimitive::Disk { radius, .. } => *radius > 0.0,
            DirtPrimitive::Segment { width, .. } => *width > 0.0,
            DirtPrimitive::Grating {
                period, duty, extent, ..
            } => *period > 0.0 && *extent > 0.0 && *duty > 0.0 && *duty < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("degenerate dirt primitive {self:?}")))
        }
    }

    /// True where the primitive blocks light.
    pub fn covers(&self, x: f64, y: f64) -> bool {
        match *self {
            DirtPrimitive::Disk { center, radius } => {
                let (dx, dy) = (x - center[0], y - center[1]);
                dx * dx + dy * dy <= radius * radius
            }
            DirtPrimitive::Segment { p0, p1, width } => {
                let (vx, vy) = (p1[0] - p0[0], p1[1] - p0[1]);
                let (wx, wy) = (x - p0[0], y - p0[1]);
                let len2 = vx * vx + vy * vy;
                let t = if len2 > 0.0 { ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0) } else { 0.0 };
                let (dx, dy) = (wx - t * vx, wy - t * vy);
                let half = width / 2.0;
                dx * dx + dy * dy <= half * half
            }
            DirtPrimitive::Grating {
                orientation,
                period,
                duty,
                extent,
                center,
            } => {
                let (dx, dy) = (x - center[0], y - center[1]);
                if dx * dx + dy * dy > extent * extent {
                    return false;
                }
                // coordinate across the bars
                let u = -dx * orientation.sin() + dy * orientation.cos();
                (u / period).rem_euclid(1.0) < duty
            }
        }
    }
}

/// Clear circular pupil, optional polygon stop and opaque dirt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApertureSpec {
    pub clear_radius: f64,
    #[serde(default)]
    pub polygon: Option<PolygonStop>,
    #[serde(default)]
    pub dirt: Vec<DirtPrimitive>,
}

impl ApertureSpec {
    pub fn clear(radius: f64) -> Self {
        ApertureSpec {
            clear_radius: radius,
            polygon: None,
            dirt: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.clear_radius > 0.0 && self.clear_radius.is_finite()) {
            return Err(Error::invalid(format!("clear radius must be positive, got {}", self.clear_radius)));
        }
        if let Some(p) = self.polygon {
            if p.sides < 3 {
                return Err(Error::invalid(format!("polygon stop needs >= 3 sides, got {}", p.sides)));
            }
        }
        self.dirt.iter().try_for_each(DirtPrimitive::validate)
    }

    /// Clear-pupil membership (circle, intersected with the polygon if any).
    pub fn in_pupil(&self, x: f64, y: f64) -> bool {
        let r2 = x * x + y * y;
        if r2 >= self.clear_radius * self.clear_radius {
            return false;
        }
        match self.polygon {
            None => true,
            Some(p) => {
                let n = p.sides as f64;
                let sector = std::f64::consts::TAU / n;
                let apothem = self.clear_radius * (std::f64::consts::PI / n).cos();
                let phi = (y.atan2(x) - p.rotation).rem_euclid(sector) - sector / 2.0;
                r2.sqrt() * phi.cos() <= apothem
            }
        }
    }

    pub fn transmits(&self, x: f64, y: f64) -> bool {
        self.in_pupil(x, y) && !self.dirt.iter().any(|d| d.covers(x, y))
    }
}

fn rasterize_with<T: Real>(grid: &GridSpec, f: impl Fn(f64, f64) -> bool) -> Image<T> {
    let n = grid.size;
    Image::from_fn(n, n, 1, |i, j, _| {
        if f(grid.coord(i), grid.coord(j)) {
            T::one()
        } else {
            T::zero()
        }
    })
}

fn check_fits(spec: &ApertureSpec, grid: &GridSpec) -> Result<()> {
    grid.validate()?;
    spec.validate()?;
    if spec.clear_radius > grid.max_radius() {
        return Err(Error::invalid(format!(
            "clear radius {} m exceeds grid half-extent {} m less 10% margin",
            spec.clear_radius,
            (grid.size / 2) as f64 * grid.pitch
        )));
    }
    Ok(())
}

/// Binary transmission mask `A_a · Π Ã_d`, sampled at grid points.
pub fn rasterize_aperture<T: Real>(spec: &ApertureSpec, grid: &GridSpec) -> Result<Image<T>> {
    check_fits(spec, grid)?;
    Ok(rasterize_with(grid, |x, y| spec.transmits(x, y)))
}

/// The clear pupil alone (`A_a`, with the polygon stop).
pub fn rasterize_pupil<T: Real>(spec: &ApertureSpec, grid: &GridSpec) -> Result<Image<T>> {
    check_fits(spec, grid)?;
    Ok(rasterize_with(grid, |x, y| spec.in_pupil(x, y)))
}

/// Transmission of a group of dirt primitives, ignoring the pupil (`Π Ã_d`).
pub fn rasterize_dirt<T: Real>(dirt: &[DirtPrimitive], grid: &GridSpec) -> Result<Image<T>> {
    grid.validate()?;
    dirt.iter().try_for_each(DirtPrimitive::validate)?;
    Ok(rasterize_with(grid, |x, y| !dirt.iter().any(|d| d.covers(x, y))))
}
