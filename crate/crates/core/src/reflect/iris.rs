use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

/// Bright ring inside an iris, at `position` (fraction of the radius) with
/// Gaussian `width` (same units).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ring {
    pub position: f64,
    pub width: f64,
    pub gain: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellShape {
    Disk,
    Square,
}

/// Matrix LED light: `rows × cols` identical cells separated by `cell_gap`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixLightSpec {
    pub rows: u32,
    pub cols: u32,
    /// Cell diameter or side, pixels.
    pub cell_size: f64,
    pub cell_gap: f64,
    pub cell_shape: CellShape,
}

impl MatrixLightSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows < 1 || self.cols < 1 {
            return Err(Error::invalid("lattice needs at least one row and column"));
        }
        if !(self.cell_size > 0.0) || !(self.cell_gap >= 0.0) {
            return Err(Error::invalid("lattice cell size must be > 0 and gap >= 0"));
        }
        Ok(())
    }
}

/// Procedural iris patch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum IrisShape {
    Disk {
        radius: f64,
        #[serde(default = "one")]
        softness: f64,
        #[serde(default = "one")]
        fill: f64,
        #[serde(default)]
        ring: Option<Ring>,
    },
    /// Regular polygon with circumradius `radius`.
    Polygon {
        sides: u32,
        radius: f64,
        #[serde(default)]
        rotation: f64,
        #[serde(default = "one")]
        softness: f64,
        #[serde(default = "one")]
        fill: f64,
        #[serde(default)]
        ring: Option<Ring>,
    },
    Lattice(MatrixLightSpec),
}

fn one() -> f64 {
    1.0
}

/// Distance from the centre to the polygon boundary in direction `phi`.
pub(crate) fn polygon_edge(sides: u32, radius: f64, rotation: f64, phi: f64) -> f64 {
    let n = sides as f64;
    let sector = TAU / n;
    let apothem = radius * (PI / n).cos();
    let a = (phi - rotation).rem_euclid(sector) - sector / 2.0;
    apothem / a.cos()
}

fn odd_side(half: f64) -> usize {
    2 * half.ceil().max(0.0) as usize + 1
}

impl IrisShape {
    pub fn validate(&self) -> Result<()> {
        let (radius, softness, fill, ring) = match *self {
            IrisShape::Lattice(m) => return m.validate(),
            IrisShape::Disk {
                radius,
                softness,
                fill,
                ring,
            } => (radius, softness, fill, ring),
            IrisShape::Polygon {
                sides,
                radius,
                softness,
                fill,
                ring,
                ..
            } => {
                if sides < 3 {
                    return Err(Error::invalid(format!("iris polygon needs >= 3 sides, got {sides}")));
                }
                (radius, softness, fill, ring)
            }
        };
        if !(radius > 0.0) || !(softness > 0.0) || !(fill >= 0.0) {
            return Err(Error::invalid("iris needs radius > 0, softness > 0, fill >= 0"));
        }
        if let Some(r) = ring {
            if !(r.width > 0.0) || !(r.gain >= 0.0) {
                return Err(Error::invalid("iris ring needs width > 0 and gain >= 0"));
            }
        }
        Ok(())
    }

    /// Square patch with odd side, centred, normalised to peak 1.
    pub fn render<T: Real>(&self) -> Result<Image<T>> {
        self.validate()?;
        if let IrisShape::Lattice(m) = self {
            return render_lattice_patch(m);
        }
        let (radius, softness, fill, ring) = match *self {
            IrisShape::Disk {
                radius,
                softness,
                fill,
                ring,
            } => (radius, softness, fill, ring),
            IrisShape::Polygon {
                radius,
                softness,
                fill,
                ring,
                ..
            } => (radius, softness, fill, ring),
            IrisShape::Lattice(_) => unreachable!(),
        };
        let side = odd_side(radius + softness + 1.0);
        let c = (side / 2) as f64;
        let img = Image::from_fn(side, side, 1, |x, y, _| {
            let (dx, dy) = (x as f64 - c, y as f64 - c);
            let rho = dx.hypot(dy);
            let edge = match *self {
                IrisShape::Polygon { sides, rotation, .. } => polygon_edge(sides, radius, rotation, dy.atan2(dx)),
                _ => radius,
            };
            // soft rim across `softness` pixels centred on the boundary
            let rim = ((edge - rho) / softness + 0.5).clamp(0.0, 1.0);
            let rim = rim * rim * (3.0 - 2.0 * rim);
            let u = rho / edge;
            let ring_v = ring.map_or(0.0, |r| {
                let z = (u - r.position) / r.width;
                r.gain * (-0.5 * z * z).exp()
            });
            T::lit(rim * (fill + ring_v))
        });
        normalise_peak(img)
    }
}

fn normalise_peak<T: Real>(img: Image<T>) -> Result<Image<T>> {
    let peak = img.max_value();
    if !(peak > T::zero()) {
        return Err(Error::invalid("iris patch is empty"));
    }
    Ok(img.map(|v| v / peak))
}

/// Lattice of cells with 1-pixel anti-aliased edges, normalised to peak 1.
pub fn render_lattice_patch<T: Real>(spec: &MatrixLightSpec) -> Result<Image<T>> {
    spec.validate()?;
    let pitch = spec.cell_size + spec.cell_gap;
    let half = spec.cell_size / 2.0;
    let span_x = (spec.cols - 1) as f64 * pitch / 2.0 + half;
    let span_y = (spec.rows - 1) as f64 * pitch / 2.0 + half;
    let side = odd_side(span_x.max(span_y) + 1.0);
    let c = (side / 2) as f64;
    let cols = spec.cols as f64;
    let rows = spec.rows as f64;
    let img = Image::from_fn(side, side, 1, |x, y, _| {
        let (dx, dy) = (x as f64 - c, y as f64 - c);
        // nearest cell centre
        let ix = ((dx / pitch) + (cols - 1.0) / 2.0).round().clamp(0.0, cols - 1.0);
        let iy = ((dy / pitch) + (rows - 1.0) / 2.0).round().clamp(0.0, rows - 1.0);
        let cx = (ix - (cols - 1.0) / 2.0) * pitch;
        let cy = (iy - (rows - 1.0) / 2.0) * pitch;
        let (ex, ey) = (dx - cx, dy - cy);
        let d = match spec.cell_shape {
            CellShape::Disk => ex.hypot(ey),
            CellShape::Square => ex.abs().max(ey.abs()),
        };
        T::lit((half + 0.5 - d).clamp(0.0, 1.0))
    });
    normalise_peak(img)
}

/// One ghost in a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Iris<T> {
    /// Single-channel intensity, centred, odd side.
    pub patch: Image<T>,
    /// Signed position along the line through the optical centre.
    pub t: f64,
    pub scale: f64,
    pub tint: [f64; 3],
}

impl<T: Real> Iris<T> {
    pub fn new(patch: Image<T>, t: f64, scale: f64, tint: [f64; 3]) -> Result<Self> {
        let iris = Iris { patch, t, scale, tint };
        iris.validate()?;
        Ok(iris)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.patch;
        if p.channels() != 1 || p.width() != p.height() || p.width() % 2 == 0 {
            return Err(Error::ShapeMismatch("iris patch must be square, odd-sided, 1 channel".into()));
        }
        if p.min_value() < T::zero() {
            return Err(Error::invalid("iris patch has negative samples"));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) || !self.t.is_finite() {
            return Err(Error::invalid("iris needs finite t and scale > 0"));
        }
        if self.tint.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::invalid("iris tint must be >= 0"));
        }
        Ok(())
    }

    /// Half side of the patch in patch pixels.
    pub fn half_extent(&self) -> f64 {
        (self.patch.width() / 2) as f64
    }
}

/// A lattice patch wrapped as an iris at the optical centre.
pub fn render_lattice_iris<T: Real>(spec: &MatrixLightSpec) -> Result<Iris<T>> {
    Iris::new(render_lattice_patch(spec)?, 0.0, 1.0, [1.0; 3])
}
