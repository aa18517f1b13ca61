use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::check_light;
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoreShape {
    Disk {
        radius: f64,
    },
    /// Regular polygon with circumradius `radius`.
    Polygon {
        sides: u32,
        radius: f64,
        #[serde(default)]
        rotation: f64,
    },
}

impl CoreShape {
    pub fn radius(&self) -> f64 {
        match *self {
            CoreShape::Disk { radius } | CoreShape::Polygon { radius, .. } => radius,
        }
    }

    pub fn with_radius(&self, r: f64) -> CoreShape {
        match *self {
            CoreShape::Disk { .. } => CoreShape::Disk { radius: r },
            CoreShape::Polygon { sides, rotation, .. } => CoreShape::Polygon { sides, radius: r, rotation },
        }
    }

    /// Distance outside the shape along the ray from the centre (0 inside).
    pub fn excess(&self, dx: f64, dy: f64) -> f64 {
        let rho = dx.hypot(dy);
        match *self {
            CoreShape::Disk { radius } => (rho - radius).max(0.0),
            CoreShape::Polygon { sides, radius, rotation } => {
                let n = sides as f64;
                let sector = TAU / n;
                let apothem = radius * (PI / n).cos();
                let phi = (dy.atan2(dx) - rotation).rem_euclid(sector) - sector / 2.0;
                // boundary radius in this direction
                let edge = apothem / phi.cos();
                (rho - edge).max(0.0)
            }
        }
    }

    pub fn contains(&self, dx: f64, dy: f64) -> bool {
        self.excess(dx, dy) == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub core: CoreShape,
    /// Pixels beyond the core over which the glow fades out; 0 = hard edge.
    #[serde(default)]
    pub glow_radius: f64,
    #[serde(default = "two")]
    pub glow_exponent: f64,
    /// Glow gain at the core boundary before clipping; at least 1.
    #[serde(default = "one")]
    pub peak: f64,
    #[serde(default = "white")]
    pub tint: [f64; 3],
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn white() -> [f64; 3] {
    [1.0; 3]
}

impl SourceSpec {
    pub fn validate(&self) -> Result<()> {
        let ok_core = match self.core {
            CoreShape::Disk { radius } => radius >= 0.0,
            CoreShape::Polygon { sides, radius, .. } => sides >= 3 && radius >= 0.0,
        };
        if !ok_core {
            return Err(Error::invalid(format!("degenerate light core {:?}", self.core)));
        }
        if !(self.glow_radius >= 0.0) || !(self.glow_exponent > 0.0) {
            return Err(Error::invalid("glow radius must be >= 0 and exponent > 0"));
        }
        if !(self.peak >= 1.0) {
            return Err(Error::invalid(format!("source peak must be >= 1, got {}", self.peak)));
        }
        if self.tint.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::invalid("source tint must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Overexposed core (exactly 1) with a clipped glow around it.
pub fn build_source<T: Real>(spec: &SourceSpec, width: usize, height: usize, light: [f64; 2]) -> Result<Image<T>> {
    spec.validate()?;
    check_light(width, height, light)?;
    let mut img = Image::zeros(width, height, 3);
    let reach = spec.core.radius() + spec.glow_radius + 1.0;
    let x0 = (light[0] - reach).floor().max(0.0) as usize;
    let x1 = ((light[0] + reach).ceil() as usize).min(width - 1);
    let y0 = (light[1] - reach).floor().max(0.0) as usize;
    let y1 = ((light[1] + reach).ceil() as usize).min(height - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let e = spec.core.excess(x as f64 - light[0], y as f64 - light[1]);
            let rgb = if e == 0.0 {
                [1.0; 3]
            } else if e < spec.glow_radius {
                let g = spec.peak * (1.0 - e / spec.glow_radius).powf(spec.glow_exponent);
                spec.tint.map(|t| (g * t).min(1.0))
            } else {
                continue;
            };
            for c in 0..3 {
                img.set(x, y, c, T::lit(rgb[c]));
            }
        }
    }
    Ok(img)
}
