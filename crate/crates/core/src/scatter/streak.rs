use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::check_light;
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

/// Smallest edge blur handed out, in pixels.
pub const MIN_EDGE_BLUR: f64 = 0.5;

/// RGB profile across a streak, sampled every `step` pixels. Samples before
/// the peak lie on side `a`, samples after it on side `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionCurve {
    #[serde(default = "one")]
    pub step: f64,
    pub values: Vec<[f64; 3]>,
}

fn one() -> f64 {
    1.0
}

impl SectionCurve {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) {
            return Err(Error::invalid("section curve step must be positive"));
        }
        if self.values.is_empty() {
            return Err(Error::invalid("section curve is empty"));
        }
        if self.values.iter().flatten().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::invalid("section curve values must be finite and >= 0"));
        }
        if self.values.iter().all(|v| v.iter().sum::<f64>() == 0.0) {
            return Err(Error::invalid("section curve is all zero"));
        }
        Ok(())
    }

    fn intensity(&self, i: usize) -> f64 {
        self.values[i].iter().sum()
    }

    /// Index of the brightest sample (first one on ties).
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.values.len() {
            if self.intensity(i) > self.intensity(best) {
                best = i;
            }
        }
        best
    }

    /// Colour at signed offset `s` pixels from the peak, linear between
    /// samples and held at the end values.
    pub fn color_at(&self, s: f64) -> [f64; 3] {
        let pos = (self.peak_index() as f64 + s / self.step).clamp(0.0, (self.values.len() - 1) as f64);
        let i = (pos.floor() as usize).min(self.values.len() - 1);
        let j = (i + 1).min(self.values.len() - 1);
        let t = pos - i as f64;
        let (a, b) = (self.values[i], self.values[j]);
        [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t]
    }
}

/// Per-side edge blur from the half-life of the section curve: the distance
/// from the peak to where the summed intensity first drops to half of it.
/// A side that never drops to half gets its full extent; results are floored
/// at [`MIN_EDGE_BLUR`].
pub fn derive_edge_blur(curve: &SectionCurve) -> Result<(f64, f64)> {
    curve.validate()?;
    let p = curve.peak_index();
    let half = curve.intensity(p) / 2.0;
    let n = curve.values.len();
    let side = |indices: &mut dyn Iterator<Item = usize>| -> f64 {
        let mut prev = (p, curve.intensity(p));
        let mut steps = 0.0;
        for i in indices {
            let v = curve.intensity(i);
            if v <= half {
                let frac = (prev.1 - half) / (prev.1 - v);
                return (steps + frac) * curve.step;
            }
            prev = (i, v);
            steps += 1.0;
        }
        steps * curve.step
    };
    let a = side(&mut (0..p).rev());
    let b = side(&mut (p + 1..n));
    Ok((a.max(MIN_EDGE_BLUR), b.max(MIN_EDGE_BLUR)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreakSpec {
    /// Axis direction in radians; a streak and its half-turn are the same.
    pub orientation: f64,
    /// Total length in pixels.
    pub length: f64,
    /// Half-width on side `a`, where the cross coordinate `(p - light) · (-sin θ, cos θ)` is negative.
    pub width_a: f64,
    pub width_b: f64,
    pub section: SectionCurve,
    /// Edge Gaussian σ; derived from the section curve when omitted.
    #[serde(default)]
    pub blur_a: Option<f64>,
    #[serde(default)]
    pub blur_b: Option<f64>,
    /// Exponent of the fade toward the streak ends (0 = none).
    #[serde(default = "one")]
    pub taper: f64,
}

impl StreakSpec {
    pub fn validate(&self) -> Result<()> {
        self.section.validate()?;
        for (name, v) in [("length", self.length), ("width_a", self.width_a), ("width_b", self.width_b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("streak {name} must be positive, got {v}")));
            }
        }
        for b in [self.blur_a, self.blur_b].into_iter().flatten() {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::invalid(format!("streak blur must be positive, got {b}")));
            }
        }
        if !(self.taper >= 0.0) {
            return Err(Error::invalid("streak taper must be >= 0"));
        }
        Ok(())
    }

    /// Blurs actually used, falling back to [`derive_edge_blur`].
    pub fn blurs(&self) -> Result<(f64, f64)> {
        let (da, db) = derive_edge_blur(&self.section)?;
        Ok((self.blur_a.unwrap_or(da), self.blur_b.unwrap_or(db)))
    }

    /// Orientation folded into `[0, π)`.
    pub fn axis(&self) -> f64 {
        self.orientation.rem_euclid(PI)
    }
}

#[inline]
fn phi(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / SQRT_2))
}

/// Rectangle through the light along the streak axis, coloured by the
/// section curve, each long edge softened by its own Gaussian (closed form:
/// a box blurred with σ has edge profile Φ).
pub fn build_streak<T: Real>(spec: &StreakSpec, width: usize, height: usize, light: [f64; 2]) -> Result<Image<T>> {
    spec.validate()?;
    check_light(width, height, light)?;
    let (ba, bb) = spec.blurs()?;
    let axis = spec.axis();
    let (ux, uy) = (axis.cos(), axis.sin());
    let half_len = spec.length / 2.0;
    let reach_a = spec.width_a + 5.0 * ba;
    let reach_b = spec.width_b + 5.0 * bb;
    let mut img = Image::zeros(width, height, 3);
    for y in 0..height {
        for x in 0..width {
            let (dx, dy) = (x as f64 - light[0], y as f64 - light[1]);
            let t = dx * ux + dy * uy;
            if t.abs() >= half_len {
                continue;
            }
            // negative s is side a
            let s = -dx * uy + dy * ux;
            if s < -reach_a || s > reach_b {
                continue;
            }
            let edge = phi((spec.width_a + s) / ba) * phi((spec.width_b - s) / bb);
            let fade = (1.0 - t.abs() / half_len).powf(spec.taper);
            let rgb = spec.section.color_at(s);
            for c in 0..3 {
                img.set(x, y, c, T::lit(rgb[c] * edge * fade));
            }
        }
    }
    Ok(img)
}
