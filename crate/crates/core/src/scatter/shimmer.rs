use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::check_light;
use super::glare::angular_distance;
use crate::error::{Error, Result};
use crate::imaging::{radial_blur, FractalNoise, Image, RngStream, DEFAULT_BASE_PERIOD};
use crate::scalar::Real;

/// One angular lobe: peak amplitude and Gaussian width in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpikeLobe {
    pub amplitude: f64,
    pub width: f64,
}

/// Radially blurred fractal noise near the light source.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShimmerNoise {
    pub octaves: u32,
    pub persistence: f64,
    #[serde(default = "default_period")]
    pub base_period: f64,
    /// Pixels.
    pub patch_radius: f64,
    /// Fraction of the distance to the centre covered by the blur, `[0, 1]`.
    pub radial_blur_amount: f64,
    pub opacity: f64,
}

fn default_period() -> f64 {
    DEFAULT_BASE_PERIOD
}

impl Default for ShimmerNoise {
    fn default() -> Self {
        ShimmerNoise {
            octaves: 4,
            persistence: 0.5,
            base_period: DEFAULT_BASE_PERIOD,
            patch_radius: 0.0,
            radial_blur_amount: 0.0,
            opacity: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShimmerSpec {
    pub spike_count: u32,
    /// Angle of spike 0, radians.
    #[serde(default)]
    pub rotation: f64,
    /// Pixels; spikes fade to zero here.
    pub radius: f64,
    /// Lobe of spike `i` is `profile[i % profile.len()]`.
    pub profile: Vec<SpikeLobe>,
    pub color: [f64; 3],
    /// Exponent of the radial fade `(1 - ρ/R)^falloff`.
    #[serde(default = "two")]
    pub falloff: f64,
    #[serde(default)]
    pub noise: ShimmerNoise,
}

fn two() -> f64 {
    2.0
}

impl ShimmerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.spike_count < 3 {
            return Err(Error::invalid(format!("shimmer needs >= 3 spikes, got {}", self.spike_count)));
        }
        if self.profile.is_empty() {
            return Err(Error::invalid("shimmer profile is empty"));
        }
        if self.profile.iter().any(|l| !(l.amplitude >= 0.0) || !(l.width > 0.0)) {
            return Err(Error::invalid("shimmer lobes need amplitude >= 0 and width > 0"));
        }
        if !(self.radius > 0.0) || !(self.falloff >= 0.0) {
            return Err(Error::invalid("shimmer radius must be > 0 and falloff >= 0"));
        }
        if self.color.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::invalid("shimmer colour must be >= 0"));
        }
        let n = &self.noise;
        if n.opacity < 0.0 || n.patch_radius < 0.0 || !(0.0..=1.0).contains(&n.radial_blur_amount) {
            return Err(Error::invalid("shimmer noise needs opacity, patch radius >= 0 and blur in [0, 1]"));
        }
        if n.opacity > 0.0 && n.patch_radius > 0.0 {
            FractalNoise {
                octaves: n.octaves,
                persistence: n.persistence,
                base_period: n.base_period,
            }
            .validate()?;
        }
        Ok(())
    }

    /// Angular spike gain at direction `phi`.
    pub fn angular(&self, phi: f64) -> f64 {
        let n = self.spike_count as usize;
        (0..n)
            .map(|i| {
                let lobe = self.profile[i % self.profile.len()];
                let d = angular_distance(phi, self.rotation + TAU * i as f64 / n as f64);
                lobe.amplitude * (-d * d / (2.0 * lobe.width * lobe.width)).exp()
            })
            .sum()
    }
}

fn bounds(c: f64, r: f64, n: usize) -> (usize, usize) {
    let lo = (c - r).floor().max(0.0) as usize;
    let hi = ((c + r).ceil().max(0.0) as usize).min(n - 1);
    (lo, hi)
}

/// Radial spikes around the light plus an additive radial-noise patch. The
/// spikes are deterministic; `rng` only drives the noise.
pub fn build_shimmer<T: Real>(
    spec: &ShimmerSpec,
    width: usize,
    height: usize,
    light: [f64; 2],
    rng: &RngStream,
) -> Result<Image<T>> {
    spec.validate()?;
    check_light(width, height, light)?;
    let mut img = Image::zeros(width, height, 3);

    let r = spec.radius;
    let (x0, x1) = bounds(light[0], r, width);
    let (y0, y1) = bounds(light[1], r, height);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let (dx, dy) = (x as f64 - light[0], y as f64 - light[1]);
            let rho = dx.hypot(dy);
            if rho >= r {
                continue;
            }
            let g = (1.0 - rho / r).powf(spec.falloff) * spec.angular(dy.atan2(dx));
            for c in 0..3 {
                img.set(x, y, c, T::lit(g * spec.color[c]));
            }
        }
    }

    let n = spec.noise;
    if n.opacity > 0.0 && n.patch_radius > 0.0 {
        let pr = n.patch_radius;
        let (px0, px1) = bounds(light[0], pr, width);
        let (py0, py1) = bounds(light[1], pr, height);
        let (pw, ph) = (px1 - px0 + 1, py1 - py0 + 1);
        let noise: Image<T> = FractalNoise {
            octaves: n.octaves,
            persistence: n.persistence,
            base_period: n.base_period,
        }
        .render(pw, ph, rng)?;
        let centre = [light[0] - px0 as f64, light[1] - py0 as f64];
        let blurred = radial_blur(&noise, centre, n.radial_blur_amount)?;
        for y in 0..ph {
            for x in 0..pw {
                let (dx, dy) = (x as f64 - centre[0], y as f64 - centre[1]);
                let q = (dx * dx + dy * dy) / (pr * pr);
                if q >= 1.0 {
                    continue;
                }
                let w = n.opacity * (1.0 - q) * (1.0 - q) * blurred.get(x, y, 0).as_f64();
                for c in 0..3 {
                    let v = img.get(px0 + x, py0 + y, c);
                    img.set(px0 + x, py0 + y, c, v + T::lit(w * spec.color[c]));
                }
            }
        }
    }
    Ok(img)
}
