use serde::{Deserialize, Serialize};

use super::iris::{polygon_edge, Iris};
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

/// Clipping by a second, unrendered iris once the light is far from the
/// optical centre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClipSpec {
    /// Light-to-centre distance (pixels) at which clipping starts.
    pub threshold: f64,
    /// Mask displacement in patch pixels per pixel of excess distance.
    pub rate: f64,
    /// Mask polygon sides; 0 for a circle.
    #[serde(default)]
    pub sides: u32,
    #[serde(default)]
    pub rotation: f64,
}

impl ClipSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0) || !(self.rate >= 0.0) {
            return Err(Error::invalid("clip threshold must be > 0 and rate >= 0"));
        }
        if self.sides != 0 && self.sides < 3 {
            return Err(Error::invalid("clip mask needs 0 (circle) or >= 3 sides"));
        }
        Ok(())
    }

    /// Convex gauge of the mask shape: radial distance scaled so the
    /// boundary of a unit-apothem shape sits at 1.
    fn gauge(&self, dx: f64, dy: f64) -> f64 {
        let rho = dx.hypot(dy);
        if self.sides == 0 || rho == 0.0 {
            return rho;
        }
        let n = self.sides as f64;
        let apothem = (std::f64::consts::PI / n).cos();
        rho * apothem / polygon_edge(self.sides, 1.0, self.rotation, dy.atan2(dx))
    }
}

/// Caustics texture drawn at each iris centre with distance-driven opacity.
#[derive(Clone, Debug, PartialEq)]
pub struct Caustics<T> {
    /// Single channel, centred, odd side.
    pub pattern: Image<T>,
    /// Opacity per pixel of iris-light distance.
    pub gain: f64,
    pub max_opacity: f64,
}

impl<T: Real> Caustics<T> {
    pub fn validate(&self) -> Result<()> {
        let p = &self.pattern;
        if p.channels() != 1 || p.width() != p.height() || p.width() % 2 == 0 {
            return Err(Error::ShapeMismatch("caustics pattern must be square, odd-sided, 1 channel".into()));
        }
        if !(self.gain >= 0.0) || !(0.0..=1.0).contains(&self.max_opacity) {
            return Err(Error::invalid("caustics need gain >= 0 and max_opacity in [0, 1]"));
        }
        Ok(())
    }
}

/// `min(max_opacity, gain · dist)`.
pub fn caustics_opacity(dist: f64, gain: f64, max_opacity: f64) -> f64 {
    (gain * dist.max(0.0)).min(max_opacity)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrisChain<T> {
    pub irises: Vec<Iris<T>>,
    pub optical_center: [f64; 2],
    pub clip: Option<ClipSpec>,
    pub caustics: Option<Caustics<T>>,
}

impl<T: Real> IrisChain<T> {
    pub fn validate(&self) -> Result<()> {
        self.irises.iter().try_for_each(Iris::validate)?;
        if let Some(c) = &self.clip {
            c.validate()?;
        }
        if let Some(c) = &self.caustics {
            c.validate()?;
        }
        Ok(())
    }
}

/// `position_i = c + t_i (c − light)`.
pub fn place_irises<T: Real>(chain: &IrisChain<T>, light: [f64; 2]) -> Vec<[f64; 2]> {
    let c = chain.optical_center;
    let v = [c[0] - light[0], c[1] - light[1]];
    chain.irises.iter().map(|i| [c[0] + i.t * v[0], c[1] + i.t * v[1]]).collect()
}

/// Multiplies the patch by the clip mask shifted by `rate · (light_dist −
/// threshold)` along `direction`. At zero shift the mask covers the whole
/// patch; the mask is quasi-concave, so every pixel (and the sum) only
/// decreases as the shift grows.
pub fn clip_iris<T: Real>(patch: &Image<T>, direction: [f64; 2], light_dist: f64, clip: &ClipSpec) -> Image<T> {
    let excess = light_dist - clip.threshold;
    if !(excess > 0.0) || clip.rate == 0.0 {
        return patch.clone();
    }
    let norm = direction[0].hypot(direction[1]);
    let d = if norm > 0.0 { [direction[0] / norm, direction[1] / norm] } else { [1.0, 0.0] };
    let c = (patch.width() / 2) as f64;
    // radius of the patch corner plus a margin for the 1-pixel ramp
    let apothem = c * std::f64::consts::SQRT_2 + 1.0;
    let shift = clip.rate * excess;
    Image::from_fn(patch.width(), patch.height(), 1, |x, y, _| {
        let v = patch.get(x, y, 0);
        if v == T::zero() {
            return v;
        }
        let (qx, qy) = (x as f64 - c - shift * d[0], y as f64 - c - shift * d[1]);
        let m = (apothem + 0.5 - clip.gauge(qx, qy)).clamp(0.0, 1.0);
        v * T::lit(m)
    })
}

fn splat<T: Real>(out: &mut Image<T>, patch: &Image<T>, pos: [f64; 2], scale: f64, rgb: [f64; 3]) {
    let (w, h) = (out.width(), out.height());
    let c = (patch.width() / 2) as f64;
    let reach = (c + 1.0) * scale;
    let x0 = (pos[0] - reach).floor().max(0.0);
    let y0 = (pos[1] - reach).floor().max(0.0);
    let x1 = (pos[0] + reach).ceil().min(w as f64 - 1.0);
    let y1 = (pos[1] + reach).ceil().min(h as f64 - 1.0);
    if x1 < x0 || y1 < y0 {
        return;
    }
    for y in y0 as usize..=y1 as usize {
        for x in x0 as usize..=x1 as usize {
            let u = (x as f64 - pos[0]) / scale + c;
            let v = (y as f64 - pos[1]) / scale + c;
            let s = patch.sample_bilinear(u, v, 0);
            if s == T::zero() {
                continue;
            }
            for (k, &g) in rgb.iter().enumerate() {
                let cur = out.get(x, y, k);
                out.set(x, y, k, cur + s * T::lit(g));
            }
        }
    }
}

fn render_one<T: Real>(out: &mut Image<T>, chain: &IrisChain<T>, index: usize, pos: [f64; 2], light: [f64; 2]) {
    let iris = &chain.irises[index];
    let c = chain.optical_center;
    let light_dist = (light[0] - c[0]).hypot(light[1] - c[1]);
    let patch = match &chain.clip {
        Some(clip) => {
            // outward along the iris line
            let mut dir = [pos[0] - c[0], pos[1] - c[1]];
            if dir[0] == 0.0 && dir[1] == 0.0 {
                dir = [c[0] - light[0], c[1] - light[1]];
            }
            clip_iris(&iris.patch, dir, light_dist, clip)
        }
        None => iris.patch.clone(),
    };
    splat(out, &patch, pos, iris.scale, iris.tint);
    if let Some(ca) = &chain.caustics {
        let a = caustics_opacity((pos[0] - light[0]).hypot(pos[1] - light[1]), ca.gain, ca.max_opacity);
        if a > 0.0 {
            splat(out, &ca.pattern, pos, iris.scale, iris.tint.map(|t| t * a));
        }
    }
}

/// Iris `index` alone, unclipped in value.
pub fn render_iris<T: Real>(chain: &IrisChain<T>, index: usize, light: [f64; 2], width: usize, height: usize) -> Result<Image<T>> {
    chain.validate()?;
    if index >= chain.irises.len() {
        return Err(Error::invalid(format!("iris index {index} out of range")));
    }
    let pos = place_irises(chain, light)[index];
    let mut out = Image::zeros(width, height, 3);
    render_one(&mut out, chain, index, pos, light);
    Ok(out)
}

/// Additive composition of every iris (and its caustics) before clipping.
pub fn render_reflective_unclipped<T: Real>(
    chain: &IrisChain<T>,
    light: [f64; 2],
    width: usize,
    height: usize,
) -> Result<Image<T>> {
    chain.validate()?;
    let mut out = Image::zeros(width, height, 3);
    for (i, pos) in place_irises(chain, light).into_iter().enumerate() {
        render_one(&mut out, chain, i, pos, light);
    }
    Ok(out)
}

pub fn render_reflective<T: Real>(chain: &IrisChain<T>, light: [f64; 2], width: usize, height: usize) -> Result<Image<T>> {
    Ok(render_reflective_unclipped(chain, light, width, height)?.clip01())
}
