use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::glare::{build_glare, GlareSpec};
use super::shimmer::{build_shimmer, ShimmerSpec};
use super::source::{build_source, SourceSpec};
use super::streak::{build_streak, StreakSpec};
use super::template::{compose_template, FlareTemplate};
use crate::error::{Error, Result};
use crate::imaging::{Image, RngStream};
use crate::manifest::{check_schema, parse_toml};
use crate::scalar::Real;

pub const DEFAULT_CANVAS: [usize; 2] = [1440, 1440];

fn default_canvas() -> [usize; 2] {
    DEFAULT_CANVAS
}

/// Light position as a fraction of the canvas, jittered uniformly by
/// `±jitter` (also a fraction) per axis and clamped to the canvas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightPlacement {
    #[serde(default = "centre")]
    pub position: [f64; 2],
    #[serde(default = "quarter")]
    pub jitter: f64,
}

fn centre() -> [f64; 2] {
    [0.5, 0.5]
}
fn quarter() -> f64 {
    0.25
}

impl Default for LightPlacement {
    fn default() -> Self {
        LightPlacement {
            position: centre(),
            jitter: quarter(),
        }
    }
}

/// Per-sample variation. Every entry is a closed `[lo, hi]` range;
/// "scale" entries multiply the base value, the others replace or offset it
/// as documented.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterJitter {
    #[serde(default)]
    pub glare_radius_scale: Option<[f64; 2]>,
    /// Multiplies the glare curve colours.
    #[serde(default)]
    pub glare_gain: Option<[f64; 2]>,
    /// Replaces the vanishing angle (both sides).
    #[serde(default)]
    pub vanishing_angle: Option<[f64; 2]>,
    /// Added to the streak orientation, radians.
    #[serde(default)]
    pub streak_rotation: Option<[f64; 2]>,
    #[serde(default)]
    pub streak_width_scale: Option<[f64; 2]>,
    #[serde(default)]
    pub streak_length_scale: Option<[f64; 2]>,
    /// Added to the shimmer rotation, radians.
    #[serde(default)]
    pub shimmer_rotation: Option<[f64; 2]>,
    #[serde(default)]
    pub shimmer_radius_scale: Option<[f64; 2]>,
    #[serde(default)]
    pub source_radius_scale: Option<[f64; 2]>,
}

impl ScatterJitter {
    fn ranges(&self) -> [(&'static str, Option<[f64; 2]>); 9] {
        [
            ("glare_radius_scale", self.glare_radius_scale),
            ("glare_gain", self.glare_gain),
            ("vanishing_angle", self.vanishing_angle),
            ("streak_rotation", self.streak_rotation),
            ("streak_width_scale", self.streak_width_scale),
            ("streak_length_scale", self.streak_length_scale),
            ("shimmer_rotation", self.shimmer_rotation),
            ("shimmer_radius_scale", self.shimmer_radius_scale),
            ("source_radius_scale", self.source_radius_scale),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in self.ranges() {
            if let Some([lo, hi]) = r {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::invalid(format!("jitter {name} = [{lo}, {hi}] is not a range")));
                }
                if name.ends_with("_scale") && lo <= 0.0 {
                    return Err(Error::invalid(format!("jitter {name} must be positive")));
                }
            }
        }
        if let Some([lo, _]) = self.glare_gain {
            if lo < 0.0 {
                return Err(Error::invalid("jitter glare_gain must be >= 0"));
            }
        }
        if let Some([lo, hi]) = self.vanishing_angle {
            if lo < 0.0 || hi >= std::f64::consts::PI {
                return Err(Error::invalid("jitter vanishing_angle must lie in [0, π)"));
            }
        }
        Ok(())
    }
}

/// One scattering-flare type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterManifest {
    pub schema: u32,
    pub name: String,
    #[serde(default = "default_canvas")]
    pub canvas: [usize; 2],
    #[serde(default)]
    pub light: LightPlacement,
    pub glare: GlareSpec,
    #[serde(default)]
    pub streak: Option<StreakSpec>,
    #[serde(default)]
    pub shimmer: Option<ShimmerSpec>,
    pub source: SourceSpec,
    #[serde(default)]
    pub jitter: ScatterJitter,
}

/// Fully resolved parameters of one template.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterInstance {
    pub canvas: [usize; 2],
    pub light: [f64; 2],
    pub glare: GlareSpec,
    pub streak: Option<StreakSpec>,
    pub shimmer: Option<ShimmerSpec>,
    pub source: SourceSpec,
}

fn draw(rng: &mut impl Rng, range: Option<[f64; 2]>) -> Option<f64> {
    range.map(|[lo, hi]| lo + (hi - lo) * rng.random::<f64>())
}

impl ScatterManifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let m: ScatterManifest = parse_toml(text, path)?;
        check_schema(m.schema, path)?;
        m.validate().map_err(|e| Error::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::invalid(format!("bad flare type name {:?}", self.name)));
        }
        if self.canvas[0] == 0 || self.canvas[1] == 0 {
            return Err(Error::invalid("canvas must be non-empty"));
        }
        if !(0.0..=1.0).contains(&self.light.position[0]) || !(0.0..=1.0).contains(&self.light.position[1]) {
            return Err(Error::invalid("light position is a canvas fraction in [0, 1]"));
        }
        if !(self.light.jitter >= 0.0) {
            return Err(Error::invalid("light jitter must be >= 0"));
        }
        self.glare.validate()?;
        if let Some(s) = &self.streak {
            s.validate()?;
        }
        if let Some(s) = &self.shimmer {
            s.validate()?;
        }
        self.source.validate()?;
        self.jitter.validate()?;
        let gain = self.jitter.glare_gain.map_or(1.0, |r| r[1]);
        if self.glare.curve.max_value() * gain >= 1.0 {
            return Err(Error::invalid(
                "glare curve times the largest glare_gain must stay below 1 (overexposure belongs to the light source)",
            ));
        }
        Ok(())
    }

    /// Draws the parameters of one sample. The draw order is fixed, so the
    /// instance is a pure function of the manifest and the stream.
    pub fn instance(&self, rng: &RngStream) -> ScatterInstance {
        let mut r = rng.substream(0).rng();
        let [w, h] = self.canvas;
        let j = self.light.jitter;
        let lx = self.light.position[0] + j * (2.0 * r.random::<f64>() - 1.0);
        let ly = self.light.position[1] + j * (2.0 * r.random::<f64>() - 1.0);
        let light = [
            (lx * w as f64).clamp(0.0, (w - 1) as f64),
            (ly * h as f64).clamp(0.0, (h - 1) as f64),
        ];

        let jit = &self.jitter;
        let mut glare = self.glare.clone();
        if let Some(k) = draw(&mut r, jit.glare_radius_scale) {
            glare.radius *= k;
        }
        if let Some(k) = draw(&mut r, jit.glare_gain) {
            glare.curve = glare.curve.scaled(k);
        }
        if let Some(a) = draw(&mut r, jit.vanishing_angle) {
            let back_ratio = match glare.vanishing.angle_back {
                Some(b) if glare.vanishing.angle > 0.0 => b / glare.vanishing.angle,
                _ => 1.0,
            };
            glare.vanishing.angle = a;
            glare.vanishing.angle_back = Some((a * back_ratio).min(std::f64::consts::PI - 1e-6));
        }

        let mut streak = self.streak.clone();
        let rot = draw(&mut r, jit.streak_rotation);
        let ws = draw(&mut r, jit.streak_width_scale);
        let ls = draw(&mut r, jit.streak_length_scale);
        if let Some(s) = streak.as_mut() {
            s.orientation += rot.unwrap_or(0.0);
            let k = ws.unwrap_or(1.0);
            s.width_a *= k;
            s.width_b *= k;
            s.length *= ls.unwrap_or(1.0);
            glare.vanishing.orientation = s.orientation;
        }

        let mut shimmer = self.shimmer.clone();
        let srot = draw(&mut r, jit.shimmer_rotation);
        let srad = draw(&mut r, jit.shimmer_radius_scale);
        if let Some(s) = shimmer.as_mut() {
            s.rotation += srot.unwrap_or(0.0);
            s.radius *= srad.unwrap_or(1.0);
        }

        let mut source = self.source;
        if let Some(k) = draw(&mut r, jit.source_radius_scale) {
            source.core = source.core.with_radius(source.core.radius() * k);
        }

        ScatterInstance {
            canvas: self.canvas,
            light,
            glare,
            streak,
            shimmer,
            source,
        }
    }

    pub fn render<T: Real>(&self, rng: &RngStream) -> Result<FlareTemplate<T>> {
        self.instance(rng).render(rng)
    }
}

impl ScatterInstance {
    pub fn render<T: Real>(&self, rng: &RngStream) -> Result<FlareTemplate<T>> {
        let [w, h] = self.canvas;
        let glare = build_glare(&self.glare, w, h, self.light)?;
        let streak = match &self.streak {
            Some(s) => build_streak(s, w, h, self.light)?,
            None => Image::zeros(w, h, 3),
        };
        let shimmer = match &self.shimmer {
            Some(s) => build_shimmer(s, w, h, self.light, &rng.substream(1))?,
            None => Image::zeros(w, h, 3),
        };
        let source = build_source(&self.source, w, h, self.light)?;
        compose_template(glare, streak, shimmer, source, self.light)
    }
}
