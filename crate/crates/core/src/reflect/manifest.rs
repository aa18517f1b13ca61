use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::chain::{render_reflective, Caustics, ClipSpec, IrisChain};
use super::iris::{Iris, IrisShape};
use crate::error::{Error, Result};
use crate::imaging::{Image, RngStream};
use crate::manifest::{check_schema, parse_toml};
use crate::scalar::Real;
use crate::scatter::{LightPlacement, DEFAULT_CANVAS};

fn default_canvas() -> [usize; 2] {
    DEFAULT_CANVAS
}

fn centre() -> [f64; 2] {
    [0.5, 0.5]
}

fn one() -> f64 {
    1.0
}

/// One iris of a chain, before rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrisEntry {
    pub t: f64,
    #[serde(default = "one")]
    pub scale: f64,
    pub tint: [f64; 3],
    pub shape: IrisShape,
}

/// Ridged value-noise texture in a disk, fixed per manifest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausticsSpec {
    /// Pixels.
    pub radius: f64,
    #[serde(default = "three")]
    pub octaves: u32,
    #[serde(default = "half")]
    pub persistence: f64,
    #[serde(default = "eight")]
    pub base_period: f64,
    /// Exponent applied to the ridges; larger is thinner.
    #[serde(default = "two")]
    pub sharpness: f64,
    #[serde(default)]
    pub seed: u64,
    pub gain: f64,
    pub max_opacity: f64,
}

fn three() -> u32 {
    3
}
fn half() -> f64 {
    0.5
}
fn eight() -> f64 {
    8.0
}
fn two() -> f64 {
    2.0
}

impl CausticsSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !(self.sharpness > 0.0) {
            return Err(Error::invalid("caustics radius and sharpness must be > 0"));
        }
        Ok(())
    }

    pub fn build<T: Real>(&self) -> Result<Caustics<T>> {
        self.validate()?;
        let side = 2 * self.radius.ceil() as usize + 1;
        let noise: Image<f64> = crate::imaging::FractalNoise {
            octaves: self.octaves,
            persistence: self.persistence,
            base_period: self.base_period,
        }
        .render(side, side, &RngStream::new(self.seed).named("caustics"))?;
        let c = (side / 2) as f64;
        let pattern = Image::from_fn(side, side, 1, |x, y, _| {
            let q = ((x as f64 - c).powi(2) + (y as f64 - c).powi(2)) / (self.radius * self.radius);
            if q >= 1.0 {
                return T::zero();
            }
            let ridge = 1.0 - (2.0 * noise.get(x, y, 0) - 1.0).abs();
            T::lit(ridge.powf(self.sharpness) * (1.0 - q) * (1.0 - q))
        });
        let out = Caustics {
            pattern,
            gain: self.gain,
            max_opacity: self.max_opacity,
        };
        out.validate()?;
        Ok(out)
    }
}

/// Per-sample variation, closed `[lo, hi]` ranges.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectJitter {
    /// Multiplies every iris scale.
    #[serde(default)]
    pub scale: Option<[f64; 2]>,
    /// Multiplies every tint.
    #[serde(default)]
    pub intensity: Option<[f64; 2]>,
    /// Multiplies every `t`.
    #[serde(default)]
    pub spread: Option<[f64; 2]>,
    /// Added to every polygon rotation, radians.
    #[serde(default)]
    pub rotation: Option<[f64; 2]>,
}

impl ReflectJitter {
    pub fn validate(&self) -> Result<()> {
        for (name, r, positive) in [
            ("scale", self.scale, true),
            ("intensity", self.intensity, false),
            ("spread", self.spread, false),
            ("rotation", self.rotation, false),
        ] {
            if let Some([lo, hi]) = r {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::invalid(format!("jitter {name} = [{lo}, {hi}] is not a range")));
                }
                if positive && lo <= 0.0 {
                    return Err(Error::invalid(format!("jitter {name} must be positive")));
                }
            }
        }
        if self.intensity.is_some_and(|r| r[0] < 0.0) {
            return Err(Error::invalid("jitter intensity must be >= 0"));
        }
        Ok(())
    }
}

/// One reflective-flare type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectManifest {
    pub schema: u32,
    pub name: String,
    #[serde(default = "default_canvas")]
    pub canvas: [usize; 2],
    /// Canvas fraction.
    #[serde(default = "centre")]
    pub optical_center: [f64; 2],
    #[serde(default)]
    pub light: LightPlacement,
    #[serde(default)]
    pub clip: Option<ClipSpec>,
    #[serde(default)]
    pub caustics: Option<CausticsSpec>,
    #[serde(default)]
    pub iris: Vec<IrisEntry>,
    #[serde(default)]
    pub jitter: ReflectJitter,
}

/// Fully resolved parameters of one template.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectInstance {
    pub canvas: [usize; 2],
    pub light: [f64; 2],
    pub optical_center: [f64; 2],
    pub iris: Vec<IrisEntry>,
    pub clip: Option<ClipSpec>,
    pub caustics: Option<CausticsSpec>,
}

fn draw(rng: &mut impl Rng, range: Option<[f64; 2]>) -> Option<f64> {
    range.map(|[lo, hi]| lo + (hi - lo) * rng.random::<f64>())
}

impl ReflectManifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let m: ReflectManifest = parse_toml(text, path)?;
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
        let frac = |p: [f64; 2]| (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1]);
        if !frac(self.optical_center) || !frac(self.light.position) {
            return Err(Error::invalid("optical centre and light position are canvas fractions in [0, 1]"));
        }
        if !(self.light.jitter >= 0.0) {
            return Err(Error::invalid("light jitter must be >= 0"));
        }
        for e in &self.iris {
            e.shape.validate()?;
            if !(e.scale > 0.0) || !e.t.is_finite() || e.tint.iter().any(|c| !(*c >= 0.0)) {
                return Err(Error::invalid("iris needs finite t, scale > 0 and tint >= 0"));
            }
        }
        if let Some(c) = &self.clip {
            c.validate()?;
        }
        if let Some(c) = &self.caustics {
            c.validate()?;
            if !(c.gain >= 0.0) || !(0.0..=1.0).contains(&c.max_opacity) {
                return Err(Error::invalid("caustics need gain >= 0 and max_opacity in [0, 1]"));
            }
        }
        self.jitter.validate()
    }

    pub fn instance(&self, rng: &RngStream) -> ReflectInstance {
        let mut r = rng.substream(0).rng();
        let [w, h] = self.canvas;
        let j = self.light.jitter;
        let lx = self.light.position[0] + j * (2.0 * r.random::<f64>() - 1.0);
        let ly = self.light.position[1] + j * (2.0 * r.random::<f64>() - 1.0);
        let light = [
            (lx * w as f64).clamp(0.0, (w - 1) as f64),
            (ly * h as f64).clamp(0.0, (h - 1) as f64),
        ];
        let scale = draw(&mut r, self.jitter.scale).unwrap_or(1.0);
        let intensity = draw(&mut r, self.jitter.intensity).unwrap_or(1.0);
        let spread = draw(&mut r, self.jitter.spread).unwrap_or(1.0);
        let rot = draw(&mut r, self.jitter.rotation).unwrap_or(0.0);
        let iris = self
            .iris
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.scale *= scale;
                e.t *= spread;
                e.tint = e.tint.map(|c| c * intensity);
                if let IrisShape::Polygon { rotation, .. } = &mut e.shape {
                    *rotation += rot;
                }
                e
            })
            .collect();
        ReflectInstance {
            canvas: self.canvas,
            light,
            optical_center: [self.optical_center[0] * w as f64, self.optical_center[1] * h as f64],
            iris,
            clip: self.clip,
            caustics: self.caustics,
        }
    }

    pub fn render<T: Real>(&self, rng: &RngStream) -> Result<Image<T>> {
        self.instance(rng).render()
    }
}

impl ReflectInstance {
    pub fn chain<T: Real>(&self) -> Result<IrisChain<T>> {
        let irises = self
            .iris
            .iter()
            .map(|e| Iris::new(e.shape.render()?, e.t, e.scale, e.tint))
            .collect::<Result<Vec<_>>>()?;
        Ok(IrisChain {
            irises,
            optical_center: self.optical_center,
            clip: self.clip,
            caustics: self.caustics.map(|c| c.build()).transpose()?,
        })
    }

    pub fn render<T: Real>(&self) -> Result<Image<T>> {
        render_reflective(&self.chain()?, self.light, self.canvas[0], self.canvas[1])
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const SAMPLE: &str = r#"
schema = 1
name = "ghosts"
canvas = [96, 80]
optical_center = [0.5, 0.5]

[light]
position = [0.3, 0.4]
jitter = 0.1

[clip]
threshold = 20.0
rate = 0.1
sides = 6

[caustics]
radius = 5.0
gain = 0.01
max_opacity = 0.4
seed = 3

[[iris]]
t = 0.5
tint = [0.10, 0.20, 0.10]
shape = { kind = "polygon", sides = 6, radius = 5.0 }

[[iris]]
t = 1.2
scale = 1.5
tint = [0.20, 0.10, 0.05]
shape = { kind = "disk", radius = 4.0, ring = { position = 0.8, width = 0.1, gain = 0.5 } }

[[iris]]
t = -0.3
tint = [0.05, 0.05, 0.10]
shape = { kind = "lattice", rows = 2, cols = 3, cell_size = 2.0, cell_gap = 1.0, cell_shape = "square" }

[jitter]
scale = [0.8, 1.2]
intensity = [0.7, 1.3]
rotation = [-0.5, 0.5]
"#;

    #[test]
    fn parses_and_renders_deterministically() {
        let m = ReflectManifest::parse(SAMPLE, Path::new("r.toml")).unwrap();
        assert_eq!(m.iris.len(), 3);
        let a: Image<f32> = m.render(&RngStream::at(4, 0)).unwrap();
        let b: Image<f32> = m.render(&RngStream::at(4, 0)).unwrap();
        assert_eq!(a, b);
        assert!(a.max_value() > 0.0 && a.max_value() <= 1.0);
        let c: Image<f32> = m.render(&RngStream::at(4, 1)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn caustics_pattern_is_fixed_and_bounded() {
        let m = ReflectManifest::parse(SAMPLE, Path::new("r.toml")).unwrap();
        let a: Caustics<f64> = m.caustics.unwrap().build().unwrap();
        let b: Caustics<f64> = m.caustics.unwrap().build().unwrap();
        assert_eq!(a, b);
        assert!(a.pattern.min_value() >= 0.0 && a.pattern.max_value() <= 1.0);
        assert_eq!(a.pattern.get(0, 0, 0), 0.0);
    }

    #[test]
    fn bad_fields_rejected() {
        let bad = SAMPLE.replace("max_opacity = 0.4", "max_opacity = 1.4");
        assert!(ReflectManifest::parse(&bad, Path::new("r.toml")).is_err());
        let bad = SAMPLE.replace("threshold = 20.0", "threshold = 0.0");
        assert!(ReflectManifest::parse(&bad, Path::new("r.toml")).is_err());
        let bad = SAMPLE.replace("t = 0.5", "t = 0.5\nq = 1");
        let msg = ReflectManifest::parse(&bad, Path::new("r.toml")).unwrap_err().to_string();
        assert!(msg.contains("line"), "{msg}");
    }
}
