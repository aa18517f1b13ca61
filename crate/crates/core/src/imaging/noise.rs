use serde::{Deserialize, Serialize};

use super::{Image, RngStream};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default lattice period of the first octave, in pixels.
pub const DEFAULT_BASE_PERIOD: f64 = 32.0;

/// Fractal (multi-octave) value noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractalNoise {
    pub octaves: u32,
    pub persistence: f64,
    #[serde(default = "default_base_period")]
    pub base_period: f64,
}

fn default_base_period() -> f64 {
    DEFAULT_BASE_PERIOD
}

#[inline]
fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

impl FractalNoise {
    pub fn validate(&self) -> Result<()> {
        if self.octaves < 1 {
            return Err(Error::invalid("fractal noise needs at least one octave"));
        }
        if !(self.persistence > 0.0 && self.persistence <= 1.0) {
            return Err(Error::invalid(format!(
                "persistence must lie in (0, 1], got {}",
                self.persistence
            )));
        }
        if !(self.base_period > 0.0 && self.base_period.is_finite()) {
            return Err(Error::invalid("base period must be positive"));
        }
        Ok(())
    }

    /// Octave lattice values are hashed from the stream, so the result is a
    /// pure function of `(self, width, height, rng)`.
    pub fn render<T: Real>(&self, width: usize, height: usize, rng: &RngStream) -> Result<Image<T>> {
        self.validate()?;
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!("noise canvas {width}x{height} is empty")));
        }
        let mut amps = Vec::with_capacity(self.octaves as usize);
        let mut a = 1.0;
        for _ in 0..self.octaves {
            amps.push(a);
            a *= self.persistence;
        }
        let norm: f64 = amps.iter().sum();
        let octave_streams: Vec<RngStream> = (0..self.octaves as u64).map(|o| rng.substream(o)).collect();

        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let mut v = 0.0;
                for (o, (stream, amp)) in octave_streams.iter().zip(&amps).enumerate() {
                    let freq = (1u64 << o) as f64 / self.base_period;
                    v += amp * value_noise(stream, x as f64 * freq, y as f64 * freq);
                }
                data.push(T::lit(v / norm));
            }
        }
        Ok(Image::from_raw(width, height, 1, data))
    }
}

/// Smoothly interpolated lattice noise in `[0, 1]`.
pub fn value_noise(stream: &RngStream, x: f64, y: f64) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let (ix, iy) = (x0 as i64, y0 as i64);
    let tx = smoothstep(x - x0);
    let ty = smoothstep(y - y0);
    let v00 = stream.hash_unit(&[ix, iy]);
    let v10 = stream.hash_unit(&[ix + 1, iy]);
    let v01 = stream.hash_unit(&[ix, iy + 1]);
    let v11 = stream.hash_unit(&[ix + 1, iy + 1]);
    let top = v00 + (v10 - v00) * tx;
    let bottom = v01 + (v11 - v01) * tx;
    top + (bottom - top) * ty
}

/// Fractal value noise with the default base period.
pub fn fractal_noise<T: Real>(
    width: usize,
    height: usize,
    octaves: u32,
    persistence: f64,
    rng: &RngStream,
) -> Result<Image<T>> {
    FractalNoise {
        octaves,
        persistence,
        base_period: DEFAULT_BASE_PERIOD,
    }
    .render(width, height, rng)
}
