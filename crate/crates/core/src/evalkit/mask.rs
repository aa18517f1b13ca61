use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

pub const SATURATION_THRESHOLD: f64 = 0.97;
pub const DEFAULT_FEATHER: f64 = 3.0;

/// Pixels whose brightest channel reaches the threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct SaturationMask<T> {
    /// 0 / 1, one channel.
    pub binary: Image<T>,
    /// Feathered weights in `[0, 1]`; equal to `binary` when `feather == 0`.
    pub weights: Image<T>,
    pub threshold: f64,
    pub feather: f64,
}

impl<T: Real> SaturationMask<T> {
    pub fn count(&self) -> usize {
        self.binary.data().iter().filter(|&&v| v > T::zero()).count()
    }
}

/// Marks a pixel when `max(r, g, b) >= threshold`, then optionally feathers
/// the border outward with a raised cosine over `feather` pixels.
pub fn saturation_mask<T: Real>(img: &Image<T>, threshold: f64, feather: f64) -> Result<SaturationMask<T>> {
    if !(feather >= 0.0) || !threshold.is_finite() {
        return Err(Error::invalid("feather must be >= 0 and threshold finite"));
    }
    let t = T::lit(threshold);
    let binary = img.channel_max().map(|v| if v >= t { T::one() } else { T::zero() });
    let weights = if feather > 0.0 { feather_mask(&binary, feather) } else { binary.clone() };
    Ok(SaturationMask {
        binary,
        weights,
        threshold,
        feather,
    })
}

fn feather_mask<T: Real>(binary: &Image<T>, radius: f64) -> Image<T> {
    let (w, h) = (binary.width(), binary.height());
    let r = radius.ceil() as i64;
    let marked = |x: i64, y: i64| x >= 0 && y >= 0 && x < w as i64 && y < h as i64 && binary.get(x as usize, y as usize, 0) > T::zero();
    Image::from_fn(w, h, 1, |x, y, _| {
        let (x, y) = (x as i64, y as i64);
        if marked(x, y) {
            return T::one();
        }
        let mut best = f64::INFINITY;
        for dy in -r..=r {
            for dx in -r..=r {
                if marked(x + dx, y + dy) {
                    best = best.min(((dx * dx + dy * dy) as f64).sqrt());
                }
            }
        }
        if best >= radius {
            T::zero()
        } else {
            T::lit(0.5 * (1.0 + (PI * best / radius).cos()))
        }
    })
}

/// `w · input + (1 − w) · deflared`, exact at `w = 0` and `w = 1`.
pub fn paste_back<T: Real>(deflared: &Image<T>, input: &Image<T>, mask: &SaturationMask<T>) -> Result<Image<T>> {
    deflared.ensure_same_shape(input)?;
    let m = &mask.weights;
    if m.width() != input.width() || m.height() != input.height() {
        return Err(Error::ShapeMismatch(format!(
            "mask {}x{} vs image {}x{}",
            m.width(),
            m.height(),
            input.width(),
            input.height()
        )));
    }
    Ok(Image::from_fn(input.width(), input.height(), input.channels(), |x, y, c| {
        let wgt = m.get(x, y, 0);
        if wgt <= T::zero() {
            deflared.get(x, y, c)
        } else if wgt >= T::one() {
            input.get(x, y, c)
        } else {
            wgt * input.get(x, y, c) + (T::one() - wgt) * deflared.get(x, y, c)
        }
    }))
}
