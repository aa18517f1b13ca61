use serde::{Deserialize, Serialize};

use super::Image;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Similarity-plus-shear transform applied about the canvas centre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineParams {
    /// Radians, counter-clockwise in image coordinates (y down).
    pub rotation: f64,
    pub translate_x: f64,
    pub translate_y: f64,
    /// Horizontal shear angle in radians.
    pub shear: f64,
    pub scale: f64,
    pub flip_h: bool,
    pub flip_v: bool,
}

impl Default for AffineParams {
    fn default() -> Self {
        AffineParams {
            rotation: 0.0,
            translate_x: 0.0,
            translate_y: 0.0,
            shear: 0.0,
            scale: 1.0,
            flip_h: false,
            flip_v: false,
        }
    }
}

impl AffineParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.rotation, self.translate_x, self.translate_y, self.shear, self.scale]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("affine parameters must be finite"));
        }
        if self.scale <= 0.0 {
            return Err(Error::invalid(format!("affine scale must be > 0, got {}", self.scale)));
        }
        Ok(())
    }

    /// Linear part `scale · shear · rotate · flip` as row-major 2x2.
    pub fn linear(&self) -> [[f64; 2]; 2] {
        let fx = if self.flip_h { -1.0 } else { 1.0 };
        let fy = if self.flip_v { -1.0 } else { 1.0 };
        let (s, c) = self.rotation.sin_cos();
        // R · F
        let rf = [[c * fx, -s * fy], [s * fx, c * fy]];
        // Sh · R · F with Sh = [[1, tan], [0, 1]]
        let t = self.shear.tan();
        let shr = [
            [rf[0][0] + t * rf[1][0], rf[0][1] + t * rf[1][1]],
            [rf[1][0], rf[1][1]],
        ];
        let k = self.scale;
        [[k * shr[0][0], k * shr[0][1]], [k * shr[1][0], k * shr[1][1]]]
    }

    /// Maps an output pixel back to its source location.
    pub fn inverse_map(&self, width: usize, height: usize) -> impl Fn(f64, f64) -> (f64, f64) {
        let m = self.linear();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        let cx = (width as f64 - 1.0) / 2.0;
        let cy = (height as f64 - 1.0) / 2.0;
        let (tx, ty) = (self.translate_x, self.translate_y);
        move |x, y| {
            let u = x - cx - tx;
            let v = y - cy - ty;
            (inv[0][0] * u + inv[0][1] * v + cx, inv[1][0] * u + inv[1][1] * v + cy)
        }
    }

    /// Forward map of a source point, the inverse of [`Self::inverse_map`].
    pub fn forward_point(&self, width: usize, height: usize, p: [f64; 2]) -> [f64; 2] {
        let m = self.linear();
        let cx = (width as f64 - 1.0) / 2.0;
        let cy = (height as f64 - 1.0) / 2.0;
        let (u, v) = (p[0] - cx, p[1] - cy);
        [
            m[0][0] * u + m[0][1] * v + cx + self.translate_x,
            m[1][0] * u + m[1][1] * v + cy + self.translate_y,
        ]
    }
}

/// Single-pass affine warp: flip, rotate, shear, scale, then translate, all
/// about the canvas centre; bilinear sampling with zero padding.
pub fn warp_affine<T: Real>(img: &Image<T>, p: &AffineParams) -> Result<Image<T>> {
    p.validate()?;
    if *p == AffineParams::default() {
        return Ok(img.clone());
    }
    let map = p.inverse_map(img.width(), img.height());
    let ch = img.channels();
    let mut out = Vec::with_capacity(img.data().len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let (sx, sy) = map(x as f64, y as f64);
            for c in 0..ch {
                out.push(img.sample_bilinear(sx, sy, c));
            }
        }
    }
    Ok(Image::from_raw(img.width(), img.height(), ch, out))
}
