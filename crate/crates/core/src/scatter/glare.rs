use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::check_light;
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

/// Colour as a function of normalised distance to the light source.
///
/// Stored as `[d, r, g, b]` rows with `d` strictly increasing from 0 to 1;
/// evaluated by linear interpolation and zero from `d = 1` on.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GlareCurve {
    points: Vec<[f64; 4]>,
}

impl GlareCurve {
    pub fn new(points: Vec<[f64; 4]>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("glare curve needs at least two points"));
        }
        if points[0][0] != 0.0 || points[points.len() - 1][0] != 1.0 {
            return Err(Error::invalid("glare curve must start at d = 0 and end at d = 1"));
        }
        if points.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::invalid("glare curve distances must be strictly increasing"));
        }
        if points.iter().flat_map(|p| &p[1..]).any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("glare curve colours must lie in [0, 1]"));
        }
        if points[points.len() - 1][1..].iter().any(|&v| v != 0.0) {
            return Err(Error::invalid("glare curve must vanish at d = 1"));
        }
        Ok(GlareCurve { points })
    }

    pub fn points(&self) -> &[[f64; 4]] {
        &self.points
    }

    pub fn eval(&self, d: f64) -> [f64; 3] {
        if !(d < 1.0) {
            return [0.0; 3];
        }
        let d = d.max(0.0);
        let i = self.points.partition_point(|p| p[0] <= d).max(1) - 1;
        let (a, b) = (self.points[i], self.points[i + 1]);
        let t = (d - a[0]) / (b[0] - a[0]);
        [
            a[1] + (b[1] - a[1]) * t,
            a[2] + (b[2] - a[2]) * t,
            a[3] + (b[3] - a[3]) * t,
        ]
    }

    /// Largest channel value anywhere on the curve.
    pub fn max_value(&self) -> f64 {
        self.points.iter().flat_map(|p| p[1..].iter().copied()).fold(0.0, f64::max)
    }

    /// The same curve with every colour multiplied by `k`, clipped to 1.
    pub fn scaled(&self, k: f64) -> GlareCurve {
        GlareCurve {
            points: self
                .points
                .iter()
                .map(|p| [p[0], (p[1] * k).min(1.0), (p[2] * k).min(1.0), (p[3] * k).min(1.0)])
                .collect(),
        }
    }
}

impl<'de> Deserialize<'de> for GlareCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GlareCurve::new(Vec::<[f64; 4]>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Dimmed wedges of glare around the streak axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanishingCorner {
    /// Full wedge angle on the forward side of the axis, radians.
    #[serde(default)]
    pub angle: f64,
    /// Backward-side angle; defaults to `angle`.
    #[serde(default)]
    pub angle_back: Option<f64>,
    /// Width of the cosine ramp at the wedge border.
    #[serde(default)]
    pub feather: f64,
    /// Opacity removed at the wedge centre, in `[0, 1]`.
    #[serde(default = "one")]
    pub depth: f64,
    /// Streak axis; set from the streak layer when one exists.
    #[serde(skip)]
    pub orientation: f64,
}

fn one() -> f64 {
    1.0
}

impl VanishingCorner {
    pub fn validate(&self) -> Result<()> {
        let back = self.angle_back.unwrap_or(self.angle);
        for a in [self.angle, back] {
            if !(0.0..PI).contains(&a) {
                return Err(Error::invalid(format!("vanishing angle must lie in [0, π), got {a}")));
            }
        }
        if !(self.feather >= 0.0) {
            return Err(Error::invalid("vanishing feather must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.depth) {
            return Err(Error::invalid("vanishing depth must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Opacity factor for a pixel in direction `phi` from the light.
    pub fn mask(&self, phi: f64) -> f64 {
        let fwd = wedge(angular_distance(phi, self.orientation), self.angle, self.feather);
        let back = wedge(
            angular_distance(phi, self.orientation + PI),
            self.angle_back.unwrap_or(self.angle),
            self.feather,
        );
        1.0 - self.depth * (1.0 - fwd.min(back))
    }
}

/// `|phi - axis|` wrapped to `[0, π]`.
pub(crate) fn angular_distance(phi: f64, axis: f64) -> f64 {
    let d = (phi - axis).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// 0 inside the wedge core, cosine ramp over the last `feather` radians of
/// the half-width, 1 outside.
fn wedge(delta: f64, angle: f64, feather: f64) -> f64 {
    if angle <= 0.0 {
        return 1.0;
    }
    let half = angle / 2.0;
    let f = feather.min(half);
    let inner = half - f;
    if delta >= half {
        1.0
    } else if delta <= inner {
        0.0
    } else {
        0.5 * (1.0 - (PI * (delta - inner) / f).cos())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlareSpec {
    /// Pixels.
    pub radius: f64,
    pub curve: GlareCurve,
    #[serde(default)]
    pub vanishing: VanishingCorner,
}

impl GlareSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::invalid(format!("glare radius must be positive, got {}", self.radius)));
        }
        self.vanishing.validate()
    }
}

/// Radial glare: the curve applied to a round gradient, then the vanishing
/// corner.
pub fn build_glare<T: Real>(spec: &GlareSpec, width: usize, height: usize, light: [f64; 2]) -> Result<Image<T>> {
    spec.validate()?;
    check_light(width, height, light)?;
    let mut img = Image::zeros(width, height, 3);
    let r = spec.radius;
    let x0 = (light[0] - r).floor().max(0.0) as usize;
    let x1 = ((light[0] + r).ceil() as usize).min(width - 1);
    let y0 = (light[1] - r).floor().max(0.0) as usize;
    let y1 = ((light[1] + r).ceil() as usize).min(height - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let (dx, dy) = (x as f64 - light[0], y as f64 - light[1]);
            let d = dx.hypot(dy) / r;
            if d >= 1.0 {
                continue;
            }
            let rgb = spec.curve.eval(d);
            for c in 0..3 {
                img.set(x, y, c, T::lit(rgb[c]));
            }
        }
    }
    Ok(apply_vanishing_corner(&img, &spec.vanishing, light))
}

/// Multiplies every pixel by the wedge mask of its direction from `light`.
/// The pixel at the light position itself is left alone.
pub fn apply_vanishing_corner<T: Real>(img: &Image<T>, corner: &VanishingCorner, light: [f64; 2]) -> Image<T> {
    let back = corner.angle_back.unwrap_or(corner.angle);
    if (corner.angle == 0.0 && back == 0.0) || corner.depth == 0.0 {
        return img.clone();
    }
    let mut out = img.clone();
    let ch = img.channels();
    for y in 0..img.height() {
        for x in 0..img.width() {
            let (dx, dy) = (x as f64 - light[0], y as f64 - light[1]);
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let m = T::lit(corner.mask(dy.atan2(dx)));
            for c in 0..ch {
                let v = out.get(x, y, c);
                if v != T::zero() {
                    out.set(x, y, c, v * m);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn white() -> GlareCurve {
        GlareCurve::new(vec![[0.0, 0.8, 0.8, 0.8], [0.999, 0.8, 0.8, 0.8], [1.0, 0.0, 0.0, 0.0]]).unwrap()
    }

    fn falling() -> GlareCurve {
        GlareCurve::new(vec![[0.0, 0.9, 0.8, 0.6], [0.3, 0.5, 0.4, 0.2], [1.0, 0.0, 0.0, 0.0]]).unwrap()
    }

    #[test]
    fn curve_validation() {
        assert!(GlareCurve::new(vec![[0.0, 1.0, 1.0, 1.0]]).is_err());
        assert!(GlareCurve::new(vec![[0.1, 1.0, 1.0, 1.0], [1.0, 0.0, 0.0, 0.0]]).is_err());
        assert!(GlareCurve::new(vec![[0.0, 1.0, 1.0, 1.0], [1.0, 0.1, 0.0, 0.0]]).is_err());
        assert!(GlareCurve::new(vec![[0.0, 1.5, 1.0, 1.0], [1.0, 0.0, 0.0, 0.0]]).is_err());
        let c = falling();
        assert_eq!(c.eval(0.0), [0.9, 0.8, 0.6]);
        assert_eq!(c.eval(1.0), [0.0; 3]);
        let mid = c.eval(0.15);
        assert!((mid[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn symmetric_without_corner() {
        let spec = GlareSpec {
            radius: 20.0,
            curve: white(),
            vanishing: VanishingCorner::default(),
        };
        let img: Image<f64> = build_glare(&spec, 64, 64, [32.0, 32.0]).unwrap();
        // 8 symmetric images of each lattice offset share one radius
        for (dx, dy) in [(3i64, 4i64), (7, 2), (12, 15)] {
            let want = img.get((32 + dx) as usize, (32 + dy) as usize, 0);
            for (sx, sy) in [(dx, dy), (-dx, dy), (dx, -dy), (-dx, -dy), (dy, dx), (-dy, -dx)] {
                let v = img.get((32 + sx) as usize, (32 + sy) as usize, 0);
                assert!((v - want).abs() < 1e-6);
            }
        }
        assert_eq!(img.get(32, 32, 0), 0.8);
        assert_eq!(img.get(32 + 20, 32, 0), 0.0);
    }

    #[test]
    fn light_must_be_inside() {
        let spec = GlareSpec {
            radius: 5.0,
            curve: white(),
            vanishing: VanishingCorner::default(),
        };
        assert!(build_glare::<f32>(&spec, 16, 16, [16.5, 3.0]).is_err());
    }

    #[test]
    fn monotone_curve_gives_monotone_rays() {
        let spec = GlareSpec {
            radius: 30.0,
            curve: falling(),
            vanishing: VanishingCorner::default(),
        };
        let img: Image<f64> = build_glare(&spec, 80, 80, [40.0, 40.0]).unwrap();
        for k in 0..16 {
            let a = k as f64 * PI / 8.0;
            let mut prev = f64::INFINITY;
            for s in 0..40 {
                let v = img.sample_bilinear(40.0 + s as f64 * a.cos(), 40.0 + s as f64 * a.sin(), 1);
                // bilinear mixing of a monotone radial field can wobble by rounding only
                assert!(v <= prev + 1e-9);
                prev = v;
            }
        }
    }

    #[test]
    fn right_angle_hard_wedge() {
        let corner = VanishingCorner {
            angle: PI / 2.0,
            angle_back: None,
            feather: 0.0,
            depth: 1.0,
            orientation: 0.3,
        };
        let img = Image::<f64>::filled(41, 41, 3, 0.5);
        let out = apply_vanishing_corner(&img, &corner, [20.0, 20.0]);
        for s in [5.0, 12.0, 18.0] {
            let (ax, ay) = (20.0 + s * 0.3f64.cos(), 20.0 + s * 0.3f64.sin());
            assert!(out.sample_bilinear(ax, ay, 0) < 0.05);
            let (bx, by) = (20.0 - s * 0.3f64.cos(), 20.0 - s * 0.3f64.sin());
            assert!(out.sample_bilinear(bx, by, 0) < 0.05);
            let p = 0.3 + PI / 2.0;
            let (px, py) = (20.0 + s * p.cos(), 20.0 + s * p.sin());
            assert!((out.sample_bilinear(px, py, 0) - 0.5).abs() < 1e-9);
        }
        assert_eq!(out.get(20, 20, 0), 0.5);
    }

    #[test]
    fn zero_angle_is_identity() {
        let img = Image::<f32>::from_fn(9, 9, 3, |x, y, c| (x + y + c) as f32 / 30.0);
        let out = apply_vanishing_corner(&img, &VanishingCorner::default(), [4.0, 4.0]);
        assert_eq!(out, img);
    }

    fn closed_form(phi: f64, axis: f64, theta: f64, feather: f64) -> f64 {
        // independent evaluation: distance to the nearer axis direction
        let mut best = f64::MAX;
        for k in -3..=3 {
            for base in [axis, axis + PI] {
                best = best.min((phi - base - 2.0 * PI * k as f64).abs());
            }
        }
        let h = theta / 2.0;
        let f = feather.min(h);
        if best >= h {
            1.0
        } else if best <= h - f {
            0.0
        } else {
            (1.0 - (PI * (best - (h - f)) / f).cos()) / 2.0
        }
    }

    proptest! {
        #[test]
        fn mask_matches_closed_form(phi in -7.0f64..7.0, axis in -3.0f64..3.0, theta in 0.01f64..3.0, feather in 0.0f64..1.0) {
            let c = VanishingCorner { angle: theta, angle_back: None, feather, depth: 1.0, orientation: axis };
            prop_assert!((c.mask(phi) - closed_form(phi, axis, theta, feather)).abs() < 1e-9);
        }

        #[test]
        fn mask_in_unit_interval(phi in -7.0f64..7.0, theta in 0.0f64..3.1, back in 0.0f64..3.1, depth in 0.0f64..1.0) {
            let c = VanishingCorner { angle: theta, angle_back: Some(back), feather: 0.2, depth, orientation: 1.0 };
            let m = c.mask(phi);
            prop_assert!((0.0..=1.0).contains(&m));
            prop_assert!(m >= 1.0 - depth - 1e-12);
        }
    }
}
