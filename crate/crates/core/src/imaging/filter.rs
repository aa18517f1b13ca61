use super::Image;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Normalised 1-D Gaussian taps truncated at `±ceil(3σ)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let two_s2 = 2.0 * sigma * sigma;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / two_s2).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Separable Gaussian blur with clamp-to-edge addressing.
pub fn gaussian_blur<T: Real>(img: &Image<T>, sigma: f64) -> Result<Image<T>> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(format!("blur sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let kernel: Vec<T> = gaussian_kernel(sigma).into_iter().map(T::lit).collect();
    let r = (kernel.len() / 2) as i64;
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let src = img.data();

    let mut tmp = vec![T::zero(); src.len()];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut acc = T::zero();
                for (k, &wk) in kernel.iter().enumerate() {
                    let xx = (x as i64 + k as i64 - r).clamp(0, w as i64 - 1) as usize;
                    acc = acc + wk * src[(y * w + xx) * ch + c];
                }
                tmp[(y * w + x) * ch + c] = acc;
            }
        }
    }
    let mut out = vec![T::zero(); src.len()];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut acc = T::zero();
                for (k, &wk) in kernel.iter().enumerate() {
                    let yy = (y as i64 + k as i64 - r).clamp(0, h as i64 - 1) as usize;
                    acc = acc + wk * tmp[(yy * w + x) * ch + c];
                }
                out[(y * w + x) * ch + c] = acc;
            }
        }
    }
    Ok(Image::from_raw(w, h, ch, out))
}

/// Screen blend `1 - (1-a)(1-b)`.
///
/// Evaluated as `hi + lo·(1 - hi)` on the ordered pair, which makes the
/// identity (`b = 0`), absorbing (`a = 1`) and commutative laws exact.
pub fn screen_blend<T: Real>(a: &Image<T>, b: &Image<T>) -> Result<Image<T>> {
    a.zip_map(b, screen)
}

#[inline]
pub fn screen<T: Real>(a: T, b: T) -> T {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    hi + lo * (T::one() - hi)
}

/// Zoom-style radial blur: each output pixel averages the input along the
/// segment from itself toward `center`, covering `amount` times its distance
/// to the centre (`amount` is clamped to 1). Samples are bilinear with
/// clamp-to-edge addressing and spaced at most one pixel apart.
pub fn radial_blur<T: Real>(img: &Image<T>, center: [f64; 2], amount: f64) -> Result<Image<T>> {
    if !(amount >= 0.0) || !amount.is_finite() {
        return Err(Error::invalid(format!("radial blur amount must be >= 0, got {amount}")));
    }
    if amount == 0.0 {
        return Ok(img.clone());
    }
    let a = amount.min(1.0);
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let mut out = vec![T::zero(); w * h * ch];
    let mut acc = vec![T::zero(); ch];
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - center[0];
            let dy = y as f64 - center[1];
            let path = a * dx.hypot(dy);
            let n = path.ceil() as usize + 1;
            acc.iter_mut().for_each(|v| *v = T::zero());
            for k in 0..n {
                let s = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                let f = 1.0 - a * s;
                let sx = center[0] + dx * f;
                let sy = center[1] + dy * f;
                for (c, v) in acc.iter_mut().enumerate() {
                    *v = *v + img.sample_bilinear_clamped(sx, sy, c);
                }
            }
            let inv = T::one() / T::lit(n as f64);
            for c in 0..ch {
                out[(y * w + x) * ch + c] = acc[c] * inv;
            }
        }
    }
    Ok(Image::from_raw(w, h, ch, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn impulse(w: usize, h: usize, x: usize, y: usize) -> Image<f64> {
        Image::from_fn(w, h, 1, |xx, yy, _| if xx == x && yy == y { 1.0 } else { 0.0 })
    }

    #[test]
    fn blur_identity_and_errors() {
        let img = Image::<f32>::from_fn(9, 7, 3, |x, y, c| ((x * 7 + y * 3 + c) % 5) as f32 / 5.0);
        assert_eq!(gaussian_blur(&img, 0.0).unwrap(), img);
        assert!(gaussian_blur(&img, -1.0).is_err());
    }

    #[test]
    fn blur_preserves_constants() {
        let img = Image::<f32>::filled(23, 17, 3, 0.37);
        let out = gaussian_blur(&img, 2.7).unwrap();
        for v in out.data() {
            assert!((v - 0.37).abs() < 1e-6);
        }
    }

    #[test]
    fn blur_impulse_matches_dense_gaussian() {
        let sigma = 2.0;
        let img = impulse(41, 41, 20, 20);
        let out = gaussian_blur(&img, sigma).unwrap();
        // Dense 2-D oracle: exp(-(dx²+dy²)/2σ²) over the truncated support, normalised.
        let r = 6i64;
        let mut norm = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                norm += (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
            }
        }
        for y in 0..41i64 {
            for x in 0..41i64 {
                let (dx, dy) = (x - 20, y - 20);
                let expect = if dx.abs() <= r && dy.abs() <= r {
                    (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp() / norm
                } else {
                    0.0
                };
                assert!((out.get(x as usize, y as usize, 0) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn screen_algebra() {
        let a = Image::<f32>::from_fn(8, 8, 3, |x, y, c| ((x * 13 + y * 7 + c * 3) % 11) as f32 / 10.0);
        let b = Image::<f32>::from_fn(8, 8, 3, |x, y, c| ((x * 5 + y * 11 + c) % 9) as f32 / 8.0);
        let zero = Image::<f32>::zeros(8, 8, 3);
        let one = Image::<f32>::filled(8, 8, 3, 1.0);
        assert_eq!(screen_blend(&a, &zero).unwrap(), a);
        assert_eq!(screen_blend(&one, &b).unwrap(), one);
        assert_eq!(screen_blend(&a, &b).unwrap(), screen_blend(&b, &a).unwrap());
        assert!(screen_blend(&a, &Image::zeros(8, 7, 3)).is_err());
    }

    proptest! {
        #[test]
        fn screen_dominates_and_associates(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0) {
            let ab = screen(a, b);
            prop_assert!(ab >= a.max(b));
            prop_assert!(ab <= 1.0);
            prop_assert!((screen(ab, c) - screen(a, screen(b, c))).abs() < 1e-6);
            prop_assert!(screen(a.min(b), c) <= screen(a.max(b), c));
        }

        #[test]
        fn blur_never_negative(seed in 0u64..1000, sigma in 0.1f64..3.0) {
            let img = Image::<f64>::from_fn(12, 10, 1, |x, y, _| ((seed as usize + x * 31 + y * 17) % 13) as f64 / 12.0);
            let out = gaussian_blur(&img, sigma).unwrap();
            prop_assert!(out.min_value() >= 0.0);
        }
    }

    #[test]
    fn radial_identity_and_dc() {
        let img = Image::<f32>::from_fn(20, 16, 3, |x, y, c| ((x + 2 * y + c) % 7) as f32 / 7.0);
        assert_eq!(radial_blur(&img, [5.0, 5.0], 0.0).unwrap(), img);
        let flat = Image::<f32>::filled(32, 24, 1, 0.8);
        let out = radial_blur(&flat, [40.0, -3.0], 0.6).unwrap();
        for v in out.data() {
            assert!((v - 0.8).abs() < 1e-6);
        }
        assert!(radial_blur(&img, [0.0, 0.0], -0.1).is_err());
    }

    #[test]
    fn radial_impulse_stays_on_ray() {
        let (cx, cy) = (32.0, 32.0);
        let img = impulse(64, 64, 52, 44);
        let out = radial_blur(&img, [cx, cy], 0.5).unwrap();
        let (dx, dy) = (52.0 - cx, 44.0 - cy);
        let len = f64::hypot(dx, dy);
        let (ux, uy) = (dx / len, dy / len);
        let total = out.sum();
        assert!(total > 0.0);
        let mut off_ray = 0.0;
        for y in 0..64 {
            for x in 0..64 {
                let (px, py) = (x as f64 - cx, y as f64 - cy);
                // perpendicular distance from the centre ray
                let perp = (px * uy - py * ux).abs();
                if perp > 1.5 {
                    off_ray += out.get(x, y, 0);
                }
            }
        }
        assert!(off_ray < 0.01 * total, "off-ray fraction {}", off_ray / total);
    }

    #[test]
    fn radial_rotation_invariance_of_symmetric_input() {
        let c = [31.5, 31.5];
        let ring = |x: f64, y: f64| {
            let r = (x - c[0]).hypot(y - c[1]);
            (-(r - 14.0).powi(2) / 18.0).exp()
        };
        let img = Image::<f64>::from_fn(64, 64, 1, |x, y, _| ring(x as f64, y as f64));
        let out = radial_blur(&img, c, 0.4).unwrap();
        // Compare points on the same circle.
        let probe = |ang: f64, r: f64| out.sample_bilinear(c[0] + r * ang.cos(), c[1] + r * ang.sin(), 0);
        for r in [8.0, 14.0, 20.0] {
            let base = probe(0.3, r);
            for k in 1..8 {
                let v = probe(0.3 + k as f64 * std::f64::consts::PI / 4.0, r);
                assert!((v - base).abs() < 0.02, "r={r} k={k}: {v} vs {base}");
            }
        }
    }
}
