use crate::error::{Error, Result};
use crate::imaging::{gaussian_kernel, Image};
use crate::scalar::Real;

/// PSNR reported for identical images.
pub const PSNR_CAP: f64 = 100.0;
pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;

/// `10 log10(peak² / MSE)` over every sample; `+∞` for identical images.
pub fn psnr<T: Real>(a: &Image<T>, b: &Image<T>, peak: f64) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let n = a.data().len() as f64;
    let mse = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = x.as_f64() - y.as_f64();
            d * d
        })
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

/// Valid-mode separable filtering of a row-major `w × h` plane.
fn filter_valid(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let n = k.len();
    let (ow, oh) = (w - n + 1, h - n + 1);
    let mut tmp = vec![0.0; ow * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            tmp[y * ow + x] = k.iter().zip(&row[x..x + n]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = k.iter().enumerate().map(|(i, a)| a * tmp[(y + i) * ow + x]).sum();
        }
    }
    out
}

/// Single-scale SSIM with an 11×11 Gaussian window (σ = 1.5),
/// `C1 = (0.01·peak)²`, `C2 = (0.03·peak)²`, averaged over valid window
/// positions. RGB input is reduced to BT.601 luma first.
pub fn ssim<T: Real>(a: &Image<T>, b: &Image<T>, peak: f64) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::invalid(format!("SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {w}x{h}")));
    }
    let la: Vec<f64> = a.luma().data().iter().map(|v| v.as_f64()).collect();
    let lb: Vec<f64> = b.luma().data().iter().map(|v| v.as_f64()).collect();
    let k = gaussian_kernel(SSIM_SIGMA);
    // gaussian_kernel truncates at ceil(3σ) = 5, i.e. 11 taps
    debug_assert_eq!(k.len(), SSIM_WINDOW);
    let aa: Vec<f64> = la.iter().map(|x| x * x).collect();
    let bb: Vec<f64> = lb.iter().map(|x| x * x).collect();
    let ab: Vec<f64> = la.iter().zip(&lb).map(|(x, y)| x * y).collect();
    let mu_a = filter_valid(&la, w, h, &k);
    let mu_b = filter_valid(&lb, w, h, &k);
    let e_aa = filter_valid(&aa, w, h, &k);
    let e_bb = filter_valid(&bb, w, h, &k);
    let e_ab = filter_valid(&ab, w, h, &k);
    let c1 = (0.01 * peak).powi(2);
    let c2 = (0.03 * peak).powi(2);
    let total: f64 = (0..mu_a.len())
        .map(|i| {
            let (ma, mb) = (mu_a[i], mu_b[i]);
            let va = e_aa[i] - ma * ma;
            let vb = e_bb[i] - mb * mb;
            let cov = e_ab[i] - ma * mb;
            ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2))
        })
        .sum();
    Ok(total / mu_a.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pattern(seed: u64) -> Image<f64> {
        Image::from_fn(24, 19, 3, move |x, y, c| {
            (((x as u64 * 37 + y as u64 * 53 + c as u64 * 11 + seed * 7919) % 97) as f64) / 96.0
        })
    }

    #[test]
    fn psnr_closed_form() {
        let a = Image::<f64>::filled(16, 16, 3, 0.3);
        let b = Image::<f64>::filled(16, 16, 3, 0.4);
        assert!((psnr(&a, &b, 1.0).unwrap() - 20.0).abs() < 1e-9);
        assert_eq!(psnr(&a, &a, 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_matches_direct_loop() {
        let (a, b) = (pattern(1), pattern(2));
        let mut acc = 0.0;
        for y in 0..19 {
            for x in 0..24 {
                for c in 0..3 {
                    acc += (a.get(x, y, c) - b.get(x, y, c)).powi(2);
                }
            }
        }
        let want = 10.0 * (1.0 / (acc / (24.0 * 19.0 * 3.0))).log10();
        assert!((psnr(&a, &b, 1.0).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn ssim_identity_symmetry_and_checkerboard() {
        let (a, b) = (pattern(3), pattern(4));
        assert_eq!(ssim(&a, &a, 1.0).unwrap(), 1.0);
        assert!((ssim(&a, &b, 1.0).unwrap() - ssim(&b, &a, 1.0).unwrap()).abs() < 1e-12);
        let cb = Image::<f64>::from_fn(16, 16, 1, |x, y, _| ((x + y) % 2) as f64);
        let inv = cb.map(|v| 1.0 - v);
        assert!(ssim(&cb, &inv, 1.0).unwrap() < 0.0);
        assert!(ssim(&Image::<f64>::zeros(10, 20, 1), &Image::zeros(10, 20, 1), 1.0).is_err());
    }

    #[test]
    fn ssim_matches_direct_window_formula() {
        let a = Image::<f64>::from_fn(12, 11, 1, |x, y, _| ((x * 7 + y * 3) % 10) as f64 / 9.0);
        let b = Image::<f64>::from_fn(12, 11, 1, |x, y, _| ((x * 5 + y * 2) % 8) as f64 / 7.0);
        let k = gaussian_kernel(1.5);
        let mut total = 0.0;
        for ox in 0..2 {
            let (mut ma, mut mb, mut eaa, mut ebb, mut eab) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for j in 0..11 {
                for i in 0..11 {
                    let wgt = k[i] * k[j];
                    let (p, q) = (a.get(ox + i, j, 0), b.get(ox + i, j, 0));
                    ma += wgt * p;
                    mb += wgt * q;
                    eaa += wgt * p * p;
                    ebb += wgt * q * q;
                    eab += wgt * p * q;
                }
            }
            let (c1, c2) = (1e-4, 9e-4);
            total += ((2.0 * ma * mb + c1) * (2.0 * (eab - ma * mb) + c2))
                / ((ma * ma + mb * mb + c1) * (eaa - ma * ma + ebb - mb * mb + c2));
        }
        assert!((ssim(&a, &b, 1.0).unwrap() - total / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ssim_continuity() {
        let a = pattern(5).map(|v| v * 0.9);
        for eps in [1e-3, 1e-4] {
            let s = ssim(&a, &a.map(|v| v + eps), 1.0).unwrap();
            assert!(1.0 - s < 10.0 * eps, "{eps} {s}");
        }
    }

    proptest! {
        #[test]
        fn psnr_monotone_in_noise(a1 in 0.001f64..0.2, d in 0.001f64..0.2) {
            let base = pattern(6).map(|v| v * 0.5 + 0.25);
            let noise = pattern(9).map(|v| 2.0 * v - 1.0);
            let with = |amp: f64| base.zip_map(&noise, |x, n| x + amp * n).unwrap();
            let p1 = psnr(&base, &with(a1), 1.0).unwrap();
            let p2 = psnr(&base, &with(a1 + d), 1.0).unwrap();
            prop_assert!(p2 < p1);
        }
    }
}
