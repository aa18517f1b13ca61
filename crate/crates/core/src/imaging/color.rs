use super::Image;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_unit<T: Real>(img: &Image<T>) -> Result<()> {
    for (i, &v) in img.data().iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if v < T::zero() || v > T::one() {
            return Err(Error::OutOfRange(format!("sample {i} = {v} outside [0, 1]")));
        }
    }
    Ok(())
}

#[inline]
pub fn srgb_to_linear_scalar(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

#[inline]
pub fn linear_to_srgb_scalar(l: f64) -> f64 {
    if l <= 0.003_130_8 {
        l * 12.92
    } else {
        1.055 * l.powf(1.0 / 2.4) - 0.055
    }
}

/// Standard sRGB decoding, sample by sample.
pub fn srgb_to_linear<T: Real>(img: &Image<T>) -> Result<Image<T>> {
    check_unit(img)?;
    Ok(img.map(|v| T::lit(srgb_to_linear_scalar(v.as_f64()))))
}

pub fn linear_to_srgb<T: Real>(img: &Image<T>) -> Result<Image<T>> {
    check_unit(img)?;
    Ok(img.map(|v| T::lit(linear_to_srgb_scalar(v.as_f64()))))
}

/// Raises every sample to `gamma`. Pass `1/γ` to re-encode.
pub fn apply_gamma<T: Real>(img: &Image<T>, gamma: f64) -> Result<Image<T>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
    }
    if let Some(i) = img.data().iter().position(|&v| v < T::zero()) {
        return Err(Error::OutOfRange(format!("negative sample at index {i}")));
    }
    if gamma == 1.0 {
        return Ok(img.clone());
    }
    let g = T::lit(gamma);
    Ok(img.map(|v| v.powf(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_fixed_points() {
        let img = Image::<f64>::new(2, 1, 1, vec![0.0, 1.0]).unwrap();
        let lin = srgb_to_linear(&img).unwrap();
        assert_eq!(lin.data(), &[0.0, 1.0]);
        let back = linear_to_srgb(&img).unwrap();
        assert!((back.data()[1] - 1.0).abs() < 1e-15);
        assert_eq!(back.data()[0], 0.0);
    }

    #[test]
    fn transfer_round_trip() {
        for f in [false, true] {
            let vals: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
            if f {
                let img = Image::<f32>::new(9, 1, 1, vals.iter().map(|&v| v as f32).collect()).unwrap();
                let rt = linear_to_srgb(&srgb_to_linear(&img).unwrap()).unwrap();
                for (a, b) in rt.data().iter().zip(img.data()) {
                    assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
                }
            } else {
                let img = Image::<f64>::new(9, 1, 1, vals).unwrap();
                let rt = linear_to_srgb(&srgb_to_linear(&img).unwrap()).unwrap();
                for (a, b) in rt.data().iter().zip(img.data()) {
                    assert!((a - b).abs() <= 1e-6);
                }
            }
        }
    }

    #[test]
    fn half_decodes_to_reference_value() {
        // ((0.5 + 0.055) / 1.055)^2.4 evaluated independently.
        let expected = (0.555f64 / 1.055).ln().mul_add(2.4, 0.0).exp();
        let img = Image::<f64>::new(1, 1, 1, vec![0.5]).unwrap();
        let got = srgb_to_linear(&img).unwrap().data()[0];
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 0.214_041_140_5).abs() < 1e-9);
    }

    #[test]
    fn transfer_rejects_out_of_range() {
        let img = Image::<f64>::new(1, 1, 1, vec![1.5]).unwrap();
        assert!(matches!(srgb_to_linear(&img), Err(Error::OutOfRange(_))));
        let img = Image::<f64>::new(1, 1, 1, vec![-0.1]).unwrap();
        assert!(matches!(linear_to_srgb(&img), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn gamma_cases() {
        let ramp = Image::<f64>::from_fn(16, 4, 3, |x, y, c| (x + y + c) as f64 / 24.0);
        assert_eq!(apply_gamma(&ramp, 1.0).unwrap(), ramp);
        let q = Image::<f64>::new(1, 1, 1, vec![0.25]).unwrap();
        assert_eq!(apply_gamma(&q, 0.5).unwrap().data()[0], 0.5);
        let g = apply_gamma(&ramp, 2.2).unwrap();
        for (o, i) in g.data().iter().zip(ramp.data()) {
            assert_eq!(*o, i.powf(2.2));
        }
        assert!(apply_gamma(&ramp, 0.0).is_err());
        assert!(apply_gamma(&ramp, -1.0).is_err());
    }
}
