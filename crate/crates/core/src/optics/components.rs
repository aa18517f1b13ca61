use serde::{Deserialize, Serialize};

use super::field::{centered_dft2, ComplexField, PsfImage, PsfNormalization};
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

pub const DEFAULT_EXCLUSION_RADIUS: f64 = 5.0;

/// Relative L2 errors against the exact PSF of the combined aperture, split
/// at a central exclusion disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub exclusion_radius: f64,
    pub inside_error: f64,
    pub outside_error: f64,
    /// Same errors for `|F{A_a}|²` alone.
    pub baseline_inside_error: f64,
    pub baseline_outside_error: f64,
}

fn split_rel_l2<T: Real>(approx: &Image<T>, exact: &Image<T>, radius: f64) -> (f64, f64) {
    let n = exact.width();
    let c = (n / 2) as f64;
    let (mut ei, mut ni, mut eo, mut no) = (0.0, 0.0, 0.0, 0.0);
    for y in 0..n {
        for x in 0..n {
            let (dx, dy) = (x as f64 - c, y as f64 - c);
            let a = approx.get(x, y, 0).as_f64();
            let b = exact.get(x, y, 0).as_f64();
            let d = (a - b) * (a - b);
            if dx * dx + dy * dy <= radius * radius {
                ei += d;
                ni += b * b;
            } else {
                eo += d;
                no += b * b;
            }
        }
    }
    let rel = |e: f64, n: f64| if n > 0.0 { (e / n).sqrt() } else if e > 0.0 { f64::INFINITY } else { 0.0 };
    (rel(ei, ni), rel(eo, no))
}

/// Sum-of-components approximation `|F{A_a} + Σ F{Ã_i}|²`.
///
/// Each component mask is a dirt transmission (1 = clear); its contribution is
/// the field it removes from the pupil, `A_a·(Ã_i − 1)`, so a component that
/// is clear over the pupil adds nothing. The exact reference is
/// `|F{A_a · Π Ã_i}|²`. Both use the centred unitary transform.
pub fn component_sum_psf<T: Real>(
    components: &[Image<T>],
    base: &Image<T>,
    exclusion_radius: f64,
) -> Result<(PsfImage<T>, ApproximationReport)> {
    let n = base.width();
    if base.channels() != 1 || base.height() != n || !n.is_power_of_two() {
        return Err(Error::ShapeMismatch("base mask must be a square power-of-two 1-channel image".into()));
    }
    for (i, c) in components.iter().enumerate() {
        if !c.same_shape(base) {
            return Err(Error::ShapeMismatch(format!(
                "component {i} is {}x{}x{}, base is {n}x{n}x1",
                c.width(),
                c.height(),
                c.channels()
            )));
        }
    }
    if !(exclusion_radius >= 0.0) {
        return Err(Error::invalid("exclusion radius must be non-negative"));
    }

    let base_f = centered_dft2(&ComplexField::from_real(base, 1.0)?);
    let mut sum = base_f.clone();
    let mut combined = base.clone();
    for c in components {
        let deviation = base.zip_map(c, |b, m| b * (m - T::one()))?;
        sum = sum.add(&centered_dft2(&ComplexField::from_real(&deviation, 1.0)?))?;
        combined = combined.zip_map(c, |b, m| b * m)?;
    }
    let exact = centered_dft2(&ComplexField::from_real(&combined, 1.0)?).intensity();
    let approx = sum.intensity();
    let baseline = base_f.intensity();

    let (inside_error, outside_error) = split_rel_l2(&approx, &exact, exclusion_radius);
    let (baseline_inside_error, baseline_outside_error) = split_rel_l2(&baseline, &exact, exclusion_radius);
    Ok((
        PsfImage {
            image: approx,
            normalization: PsfNormalization::EnergyPreserving,
        },
        ApproximationReport {
            exclusion_radius,
            inside_error,
            outside_error,
            baseline_inside_error,
            baseline_outside_error,
        },
    ))
}
