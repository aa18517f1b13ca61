use crate::error::{Error, Result};
use crate::imaging::{screen_blend, Image};
use crate::scalar::Real;

/// Layered scattering flare. All layers are RGB on the same canvas.
#[derive(Clone, Debug, PartialEq)]
pub struct FlareTemplate<T> {
    pub glare: Image<T>,
    pub streak: Image<T>,
    pub shimmer: Image<T>,
    pub source: Image<T>,
    /// `screen(clip01(glare + streak + shimmer), source)`.
    pub composite: Image<T>,
    pub light_pos: [f64; 2],
}

impl<T: Real> FlareTemplate<T> {
    pub fn width(&self) -> usize {
        self.composite.width()
    }

    pub fn height(&self) -> usize {
        self.composite.height()
    }

    /// `clip01(glare + streak + shimmer)`, the flare before the source.
    pub fn flare_sum(&self) -> Image<T> {
        sum_clip(&[&self.glare, &self.streak, &self.shimmer])
    }

    /// The "glare with shimmer" annotation layer.
    pub fn glare_with_shimmer(&self) -> Image<T> {
        sum_clip(&[&self.glare, &self.shimmer])
    }
}

fn sum_clip<T: Real>(layers: &[&Image<T>]) -> Image<T> {
    let mut acc = layers[0].clone();
    for l in &layers[1..] {
        acc = acc.zip_map(l, |a, b| a + b).expect("layers share a canvas");
    }
    acc.clip01()
}

/// Assembles the template. Fails on canvas mismatch, negative layers, or a
/// glare pixel at full exposure that the source does not cover.
pub fn compose_template<T: Real>(
    glare: Image<T>,
    streak: Image<T>,
    shimmer: Image<T>,
    source: Image<T>,
    light_pos: [f64; 2],
) -> Result<FlareTemplate<T>> {
    for (name, l) in [("glare", &glare), ("streak", &streak), ("shimmer", &shimmer), ("source", &source)] {
        if l.channels() != 3 {
            return Err(Error::ShapeMismatch(format!("{name} layer must be RGB")));
        }
        l.ensure_same_shape(&glare)?;
        if l.min_value() < T::zero() {
            return Err(Error::invalid(format!("{name} layer has negative samples")));
        }
    }
    let w = glare.width();
    for (i, px) in glare.data().chunks_exact(3).enumerate() {
        if px.iter().any(|&v| v >= T::one()) && source.pixel(i % w, i / w).iter().any(|&v| v < T::one()) {
            return Err(Error::invalid(format!(
                "overexposed glare at ({}, {}) lies outside the light source",
                i % w,
                i / w
            )));
        }
    }
    let flare = sum_clip(&[&glare, &streak, &shimmer]);
    let composite = screen_blend(&flare, &source)?;
    Ok(FlareTemplate {
        glare,
        streak,
        shimmer,
        source,
        composite,
        light_pos,
    })
}
