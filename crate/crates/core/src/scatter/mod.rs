//! Scattering flares built from four layers: glare, streak, shimmer and the
//! light source.
//!
//! Coordinates are pixels with integer pixel centres; the light position may
//! be fractional. Every layer is a non-negative RGB image of the full canvas.

mod glare;
pub(crate) mod manifest;
mod output;
mod shimmer;
mod source;
mod streak;
mod template;

pub use self::glare::{apply_vanishing_corner, build_glare, GlareCurve, GlareSpec, VanishingCorner};
pub use self::manifest::{LightPlacement, ScatterInstance, ScatterJitter, ScatterManifest, DEFAULT_CANVAS};
pub use self::output::{
    plan_scatter, sample_file_name, sample_stream, synth_scatter, write_template, COMPOUND_DIR, GLARE_DIR,
    LAYER_DIRS, LIGHT_SOURCE_DIR, SCATTER_DIR, STREAK_DIR,
};
pub use self::shimmer::{build_shimmer, ShimmerNoise, ShimmerSpec, SpikeLobe};
pub use self::source::{build_source, CoreShape, SourceSpec};
pub use self::streak::{build_streak, derive_edge_blur, SectionCurve, StreakSpec, MIN_EDGE_BLUR};
pub use self::template::{compose_template, FlareTemplate};

pub(crate) use self::output::{check_unique_names, create_dirs};

use crate::error::{Error, Result};

pub(crate) fn check_light(width: usize, height: usize, light: [f64; 2]) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("canvas is empty"));
    }
    let inside = light[0] >= 0.0 && light[1] >= 0.0 && light[0] <= (width - 1) as f64 && light[1] <= (height - 1) as f64;
    if inside {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "light position ({}, {}) outside the {width}x{height} canvas",
            light[0], light[1]
        )))
    }
}
