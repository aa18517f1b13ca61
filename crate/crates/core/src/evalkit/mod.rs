//! Saturation paste-back and full-reference metrics.

mod mask;
mod metrics;
mod report;

pub use self::mask::{paste_back, saturation_mask, SaturationMask, DEFAULT_FEATHER, SATURATION_THRESHOLD};
pub use self::metrics::{psnr, ssim, PSNR_CAP, SSIM_SIGMA, SSIM_WINDOW};
pub use self::report::{evaluate_dirs, FileError, FileMetrics, MetricReport};
