//! Image buffers and the pixel operations shared by every other module.
//!
//! Everything works in floating point. Compositing happens in whatever space
//! the caller hands in; the transfer curves here are applied only at the IO
//! boundary or explicitly by the augmentation pipeline.

mod color;
mod filter;
mod image;
mod io;
mod noise;
mod rng;
mod warp;

pub use self::color::{apply_gamma, linear_to_srgb, linear_to_srgb_scalar, srgb_to_linear, srgb_to_linear_scalar};
pub use self::filter::{gaussian_blur, gaussian_kernel, radial_blur, screen, screen_blend};
pub use self::image::Image;
pub use self::io::{encode_png, load_image, save_image, BitDepth};
pub use self::noise::{fractal_noise, value_noise, FractalNoise, DEFAULT_BASE_PERIOD};
pub use self::rng::RngStream;
pub use self::warp::{warp_affine, AffineParams};
