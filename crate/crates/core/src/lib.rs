//! Lens flare synthesis toolkit.
//!
//! The crate is organised by pipeline stage:
//!
//! - [`imaging`]: image buffers, colour transfer curves, filters, warps, noise and PNG IO.
//! - [`optics`]: Fourier-optics point spread functions of dirty apertures.
//! - [`scatter`]: layered glare / streak / shimmer / light-source templates.
//! - [`reflect`]: reflective (ghost) flares built from iris chains.
//! - [`pairgen`]: augmentation and paired flare-corrupted / flare-free sample generation.
//! - [`evalkit`]: saturation paste-back, PSNR and SSIM.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`). The aliases below
//! pick the precision used by the command line tool: single precision for image
//! synthesis, double precision for the optics engine.

pub mod error;
pub mod evalkit;
pub mod imaging;
pub mod manifest;
pub mod optics;
pub mod pairgen;
pub mod presets;
pub mod reflect;
pub mod scalar;
pub mod scatter;

pub use error::{Error, Result};
pub use imaging::{AffineParams, Image, RngStream};
pub use scalar::Real;

pub type Image32 = imaging::Image<f32>;
pub type Image64 = imaging::Image<f64>;
pub type ComplexField32 = optics::ComplexField<f32>;
pub type ComplexField64 = optics::ComplexField<f64>;
pub type PsfImage32 = optics::PsfImage<f32>;
pub type PsfImage64 = optics::PsfImage<f64>;
pub type FlareTemplate32 = scatter::FlareTemplate<f32>;
pub type PairedSample32 = pairgen::PairedSample<f32>;
