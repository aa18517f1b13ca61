//! Fourier-optics point spread functions of a thin lens behind a dirty
//! aperture.
//!
//! The pupil field of a point source is sampled on a square grid, carried to
//! the image plane with a centred unitary DFT and squared. Broadband sources
//! are handled as a weighted set of spectral lines, each rendered on its own
//! aperture pitch so that all lines share one image-plane grid.

mod aperture;
mod components;
mod export;
mod field;
mod manifest;
mod pupil;
mod setup;

pub use num_complex::Complex;

pub use self::aperture::{rasterize_aperture, rasterize_dirt, rasterize_pupil, ApertureSpec, DirtPrimitive, GridSpec, PolygonStop};
pub use self::components::{component_sum_psf, ApproximationReport, DEFAULT_EXCLUSION_RADIUS};
pub use self::export::{export_psf, sidecar_text};
pub use self::field::{centered_dft2, psf_from_pupil, tonemap_psf, ComplexField, PsfImage, PsfNormalization};
pub use self::manifest::{render_manifest, ApertureManifest, DirtGroups, PsfRender, PupilSection, SetupSection, DEFAULT_GRID};
pub use self::pupil::{
    grid_for_wavelength, image_plane_field, image_plane_pitch, monochromatic_psf, pupil_function, spectral_psf,
    spectral_psf_raw,
};
pub use self::setup::{cie_xyz, wavelength_to_rgb, OpticalSetup, SpectralSample, Spectrum, PARAXIAL_LIMIT};
