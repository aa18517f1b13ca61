use num_complex::Complex;
use rayon::prelude::*;

use super::aperture::{rasterize_aperture, ApertureSpec, GridSpec};
use super::field::{psf_from_pupil, ComplexField, PsfImage, PsfNormalization};
use super::setup::{wavelength_to_rgb, OpticalSetup, Spectrum};
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

fn wavenumber(wavelength_nm: f64) -> Result<f64> {
    if !(wavelength_nm > 0.0 && wavelength_nm.is_finite()) {
        return Err(Error::invalid(format!("wavelength must be positive, got {wavelength_nm} nm")));
    }
    Ok(std::f64::consts::TAU / (wavelength_nm * 1e-9))
}

fn check_mask<T: Real>(mask: &Image<T>, grid: &GridSpec) -> Result<()> {
    grid.validate()?;
    if mask.channels() != 1 || mask.width() != grid.size || mask.height() != grid.size {
        return Err(Error::ShapeMismatch(format!(
            "mask {}x{}x{} does not match grid {}",
            mask.width(),
            mask.height(),
            mask.channels(),
            grid.size
        )));
    }
    Ok(())
}

/// Largest radius among transmitting samples.
fn mask_extent<T: Real>(mask: &Image<T>, grid: &GridSpec) -> f64 {
    let n = grid.size;
    let mut r2max: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            if mask.get(i, j, 0) != T::zero() {
                let (x, y) = (grid.coord(i), grid.coord(j));
                r2max = r2max.max(x * x + y * y);
            }
        }
    }
    r2max.sqrt()
}

/// Builds a field `(A0/z0)·mask·exp(i·phase(x, y))` with the phase evaluated in `f64`.
fn phased_field<T: Real>(
    mask: &Image<T>,
    grid: &GridSpec,
    setup: &OpticalSetup,
    wavelength_nm: f64,
    quadratic: f64,
) -> Result<ComplexField<T>> {
    check_mask(mask, grid)?;
    setup.validate()?;
    let k = wavenumber(wavelength_nm)?;
    let rho = mask_extent(mask, grid);
    if !setup.is_paraxial(rho) {
        return Err(Error::invalid(format!(
            "configuration is not paraxial: max(ρ0={}, ρ={rho}) / z0={} >= {}",
            setup.rho0(),
            setup.z0(),
            super::setup::PARAXIAL_LIMIT
        )));
    }
    let z0 = setup.z0();
    let (x0, y0) = (setup.source[0], setup.source[1]);
    let amp = setup.amplitude / z0;
    // the constant phase k·r0 is large; folding it into the per-sample
    // argument would cost ~1e-8 rad of precision
    let (s0, c0) = (k * setup.r0()).sin_cos();
    ComplexField::from_fn(grid.size, grid.pitch, |i, j| {
        let m = mask.get(i, j, 0).as_f64();
        if m == 0.0 {
            return Complex::new(T::zero(), T::zero());
        }
        let (x, y) = (grid.coord(i), grid.coord(j));
        let phase = k * (x * x + y * y) * quadratic - k * (x * x0 + y * y0) / z0;
        let (s, c) = phase.sin_cos();
        let a = amp * m;
        Complex::new(T::lit(a * (c * c0 - s * s0)), T::lit(a * (s * c0 + c * s0)))
    })
}

/// Pupil function `P̃λ = (A0 Ãλ e^{ikr0}/z0) · exp(ik(x²+y²)(1/2z0 − 1/2f)) · exp(−ik(x·x0 + y·y0)/z0)`.
pub fn pupil_function<T: Real>(
    mask: &Image<T>,
    grid: &GridSpec,
    setup: &OpticalSetup,
    wavelength_nm: f64,
) -> Result<ComplexField<T>> {
    let q = 1.0 / (2.0 * setup.z0()) - 1.0 / (2.0 * setup.focal_length);
    phased_field(mask, grid, setup, wavelength_nm, q)
}

/// Pupil field times the aperture-side quadratic factor `exp(ik(x²+y²)/2z1)`
/// of the Fresnel propagation to the image plane. Its centred DFT is the
/// image-plane amplitude; in focus only the tilt term remains.
pub fn image_plane_field<T: Real>(
    mask: &Image<T>,
    grid: &GridSpec,
    setup: &OpticalSetup,
    wavelength_nm: f64,
) -> Result<ComplexField<T>> {
    let q = 1.0 / (2.0 * setup.z0()) - 1.0 / (2.0 * setup.focal_length) + 1.0 / (2.0 * setup.image_distance);
    phased_field(mask, grid, setup, wavelength_nm, q)
}

/// Image-plane sample spacing (metres) produced by a grid at a wavelength.
pub fn image_plane_pitch(grid: &GridSpec, setup: &OpticalSetup, wavelength_nm: f64) -> f64 {
    wavelength_nm * 1e-9 * setup.image_distance / (grid.size as f64 * grid.pitch)
}

/// Energy-preserving monochromatic PSF of an aperture.
pub fn monochromatic_psf<T: Real>(
    spec: &ApertureSpec,
    grid: &GridSpec,
    setup: &OpticalSetup,
    wavelength_nm: f64,
) -> Result<PsfImage<T>> {
    let mask = rasterize_aperture::<T>(spec, grid)?;
    Ok(psf_from_pupil(&image_plane_field(&mask, grid, setup, wavelength_nm)?))
}

/// Grid whose image-plane pitch at `wavelength_nm` equals that of `grid` at
/// `reference_nm`. Longer wavelengths sample the aperture more coarsely, so
/// their PSFs come out proportionally wider on the shared pixel grid.
pub fn grid_for_wavelength(grid: &GridSpec, reference_nm: f64, wavelength_nm: f64) -> GridSpec {
    GridSpec {
        size: grid.size,
        pitch: grid.pitch * wavelength_nm / reference_nm,
    }
}

/// Weighted RGB sum of per-wavelength PSFs on a common image-plane grid
/// (the shortest wavelength of the spectrum sets the pitch). Not normalised.
pub fn spectral_psf_raw<T: Real>(
    spec: &ApertureSpec,
    grid: &GridSpec,
    setup: &OpticalSetup,
    spectrum: &Spectrum,
) -> Result<PsfImage<T>> {
    let reference = spectrum.shortest();
    let monos: Vec<Result<PsfImage<T>>> = spectrum
        .samples()
        .par_iter()
        .map(|s| {
            let g = grid_for_wavelength(grid, reference, s.wavelength_nm);
            monochromatic_psf(spec, &g, setup, s.wavelength_nm)
        })
        .collect();

    let n = grid.size;
    let mut acc = vec![T::zero(); n * n * 3];
    for (sample, mono) in spectrum.samples().iter().zip(monos) {
        let mono = mono?;
        let rgb = wavelength_to_rgb(sample.wavelength_nm).map(|c| T::lit(c * sample.weight));
        for (px, &v) in acc.chunks_exact_mut(3).zip(mono.image.data()) {
            for c in 0..3 {
                px[c] = px[c] + rgb[c] * v;
            }
        }
    }
    Ok(PsfImage {
        image: Image::from_raw(n, n, 3, acc),
        normalization: PsfNormalization::EnergyPreserving,
    })
}

/// Peak-normalised RGB PSF of a broadband source.
pub fn spectral_psf<T: Real>(
    spec: &ApertureSpec,
    grid: &GridSpec,
    setup: &OpticalSetup,
    spectrum: &Spectrum,
) -> Result<PsfImage<T>> {
    spectral_psf_raw(spec, grid, setup, spectrum)?.peak_normalized()
}
