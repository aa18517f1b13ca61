use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::scalar::Real;

/// Square complex amplitude grid on the aperture plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField<T> {
    size: usize,
    pitch: f64,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexField<T> {
    pub fn new(size: usize, pitch: f64, data: Vec<Complex<T>>) -> Result<Self> {
        if size < 1 || !size.is_power_of_two() {
            return Err(Error::invalid(format!("field size must be a power of two, got {size}")));
        }
        if data.len() != size * size {
            return Err(Error::ShapeMismatch(format!(
                "field of size {size} needs {} samples, got {}",
                size * size,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(ComplexField { size, pitch, data })
    }

    pub fn from_fn(size: usize, pitch: f64, f: impl Fn(usize, usize) -> Complex<T>) -> Result<Self> {
        let mut data = Vec::with_capacity(size * size);
        for y in 0..size {
            for x in 0..size {
                data.push(f(x, y));
            }
        }
        Self::new(size, pitch, data)
    }

    /// Real field from a 1-channel image.
    pub fn from_real(img: &Image<T>, pitch: f64) -> Result<Self> {
        if img.channels() != 1 || img.width() != img.height() {
            return Err(Error::ShapeMismatch("field source must be a square 1-channel image".into()));
        }
        Self::new(
            img.width(),
            pitch,
            img.data().iter().map(|&v| Complex::new(v, T::zero())).collect(),
        )
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    #[inline]
    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Complex<T> {
        self.data[y * self.size + x]
    }

    /// `Σ |u|²`, accumulated in `f64`.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr().as_f64()).sum()
    }

    pub fn intensity(&self) -> Image<T> {
        Image::from_raw(self.size, self.size, 1, self.data.iter().map(|z| z.norm_sqr()).collect())
    }

    pub fn add(&self, other: &ComplexField<T>) -> Result<ComplexField<T>> {
        if self.size != other.size {
            return Err(Error::ShapeMismatch(format!("field sizes {} vs {}", self.size, other.size)));
        }
        Ok(ComplexField {
            size: self.size,
            pitch: self.pitch,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: T) -> ComplexField<T> {
        ComplexField {
            size: self.size,
            pitch: self.pitch,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }
}

fn swap_halves<T: Copy>(data: &mut [T], n: usize) {
    let h = n / 2;
    for y in 0..h {
        for x in 0..n {
            let xx = (x + h) % n;
            data.swap(y * n + x, (y + h) * n + xx);
        }
    }
}

/// Centred unitary 2-D DFT:
/// `F[u,v] = (1/N) Σ f[x,y] exp(-2πi((x-N/2)(u-N/2) + (y-N/2)(v-N/2))/N)`.
pub fn centered_dft2<T: Real>(field: &ComplexField<T>) -> ComplexField<T> {
    let n = field.size;
    let mut buf = field.data.clone();
    swap_halves(&mut buf, n);

    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_forward(n);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(&mut buf, &mut scratch);

    let mut col = vec![Complex::new(T::zero(), T::zero()); n];
    for x in 0..n {
        for y in 0..n {
            col[y] = buf[y * n + x];
        }
        fft.process_with_scratch(&mut col, &mut scratch);
        for y in 0..n {
            buf[y * n + x] = col[y];
        }
    }

    let k = T::one() / T::lit(n as f64);
    for z in &mut buf {
        *z = *z * k;
    }
    swap_halves(&mut buf, n);
    ComplexField {
        size: n,
        pitch: field.pitch,
        data: buf,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsfNormalization {
    /// Unitary transform of the pupil: total energy equals pupil energy.
    EnergyPreserving,
    /// Scaled so the brightest sample is 1.
    PeakNormalized,
}

/// Non-negative intensity grid, 1 channel (monochromatic) or 3 (RGB).
#[derive(Clone, Debug, PartialEq)]
pub struct PsfImage<T> {
    pub image: Image<T>,
    pub normalization: PsfNormalization,
}

impl<T: Real> PsfImage<T> {
    pub fn peak(&self) -> T {
        self.image.max_value()
    }

    pub fn peak_normalized(&self) -> Result<PsfImage<T>> {
        let peak = self.peak();
        if !(peak > T::zero()) {
            return Err(Error::invalid("PSF has no positive peak"));
        }
        Ok(PsfImage {
            image: self.image.map(|v| v / peak),
            normalization: PsfNormalization::PeakNormalized,
        })
    }
}

/// `|F{pupil}|²` with the centred unitary transform.
pub fn psf_from_pupil<T: Real>(pupil: &ComplexField<T>) -> PsfImage<T> {
    PsfImage {
        image: centered_dft2(pupil).intensity(),
        normalization: PsfNormalization::EnergyPreserving,
    }
}

/// Peak-normalise, then square root (gamma ≈ 2 display encoding).
pub fn tonemap_psf<T: Real>(psf: &PsfImage<T>) -> Result<Image<T>> {
    if psf.image.min_value() < T::zero() {
        return Err(Error::invalid("PSF has negative samples"));
    }
    let norm = psf.peak_normalized()?;
    Ok(norm.image.map(|v| v.sqrt().min(T::one())))
}
