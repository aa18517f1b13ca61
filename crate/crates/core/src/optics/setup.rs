use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thin-lens imaging geometry. Lengths in metres; the source sits at
/// `(x0, y0, -z0)` in front of the lens.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalSetup {
    pub focal_length: f64,
    /// `[x0, y0, z0]` with `z0 > 0`.
    pub source: [f64; 3],
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Lens-to-image-plane distance `z1`.
    pub image_distance: f64,
}

fn one() -> f64 {
    1.0
}

/// Ratio below which `ρ/z0` counts as paraxial.
pub const PARAXIAL_LIMIT: f64 = 0.1;

impl OpticalSetup {
    /// Places the image plane where `1/z0 + 1/z1 = 1/f`.
    pub fn in_focus(focal_length: f64, source: [f64; 3], amplitude: f64) -> Result<Self> {
        let z0 = source[2];
        if !(z0 > focal_length && focal_length > 0.0) {
            return Err(Error::invalid(format!(
                "in-focus imaging needs z0 ({z0}) > f ({focal_length}) > 0"
            )));
        }
        let setup = OpticalSetup {
            focal_length,
            source,
            amplitude,
            image_distance: 1.0 / (1.0 / focal_length - 1.0 / z0),
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = self.source.iter().chain([&self.focal_length, &self.amplitude, &self.image_distance]).all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::invalid("optical setup has non-finite values"));
        }
        if self.focal_length <= 0.0 {
            return Err(Error::invalid("focal length must be positive"));
        }
        if self.source[2] <= 0.0 {
            return Err(Error::invalid("source distance z0 must be positive"));
        }
        if self.image_distance <= 0.0 {
            return Err(Error::invalid("image distance must be positive"));
        }
        Ok(())
    }

    pub fn z0(&self) -> f64 {
        self.source[2]
    }

    /// Lens equation residual relative to `1/f`.
    pub fn focus_error(&self) -> f64 {
        let inv_f = 1.0 / self.focal_length;
        ((1.0 / self.z0() + 1.0 / self.image_distance) - inv_f).abs() / inv_f
    }

    pub fn is_in_focus(&self) -> bool {
        self.focus_error() <= 1e-9
    }

    /// Off-axis distance of the source, `ρ0`.
    pub fn rho0(&self) -> f64 {
        self.source[0].hypot(self.source[1])
    }

    /// `max(ρ0, ρ) / z0 < 0.1` for an aperture of radius `rho_max`.
    pub fn is_paraxial(&self, rho_max: f64) -> bool {
        self.rho0().max(rho_max) / self.z0() < PARAXIAL_LIMIT
    }

    /// Distance `r0 ≈ z0 + ρ0² / 2z0` from the source to the optical centre.
    pub fn r0(&self) -> f64 {
        let z0 = self.z0();
        z0 + (self.source[0].powi(2) + self.source[1].powi(2)) / (2.0 * z0)
    }
}

/// One spectral line: wavelength in nanometres and its weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSample {
    pub wavelength_nm: f64,
    pub weight: f64,
}

/// Discrete emission spectrum with normalised weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    samples: Vec<SpectralSample>,
}

impl Spectrum {
    /// Validates ordering and positivity, then normalises the weights to sum 1.
    pub fn new(samples: Vec<SpectralSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("spectrum is empty"));
        }
        for w in samples.windows(2) {
            if !(w[1].wavelength_nm > w[0].wavelength_nm) {
                return Err(Error::invalid("spectrum wavelengths must be strictly increasing"));
            }
        }
        if samples.iter().any(|s| !(s.wavelength_nm > 0.0) || !(s.weight >= 0.0) || !s.weight.is_finite()) {
            return Err(Error::invalid("spectrum needs positive wavelengths and non-negative weights"));
        }
        let total: f64 = samples.iter().map(|s| s.weight).sum();
        if !(total > 0.0) {
            return Err(Error::invalid("spectrum weights sum to zero"));
        }
        Ok(Spectrum {
            samples: samples
                .into_iter()
                .map(|s| SpectralSample {
                    weight: s.weight / total,
                    ..s
                })
                .collect(),
        })
    }

    pub fn monochromatic(wavelength_nm: f64) -> Result<Self> {
        Self::new(vec![SpectralSample {
            wavelength_nm,
            weight: 1.0,
        }])
    }

    /// `count` equally weighted lines spread uniformly over `[lo, hi]`.
    pub fn uniform_band(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("band needs at least one sample"));
        }
        let step = if count > 1 { (hi - lo) / (count - 1) as f64 } else { 0.0 };
        Self::new(
            (0..count)
                .map(|i| SpectralSample {
                    wavelength_nm: lo + step * i as f64,
                    weight: 1.0,
                })
                .collect(),
        )
    }

    /// High-pressure sodium street lamp: 8 lines over 560-630 nm.
    pub fn hps() -> Self {
        Self::uniform_band(560.0, 630.0, 8).expect("static band is valid")
    }

    pub fn samples(&self) -> &[SpectralSample] {
        &self.samples
    }

    pub fn shortest(&self) -> f64 {
        self.samples[0].wavelength_nm
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            samples: Vec<SpectralSample>,
        }
        let raw = Raw::deserialize(d)?;
        Spectrum::new(raw.samples).map_err(serde::de::Error::custom)
    }
}

fn piecewise_gaussian(x: f64, mu: f64, s_lo: f64, s_hi: f64) -> f64 {
    let s = if x < mu { s_lo } else { s_hi };
    let t = (x - mu) / s;
    (-0.5 * t * t).exp()
}

/// CIE 1931 colour matching functions, multi-lobe piecewise Gaussian fit
/// (Wyman, Sloan & Shirley 2013).
pub fn cie_xyz(wavelength_nm: f64) -> [f64; 3] {
    let l = wavelength_nm;
    let x = 1.056 * piecewise_gaussian(l, 599.8, 37.9, 31.0) + 0.362 * piecewise_gaussian(l, 442.0, 16.0, 26.7)
        - 0.065 * piecewise_gaussian(l, 501.1, 20.4, 26.2);
    let y = 0.821 * piecewise_gaussian(l, 568.8, 46.9, 40.5) + 0.286 * piecewise_gaussian(l, 530.9, 16.3, 31.1);
    let z = 1.217 * piecewise_gaussian(l, 437.0, 11.8, 36.0) + 0.681 * piecewise_gaussian(l, 459.0, 26.0, 13.8);
    [x, y, z]
}

/// Linear sRGB (D65) weight of a monochromatic line, negatives clipped.
///
/// | λ (nm) | R     | G     | B     |
/// |--------|-------|-------|-------|
/// | 560    | 0.429 | 1.275 | 0.000 |
/// | 570    | 1.044 | 1.034 | 0.000 |
/// | 580    | 1.642 | 0.745 | 0.000 |
/// | 590    | 2.136 | 0.442 | 0.000 |
/// | 600    | 2.447 | 0.167 | 0.000 |
/// | 610    | 2.472 | 0.000 | 0.000 |
/// | 620    | 2.193 | 0.000 | 0.000 |
/// | 630    | 1.723 | 0.000 | 0.000 |
pub fn wavelength_to_rgb(wavelength_nm: f64) -> [f64; 3] {
    let [x, y, z] = cie_xyz(wavelength_nm);
    let r = 3.2406 * x - 1.5372 * y - 0.4986 * z;
    let g = -0.9689 * x + 1.8758 * y + 0.0415 * z;
    let b = 0.0557 * x - 0.2040 * y + 1.0570 * z;
    [r.max(0.0), g.max(0.0), b.max(0.0)]
}
