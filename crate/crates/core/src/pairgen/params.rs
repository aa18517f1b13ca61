use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{ChiSquared, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{AffineParams, RngStream};

/// Sampling distributions of the augmentation parameters. Every range is
/// closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentConfig {
    pub gamma: [f64; 2],
    pub rgb_gain: [f64; 2],
    /// `σ² = noise_scale · χ²(chi2_dof)`.
    pub noise_scale: f64,
    pub chi2_dof: f64,
    pub rotation: [f64; 2],
    /// Pixels on the flare canvas, both axes.
    pub translate: [f64; 2],
    pub shear: [f64; 2],
    pub scale: [f64; 2],
    pub flip_probability: f64,
    pub brightness: [f64; 2],
    /// Gaussian blur σ, pixels.
    pub blur: [f64; 2],
    pub color_offset: [f64; 2],
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            gamma: [1.8, 2.2],
            rgb_gain: [0.5, 1.2],
            noise_scale: 0.01,
            chi2_dof: 1.0,
            rotation: [0.0, TAU],
            translate: [-300.0, 300.0],
            shear: [-PI / 9.0, PI / 9.0],
            scale: [0.8, 1.5],
            flip_probability: 0.5,
            brightness: [0.8, 3.0],
            blur: [0.1, 3.0],
            color_offset: [-0.02, 0.02],
        }
    }
}

/// Parameters of one augmented pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentParams {
    pub gamma: f64,
    pub rgb_gain: [f64; 3],
    pub noise_var: f64,
    pub affine: AffineParams,
    pub brightness: f64,
    pub blur_sigma: f64,
    pub color_offset: f64,
}

impl AugmentParams {
    /// No-op apart from the gamma curve.
    pub fn identity(gamma: f64) -> Self {
        AugmentParams {
            gamma,
            rgb_gain: [1.0; 3],
            noise_var: 0.0,
            affine: AffineParams::default(),
            brightness: 1.0,
            blur_sigma: 0.0,
            color_offset: 0.0,
        }
    }
}

fn uniform(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    // u in [0, 1), so the draw stays inside the closed range even after rounding
    (lo + (hi - lo) * rng.random::<f64>()).clamp(lo, hi)
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("gamma", self.gamma),
            ("rgb_gain", self.rgb_gain),
            ("rotation", self.rotation),
            ("translate", self.translate),
            ("shear", self.shear),
            ("scale", self.scale),
            ("brightness", self.brightness),
            ("blur", self.blur),
            ("color_offset", self.color_offset),
        ];
        for (name, [lo, hi]) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::invalid(format!("augment {name} = [{lo}, {hi}] is not a range")));
            }
        }
        if self.gamma[0] <= 0.0 || self.scale[0] <= 0.0 || self.rgb_gain[0] < 0.0 || self.brightness[0] < 0.0 {
            return Err(Error::invalid("gamma and scale must be > 0, gains >= 0"));
        }
        if self.blur[0] < 0.0 || self.shear[0] <= -PI / 2.0 || self.shear[1] >= PI / 2.0 {
            return Err(Error::invalid("blur must be >= 0 and shear inside (-π/2, π/2)"));
        }
        if !(self.noise_scale >= 0.0) || !(self.chi2_dof > 0.0) {
            return Err(Error::invalid("noise scale must be >= 0 and χ² dof > 0"));
        }
        if !(0.0..=1.0).contains(&self.flip_probability) {
            return Err(Error::invalid("flip probability must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Independent draws in a fixed order; a pure function of `rng`.
    pub fn sample(&self, rng: &RngStream) -> Result<AugmentParams> {
        self.validate()?;
        let mut r = rng.rng();
        let gamma = uniform(&mut r, self.gamma);
        let rgb_gain = [0; 3].map(|_| uniform(&mut r, self.rgb_gain));
        let chi2 = ChiSquared::new(self.chi2_dof).map_err(|e| Error::invalid(e.to_string()))?;
        let noise_var = self.noise_scale * chi2.sample(&mut r);
        let affine = AffineParams {
            rotation: uniform(&mut r, self.rotation),
            translate_x: uniform(&mut r, self.translate),
            translate_y: uniform(&mut r, self.translate),
            shear: uniform(&mut r, self.shear),
            scale: uniform(&mut r, self.scale),
            flip_h: r.random_bool(self.flip_probability),
            flip_v: r.random_bool(self.flip_probability),
        };
        Ok(AugmentParams {
            gamma,
            rgb_gain,
            noise_var,
            affine,
            brightness: uniform(&mut r, self.brightness),
            blur_sigma: uniform(&mut r, self.blur),
            color_offset: uniform(&mut r, self.color_offset),
        })
    }

    /// Whether every field of `p` lies in its configured range.
    pub fn contains(&self, p: &AugmentParams) -> bool {
        let inr = |v: f64, [lo, hi]: [f64; 2]| lo <= v && v <= hi;
        let a = &p.affine;
        inr(p.gamma, self.gamma)
            && p.rgb_gain.iter().all(|&g| inr(g, self.rgb_gain))
            && p.noise_var >= 0.0
            && inr(a.rotation, self.rotation)
            && inr(a.translate_x, self.translate)
            && inr(a.translate_y, self.translate)
            && inr(a.shear, self.shear)
            && inr(a.scale, self.scale)
            && inr(p.brightness, self.brightness)
            && inr(p.blur_sigma, self.blur)
            && inr(p.color_offset, self.color_offset)
    }
}

/// Draws with the default distributions.
pub fn sample_params(rng: &RngStream) -> AugmentParams {
    AugmentConfig::default().sample(rng).expect("default config is valid")
}
