use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::params::AugmentParams;
use crate::error::{Error, Result};
use crate::evalkit::{saturation_mask, SATURATION_THRESHOLD};
use crate::imaging::{apply_gamma, gaussian_blur, warp_affine, Image, RngStream};
use crate::scalar::Real;

/// sRGB-ish background to linear light: inverse gamma, per-channel gain,
/// additive Gaussian noise of variance `noise_var`, clip to `[0, 1]`.
pub fn augment_background<T: Real>(img: &Image<T>, p: &AugmentParams, rng: &RngStream) -> Result<Image<T>> {
    if img.channels() != 3 {
        return Err(Error::ShapeMismatch(format!("background needs 3 channels, got {}", img.channels())));
    }
    let lin = apply_gamma(&img.clip01(), p.gamma)?;
    let gains = p.rgb_gain.map(T::lit);
    let mut data: Vec<T> = lin
        .data()
        .chunks_exact(3)
        .flat_map(|px| [px[0] * gains[0], px[1] * gains[1], px[2] * gains[2]])
        .collect();
    if p.noise_var > 0.0 {
        let normal = Normal::new(0.0, p.noise_var.sqrt()).map_err(|e| Error::invalid(e.to_string()))?;
        let mut r = rng.rng();
        for v in &mut data {
            *v = *v + T::lit(normal.sample(&mut r));
        }
    }
    Ok(Image::new(img.width(), img.height(), 3, data)?.clip01())
}

/// Flare in linear light: the scattering composite plus the (resampled)
/// reflective template, clipped, inverse-gamma'd, warped, scaled by the
/// brightness, blurred, offset and clamped to be non-negative.
pub fn augment_flare<T: Real>(
    scatter: &Image<T>,
    reflective: Option<&Image<T>>,
    p: &AugmentParams,
) -> Result<Image<T>> {
    let mut sum = scatter.clone();
    if let Some(r) = reflective {
        let r = r.to_rgb().resize(scatter.width(), scatter.height());
        sum = sum.add(&r)?;
    }
    let lin = apply_gamma(&sum.clip01(), p.gamma)?;
    let warped = warp_affine(&lin, &p.affine)?;
    let bright = warped.scale(T::lit(p.brightness));
    let blurred = gaussian_blur(&bright, p.blur_sigma)?;
    let offset = T::lit(p.color_offset);
    Ok(blurred.map(|v| (v + offset).max(T::zero())))
}

/// [`augment_flare`] evaluated only on the centred `width × height` window
/// of the canvas. Equal to `augment_flare(..).center_crop(width, height)`
/// whenever the window plus the blur radius fits inside the canvas.
pub fn augment_flare_window<T: Real>(
    scatter: &Image<T>,
    reflective: Option<&Image<T>>,
    p: &AugmentParams,
    width: usize,
    height: usize,
) -> Result<Image<T>> {
    p.affine.validate()?;
    if !(p.blur_sigma >= 0.0) {
        return Err(Error::invalid("blur sigma must be >= 0"));
    }
    let (cw, ch) = (scatter.width(), scatter.height());
    let mut sum = scatter.clone();
    if let Some(r) = reflective {
        sum = sum.add(&r.to_rgb().resize(cw, ch))?;
    }
    let lin = apply_gamma(&sum.clip01(), p.gamma)?;

    let margin = if p.blur_sigma > 0.0 { (3.0 * p.blur_sigma).ceil() as usize } else { 0 };
    let (ww, wh) = (width + 2 * margin, height + 2 * margin);
    let ox = cw as i64 / 2 - ww as i64 / 2;
    let oy = ch as i64 / 2 - wh as i64 / 2;
    let map = p.affine.inverse_map(cw, ch);
    let k = T::lit(p.brightness);
    let window = Image::from_fn(ww, wh, 3, |x, y, c| {
        let (sx, sy) = map((x as i64 + ox) as f64, (y as i64 + oy) as f64);
        lin.sample_bilinear(sx, sy, c) * k
    });
    let blurred = gaussian_blur(&window, p.blur_sigma)?.crop(margin, margin, width, height)?;
    let offset = T::lit(p.color_offset);
    Ok(blurred.map(|v| (v + offset).max(T::zero())))
}

/// Where a pair came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceIds {
    pub background: String,
    pub scatter: String,
    pub reflective: Option<String>,
}

/// One flare-corrupted / flare-free pair, all images in linear light.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSample<T> {
    pub input: Image<T>,
    pub gt: Image<T>,
    pub flare: Image<T>,
    pub gamma: f64,
    pub seed: u64,
    pub sources: SourceIds,
}

/// Encoded images ready to be written.
#[derive(Clone, Debug, PartialEq)]
pub struct ExportedPair<T> {
    pub input: Image<T>,
    pub gt: Image<T>,
    pub flare: Image<T>,
    /// Saturation mask of the encoded input, one channel.
    pub mask: Image<T>,
}

/// `input = clip01(bg + flare)`, with `gt = bg`.
pub fn composite_pair<T: Real>(
    bg: &Image<T>,
    flare: &Image<T>,
    gamma: f64,
    seed: u64,
    sources: SourceIds,
) -> Result<PairedSample<T>> {
    bg.ensure_same_shape(flare)?;
    Ok(PairedSample {
        input: bg.add(flare)?.clip01(),
        gt: bg.clone(),
        flare: flare.clone(),
        gamma,
        seed,
        sources,
    })
}

impl<T: Real> PairedSample<T> {
    /// Pixels (per sample) where `gt + flare` did not clip.
    pub fn unclipped(&self) -> impl Iterator<Item = bool> + '_ {
        self.gt
            .data()
            .iter()
            .zip(self.flare.data())
            .map(|(&g, &f)| g + f <= T::one())
    }

    /// Largest `|input − gt − flare|` over the unclipped samples.
    pub fn consistency_error(&self) -> f64 {
        self.input
            .data()
            .iter()
            .zip(self.gt.data())
            .zip(self.flare.data())
            .zip(self.unclipped())
            .filter(|(_, ok)| *ok)
            .map(|(((&i, &g), &f), _)| (i.as_f64() - g.as_f64() - f.as_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// Re-applies the sample's gamma to every image and derives the mask.
    pub fn export(&self) -> Result<ExportedPair<T>> {
        let enc = |img: &Image<T>| apply_gamma(&img.clip01(), 1.0 / self.gamma);
        let input = enc(&self.input)?;
        let mask = saturation_mask(&input, SATURATION_THRESHOLD, 0.0)?.binary;
        Ok(ExportedPair {
            input,
            gt: enc(&self.gt)?,
            flare: enc(&self.flare)?,
            mask,
        })
    }
}
