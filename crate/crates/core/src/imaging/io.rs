use std::io::Cursor;
use std::path::Path;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{DynamicImage, ImageBuffer, ImageError, Luma, Rgb};

use super::image::checked_len;
use super::Image;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// PNG sample depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn from_bits(bits: u8) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::invalid(format!("bit depth must be 8 or 16, got {other}"))),
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }
}

fn map_image_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(e) => Error::io(path, e),
        ImageError::Limits(e) => Error::DimensionOverflow(format!("{}: {e}", path.display())),
        other => Error::Format {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    }
}

fn quantize<T: Real>(v: T, max: f64) -> f64 {
    (v.as_f64().clamp(0.0, 1.0) * max).round()
}

/// Encodes to PNG bytes. Samples are clipped to `[0, 1]` and rounded to the
/// nearest code value.
pub fn encode_png<T: Real>(img: &Image<T>, depth: BitDepth) -> Result<Vec<u8>> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    if img.width() > u32::MAX as usize || img.height() > u32::MAX as usize {
        return Err(Error::DimensionOverflow(format!("{}x{}", img.width(), img.height())));
    }
    let mut bytes = Vec::new();
    let encoder = PngEncoder::new_with_quality(Cursor::new(&mut bytes), CompressionType::Fast, FilterType::Adaptive);
    let res = match (img.channels(), depth) {
        (1, BitDepth::Eight) => {
            let raw: Vec<u8> = img.data().iter().map(|&v| quantize(v, 255.0) as u8).collect();
            ImageBuffer::<Luma<u8>, _>::from_raw(w, h, raw).expect("sized").write_with_encoder(encoder)
        }
        (_, BitDepth::Eight) => {
            let raw: Vec<u8> = img.data().iter().map(|&v| quantize(v, 255.0) as u8).collect();
            ImageBuffer::<Rgb<u8>, _>::from_raw(w, h, raw).expect("sized").write_with_encoder(encoder)
        }
        (1, BitDepth::Sixteen) => {
            let raw: Vec<u16> = img.data().iter().map(|&v| quantize(v, 65535.0) as u16).collect();
            ImageBuffer::<Luma<u16>, _>::from_raw(w, h, raw).expect("sized").write_with_encoder(encoder)
        }
        (_, BitDepth::Sixteen) => {
            let raw: Vec<u16> = img.data().iter().map(|&v| quantize(v, 65535.0) as u16).collect();
            ImageBuffer::<Rgb<u16>, _>::from_raw(w, h, raw).expect("sized").write_with_encoder(encoder)
        }
    };
    res.map_err(|e| map_image_error(Path::new("<memory>"), e))?;
    Ok(bytes)
}

pub fn save_image<T: Real>(img: &Image<T>, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_png(img, depth)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Loads a PNG or JPEG. Grayscale files give 1 channel, everything else is
/// converted to RGB (alpha is dropped).
pub fn load_image<T: Real>(path: impl AsRef<Path>) -> Result<Image<T>> {
    let path = path.as_ref();
    let reader = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|e| map_image_error(path, e))?;
    from_dynamic(decoded)
}

pub(crate) fn from_dynamic<T: Real>(decoded: DynamicImage) -> Result<Image<T>> {
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let gray = !decoded.color().has_color();
    let channels = if gray { 1 } else { 3 };
    checked_len(w, h, channels)?;
    let samples: Vec<u16> = if gray {
        decoded.to_luma16().into_raw()
    } else {
        decoded.to_rgb16().into_raw()
    };
    let data = samples.into_iter().map(|v| T::lit(v as f64 / 65535.0)).collect();
    Image::new(w, h, channels, data)
}
