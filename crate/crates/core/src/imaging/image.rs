use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major interleaved image with 1 or 3 channels.
///
/// Samples are nominally in `[0, 1]` but may exceed 1 before clipping. Every
/// public constructor rejects NaN and infinite samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<T>,
}

fn check_channels(channels: usize) -> Result<()> {
    if channels == 1 || channels == 3 {
        Ok(())
    } else {
        Err(Error::invalid(format!("channels must be 1 or 3, got {channels}")))
    }
}

pub(crate) fn checked_len(width: usize, height: usize, channels: usize) -> Result<usize> {
    width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::DimensionOverflow(format!("{width}x{height}x{channels}")))
}

impl<T: Real> Image<T> {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<T>) -> Result<Self> {
        check_channels(channels)?;
        let len = checked_len(width, height, channels)?;
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{width}x{height}x{channels} needs {len} samples, got {}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        Self::filled(width, height, channels, T::zero())
    }

    /// # Panics
    /// If `channels` is not 1 or 3, or `value` is not finite.
    pub fn filled(width: usize, height: usize, channels: usize, value: T) -> Self {
        check_channels(channels).expect("valid channel count");
        assert!(value.is_finite(), "fill value must be finite");
        Image {
            width,
            height,
            channels,
            data: vec![value; width * height * channels],
        }
    }

    /// Builds an image by evaluating `f(x, y, channel)`. Non-finite results are
    /// replaced by zero.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Self {
        check_channels(channels).expect("valid channel count");
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    let v = f(x, y, c);
                    data.push(if v.is_finite() { v } else { T::zero() });
                }
            }
        }
        Image {
            width,
            height,
            channels,
            data,
        }
    }

    /// Wraps data produced inside the crate, sanitising non-finite values.
    pub(crate) fn from_raw(width: usize, height: usize, channels: usize, mut data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), width * height * channels);
        for v in &mut data {
            if !v.is_finite() {
                *v = T::zero();
            }
        }
        Image {
            width,
            height,
            channels,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> T {
        self.data[self.index(x, y, c)]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, y: usize, c: usize, v: T) {
        let i = self.index(x, y, c);
        self.data[i] = v;
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[T] {
        let i = self.index(x, y, 0);
        &self.data[i..i + self.channels]
    }

    pub fn same_shape(&self, other: &Image<T>) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn ensure_same_shape(&self, other: &Image<T>) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.width, self.height, self.channels, other.width, other.height, other.channels
            )))
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Image<T> {
        Image::from_raw(
            self.width,
            self.height,
            self.channels,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn zip_map(&self, other: &Image<T>, f: impl Fn(T, T) -> T) -> Result<Image<T>> {
        self.ensure_same_shape(other)?;
        Ok(Image::from_raw(
            self.width,
            self.height,
            self.channels,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn add(&self, other: &Image<T>) -> Result<Image<T>> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn scale(&self, k: T) -> Image<T> {
        self.map(|v| v * k)
    }

    pub fn clip01(&self) -> Image<T> {
        self.map(|v| v.max(T::zero()).min(T::one()))
    }

    pub fn clamp_nonneg(&self) -> Image<T> {
        self.map(|v| v.max(T::zero()))
    }

    pub fn max_value(&self) -> T {
        self.data.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min_value(&self) -> T {
        self.data.iter().copied().fold(T::infinity(), T::min)
    }

    /// Sum of all samples, accumulated in `f64`.
    pub fn sum(&self) -> f64 {
        self.data.iter().map(|v| v.as_f64()).sum()
    }

    /// Per-pixel maximum over channels.
    pub fn channel_max(&self) -> Image<T> {
        let data = self
            .data
            .chunks_exact(self.channels)
            .map(|px| px.iter().copied().fold(T::neg_infinity(), T::max))
            .collect();
        Image::from_raw(self.width, self.height, 1, data)
    }

    /// BT.601 luma for RGB, identity for grayscale.
    pub fn luma(&self) -> Image<T> {
        if self.channels == 1 {
            return self.clone();
        }
        let (wr, wg, wb) = (T::lit(0.299), T::lit(0.587), T::lit(0.114));
        let data = self
            .data
            .chunks_exact(3)
            .map(|px| wr * px[0] + wg * px[1] + wb * px[2])
            .collect();
        Image::from_raw(self.width, self.height, 1, data)
    }

    /// Replicates a grayscale image into RGB; RGB images are returned as is.
    pub fn to_rgb(&self) -> Image<T> {
        if self.channels == 3 {
            return self.clone();
        }
        let data = self.data.iter().flat_map(|&v| [v, v, v]).collect();
        Image::from_raw(self.width, self.height, 3, data)
    }

    /// Multiplies a grayscale image by an RGB tint.
    pub fn tinted(&self, tint: [f64; 3]) -> Image<T> {
        let gray = if self.channels == 3 { self.luma() } else { self.clone() };
        let t = tint.map(T::lit);
        let data = gray.data.iter().flat_map(|&v| [v * t[0], v * t[1], v * t[2]]).collect();
        Image::from_raw(self.width, self.height, 3, data)
    }

    pub fn cast<U: Real>(&self) -> Image<U> {
        Image::from_raw(
            self.width,
            self.height,
            self.channels,
            self.data.iter().map(|v| U::lit(v.as_f64())).collect(),
        )
    }

    /// Bilinear sample at continuous pixel coordinates; pixel centres sit on
    /// integers and everything outside the grid reads as zero.
    pub fn sample_bilinear(&self, x: f64, y: f64, c: usize) -> T {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = T::lit(x - x0);
        let fy = T::lit(y - y0);
        let (xi, yi) = (x0 as i64, y0 as i64);
        let read = |xx: i64, yy: i64| -> T {
            if xx < 0 || yy < 0 || xx >= self.width as i64 || yy >= self.height as i64 {
                T::zero()
            } else {
                self.get(xx as usize, yy as usize, c)
            }
        };
        let one = T::one();
        let top = read(xi, yi) * (one - fx) + read(xi + 1, yi) * fx;
        let bottom = read(xi, yi + 1) * (one - fx) + read(xi + 1, yi + 1) * fx;
        top * (one - fy) + bottom * fy
    }

    /// Bilinear sample with clamp-to-edge addressing.
    pub fn sample_bilinear_clamped(&self, x: f64, y: f64, c: usize) -> T {
        let maxx = (self.width - 1) as f64;
        let maxy = (self.height - 1) as f64;
        let x = x.clamp(0.0, maxx);
        let y = y.clamp(0.0, maxy);
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = T::lit(x - x0);
        let fy = T::lit(y - y0);
        let xi = x0 as usize;
        let yi = y0 as usize;
        let xj = (xi + 1).min(self.width - 1);
        let yj = (yi + 1).min(self.height - 1);
        let one = T::one();
        let top = self.get(xi, yi, c) * (one - fx) + self.get(xj, yi, c) * fx;
        let bottom = self.get(xi, yj, c) * (one - fx) + self.get(xj, yj, c) * fx;
        top * (one - fy) + bottom * fy
    }

    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Image<T>> {
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::invalid(format!(
                "crop {width}x{height}+{x0}+{y0} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(width * height * self.channels);
        for y in y0..y0 + height {
            let start = self.index(x0, y, 0);
            data.extend_from_slice(&self.data[start..start + width * self.channels]);
        }
        Ok(Image::from_raw(width, height, self.channels, data))
    }

    /// Centre crop to `width` x `height`, zero-padding any dimension that is
    /// smaller than the target.
    pub fn center_crop(&self, width: usize, height: usize) -> Image<T> {
        let ox = self.width as i64 / 2 - width as i64 / 2;
        let oy = self.height as i64 / 2 - height as i64 / 2;
        Image::from_fn(width, height, self.channels, |x, y, c| {
            let sx = x as i64 + ox;
            let sy = y as i64 + oy;
            if sx < 0 || sy < 0 || sx >= self.width as i64 || sy >= self.height as i64 {
                T::zero()
            } else {
                self.get(sx as usize, sy as usize, c)
            }
        })
    }

    /// Bilinear resize with pixel-centre alignment.
    pub fn resize(&self, width: usize, height: usize) -> Image<T> {
        if width == self.width && height == self.height {
            return self.clone();
        }
        let sx = self.width as f64 / width as f64;
        let sy = self.height as f64 / height as f64;
        Image::from_fn(width, height, self.channels, |x, y, c| {
            let u = (x as f64 + 0.5) * sx - 0.5;
            let v = (y as f64 + 0.5) * sy - 0.5;
            self.sample_bilinear_clamped(u, v, c)
        })
    }

    /// Scales the short side to match the target, then centre crops.
    pub fn resize_cover(&self, width: usize, height: usize) -> Image<T> {
        let k = (width as f64 / self.width as f64).max(height as f64 / self.height as f64);
        let w = ((self.width as f64 * k).round() as usize).max(width);
        let h = ((self.height as f64 * k).round() as usize).max(height);
        self.resize(w, h).center_crop(width, height)
    }
}
