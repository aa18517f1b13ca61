use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{psnr, ssim, PSNR_CAP};
use crate::error::{Error, Result};
use crate::imaging::{load_image, Image};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileMetrics {
    pub name: String,
    /// dB, capped at [`PSNR_CAP`].
    pub psnr: f64,
    pub ssim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileError {
    pub name: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub count: usize,
    pub mean_psnr: f64,
    pub mean_ssim: f64,
    pub files: Vec<FileMetrics>,
    pub errors: Vec<FileError>,
}

impl MetricReport {
    /// Aggregates in file order; means are NaN for an empty set.
    pub fn from_files(files: Vec<FileMetrics>, errors: Vec<FileError>) -> Self {
        let n = files.len();
        let mean = |f: fn(&FileMetrics) -> f64| files.iter().map(f).sum::<f64>() / n as f64;
        MetricReport {
            count: n,
            mean_psnr: mean(|m| m.psnr),
            mean_ssim: mean(|m| m.ssim),
            files,
            errors,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for f in &self.files {
            let _ = writeln!(s, "{:<40} psnr {:8.4} dB  ssim {:.6}", f.name, f.psnr, f.ssim);
        }
        for e in &self.errors {
            let _ = writeln!(s, "{:<40} error: {}", e.name, e.message);
        }
        let _ = writeln!(
            s,
            "mean over {} files: psnr {:.4} dB  ssim {:.6}",
            self.count, self.mean_psnr, self.mean_ssim
        );
        s
    }

    pub fn to_json(&self) -> String {
        // NaN means are written as null
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn image_names(dir: &Path) -> Result<BTreeSet<String>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = BTreeSet::new();
    for e in entries {
        let e = e.map_err(|err| Error::io(dir, err))?;
        let p = e.path();
        let ext = p.extension().and_then(|x| x.to_str()).map(str::to_ascii_lowercase);
        if p.is_file() && matches!(ext.as_deref(), Some("png" | "jpg" | "jpeg")) {
            if let Some(n) = p.file_name().and_then(|n| n.to_str()) {
                out.insert(n.to_string());
            }
        }
    }
    Ok(out)
}

/// PSNR and SSIM of every image in `pred` against its namesake in `gt`,
/// computed on the stored (sRGB-encoded) values. Files present on only one
/// side are listed as errors; the rest are still scored.
pub fn evaluate_dirs(pred: &Path, gt: &Path) -> Result<MetricReport> {
    let p = image_names(pred)?;
    let g = image_names(gt)?;
    let mut errors: Vec<FileError> = p
        .symmetric_difference(&g)
        .map(|n| FileError {
            name: n.clone(),
            message: if p.contains(n) {
                format!("no counterpart in {}", gt.display())
            } else {
                format!("no counterpart in {}", pred.display())
            },
        })
        .collect();
    let common: Vec<&String> = p.intersection(&g).collect();
    let results: Vec<std::result::Result<FileMetrics, FileError>> = common
        .par_iter()
        .map(|n| {
            let score = || -> Result<FileMetrics> {
                let a: Image<f64> = load_image(pred.join(n))?;
                let b: Image<f64> = load_image(gt.join(n))?;
                Ok(FileMetrics {
                    name: n.to_string(),
                    psnr: psnr(&a, &b, 1.0)?.min(PSNR_CAP),
                    ssim: ssim(&a, &b, 1.0)?,
                })
            };
            score().map_err(|e| FileError {
                name: n.to_string(),
                message: e.to_string(),
            })
        })
        .collect();
    let mut files = Vec::new();
    for r in results {
        match r {
            Ok(m) => files.push(m),
            Err(e) => errors.push(e),
        }
    }
    errors.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(MetricReport::from_files(files, errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{save_image, BitDepth};

    fn img(k: usize) -> Image<f64> {
        Image::from_fn(16, 14, 3, move |x, y, c| ((x * 3 + y * 5 + c + k * 7) % 17) as f64 / 16.0)
    }

    #[test]
    fn identical_dirs() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for k in 0..3 {
            let n = format!("{k}.png");
            save_image(&img(k), a.path().join(&n), BitDepth::Sixteen).unwrap();
            save_image(&img(k), b.path().join(&n), BitDepth::Sixteen).unwrap();
        }
        let r = evaluate_dirs(a.path(), b.path()).unwrap();
        assert_eq!(r.count, 3);
        assert_eq!(r.mean_ssim, 1.0);
        assert_eq!(r.mean_psnr, PSNR_CAP);
        assert!(r.errors.is_empty());
        assert!(r.to_text().contains("mean over 3 files"));
    }

    #[test]
    fn mismatched_name_is_reported_and_rest_scored() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        save_image(&img(0), a.path().join("x.png"), BitDepth::Eight).unwrap();
        save_image(&img(1), b.path().join("x.png"), BitDepth::Eight).unwrap();
        save_image(&img(2), a.path().join("only_pred.png"), BitDepth::Eight).unwrap();
        let r = evaluate_dirs(a.path(), b.path()).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.files[0].name, "x.png");
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].name, "only_pred.png");
    }

    #[test]
    fn two_file_means() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let gt0 = Image::<f64>::filled(16, 16, 3, 0.4);
        let gt1 = img(1);
        save_image(&gt0, b.path().join("0.png"), BitDepth::Sixteen).unwrap();
        save_image(&gt1, b.path().join("1.png"), BitDepth::Sixteen).unwrap();
        save_image(&gt0.map(|v| v + 0.1), a.path().join("0.png"), BitDepth::Sixteen).unwrap();
        save_image(&img(2), a.path().join("1.png"), BitDepth::Sixteen).unwrap();
        let r = evaluate_dirs(a.path(), b.path()).unwrap();
        let by_hand = |n: &str| {
            let p: Image<f64> = load_image(a.path().join(n)).unwrap();
            let g: Image<f64> = load_image(b.path().join(n)).unwrap();
            (psnr(&p, &g, 1.0).unwrap(), ssim(&p, &g, 1.0).unwrap())
        };
        let (p0, s0) = by_hand("0.png");
        let (p1, s1) = by_hand("1.png");
        assert!((r.mean_psnr - (p0 + p1) / 2.0).abs() < 1e-12);
        assert!((r.mean_ssim - (s0 + s1) / 2.0).abs() < 1e-12);
        assert!((p0 - 20.0).abs() < 0.01);
    }
}
