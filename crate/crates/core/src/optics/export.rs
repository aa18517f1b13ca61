use std::fmt::Write as _;
use std::path::Path;

use super::aperture::GridSpec;
use super::components::ApproximationReport;
use super::field::{tonemap_psf, PsfImage};
use super::setup::{OpticalSetup, Spectrum};
use crate::error::{Error, Result};
use crate::imaging::{save_image, BitDepth};
use crate::scalar::Real;

/// Plain `key = value` description of a rendered PSF.
pub fn sidecar_text(grid: &GridSpec, setup: &OpticalSetup, spectrum: &Spectrum, report: Option<&ApproximationReport>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "grid_size = {}", grid.size);
    let _ = writeln!(s, "pitch_m = {:e}", grid.pitch);
    let _ = writeln!(s, "focal_length_m = {}", setup.focal_length);
    let _ = writeln!(s, "source_m = {} {} {}", setup.source[0], setup.source[1], setup.source[2]);
    let _ = writeln!(s, "amplitude = {}", setup.amplitude);
    let _ = writeln!(s, "image_distance_m = {}", setup.image_distance);
    let _ = writeln!(s, "in_focus = {}", setup.is_in_focus());
    let lines: Vec<String> = spectrum
        .samples()
        .iter()
        .map(|x| format!("{}:{:.6}", x.wavelength_nm, x.weight))
        .collect();
    let _ = writeln!(s, "spectrum_nm = {}", lines.join(" "));
    let _ = writeln!(s, "tonemap = sqrt(peak-normalised)");
    if let Some(r) = report {
        let _ = writeln!(s, "exclusion_radius_px = {}", r.exclusion_radius);
        let _ = writeln!(s, "approx_inside_rel_l2 = {:e}", r.inside_error);
        let _ = writeln!(s, "approx_outside_rel_l2 = {:e}", r.outside_error);
        let _ = writeln!(s, "clean_pupil_inside_rel_l2 = {:e}", r.baseline_inside_error);
        let _ = writeln!(s, "clean_pupil_outside_rel_l2 = {:e}", r.baseline_outside_error);
    }
    s
}

/// Writes the tonemapped PSF as a 16-bit PNG and the sidecar next to it
/// (same stem, `.txt`).
pub fn export_psf<T: Real>(psf: &PsfImage<T>, png: impl AsRef<Path>, sidecar: &str) -> Result<()> {
    let png = png.as_ref();
    save_image(&tonemap_psf(psf)?, png, BitDepth::Sixteen)?;
    let txt = png.with_extension("txt");
    std::fs::write(&txt, sidecar).map_err(|e| Error::io(&txt, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{load_image, Image};
    use crate::optics::field::PsfNormalization;

    #[test]
    fn writes_png_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let psf = PsfImage {
            image: Image::<f64>::from_fn(8, 8, 1, |x, y, _| (x * y) as f64),
            normalization: PsfNormalization::EnergyPreserving,
        };
        let grid = GridSpec::new(8, 1e-5).unwrap();
        let setup = OpticalSetup::in_focus(0.05, [0.0, 0.0, 10.0], 1.0).unwrap();
        let text = sidecar_text(&grid, &setup, &Spectrum::hps(), None);
        export_psf(&psf, dir.path().join("p.png"), &text).unwrap();
        let back: Image<f64> = load_image(dir.path().join("p.png")).unwrap();
        assert!((back.max_value() - 1.0).abs() < 1e-9);
        let side = std::fs::read_to_string(dir.path().join("p.txt")).unwrap();
        assert!(side.contains("grid_size = 8") && side.contains("spectrum_nm = 560:"));
    }
}
