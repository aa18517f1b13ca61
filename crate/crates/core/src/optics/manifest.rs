use std::path::Path;

use serde::{Deserialize, Serialize};

use super::aperture::{rasterize_dirt, rasterize_pupil, ApertureSpec, DirtPrimitive, GridSpec, PolygonStop};
use super::components::{component_sum_psf, ApproximationReport};
use super::field::PsfImage;
use super::pupil::spectral_psf;
use super::setup::{OpticalSetup, Spectrum};
use crate::error::Result;
use crate::imaging::Image;
use crate::manifest::{check_schema, parse_toml};
use crate::scalar::Real;

pub const DEFAULT_GRID: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PupilSection {
    pub clear_radius: f64,
    #[serde(default)]
    pub polygon: Option<PolygonStop>,
}

/// Dirt grouped by the flare component it produces.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirtGroups {
    #[serde(default)]
    pub glare: Vec<DirtPrimitive>,
    #[serde(default)]
    pub streak: Vec<DirtPrimitive>,
    #[serde(default)]
    pub shimmer: Vec<DirtPrimitive>,
}

impl DirtGroups {
    pub fn all(&self) -> Vec<DirtPrimitive> {
        self.glare.iter().chain(&self.streak).chain(&self.shimmer).cloned().collect()
    }

    pub fn non_empty(&self) -> Vec<(&'static str, &[DirtPrimitive])> {
        [("glare", &self.glare), ("streak", &self.streak), ("shimmer", &self.shimmer)]
            .into_iter()
            .filter(|(_, d)| !d.is_empty())
            .map(|(n, d)| (n, d.as_slice()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupSection {
    pub focal_length: f64,
    pub source: [f64; 3],
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Omitted: the in-focus image distance.
    #[serde(default)]
    pub image_distance: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl Default for SetupSection {
    fn default() -> Self {
        SetupSection {
            focal_length: 0.05,
            source: [0.0, 0.0, 10.0],
            amplitude: 1.0,
            image_distance: None,
        }
    }
}

impl SetupSection {
    pub fn build(&self) -> Result<OpticalSetup> {
        match self.image_distance {
            None => OpticalSetup::in_focus(self.focal_length, self.source, self.amplitude),
            Some(z1) => {
                let s = OpticalSetup {
                    focal_length: self.focal_length,
                    source: self.source,
                    amplitude: self.amplitude,
                    image_distance: z1,
                };
                s.validate()?;
                Ok(s)
            }
        }
    }
}

/// Aperture manifest:
///
/// ```toml
/// schema = 1
/// name = "dusty"
/// grid = 1024            # optional
/// pitch = 1e-5           # optional, metres per sample
/// [pupil]
/// clear_radius = 1.28e-3
/// polygon = { sides = 6 }
/// [[dirt.streak]]
/// kind = "grating"
/// orientation = 0.3
/// period = 6e-5
/// duty = 0.5
/// extent = 4e-4
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApertureManifest {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub pitch: Option<f64>,
    pub pupil: PupilSection,
    #[serde(default)]
    pub dirt: DirtGroups,
    #[serde(default)]
    pub setup: SetupSection,
    #[serde(default)]
    pub spectrum: Option<Spectrum>,
}

impl ApertureManifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let m: ApertureManifest = parse_toml(text, path)?;
        check_schema(m.schema, path)?;
        m.aperture().validate()?;
        m.setup.build()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn aperture(&self) -> ApertureSpec {
        ApertureSpec {
            clear_radius: self.pupil.clear_radius,
            polygon: self.pupil.polygon,
            dirt: self.dirt.all(),
        }
    }

    /// `grid_override` beats the manifest, which beats [`DEFAULT_GRID`]. Without
    /// an explicit pitch the clear pupil spans a quarter of the grid.
    pub fn grid(&self, grid_override: Option<usize>) -> Result<GridSpec> {
        let size = grid_override.or(self.grid).unwrap_or(DEFAULT_GRID);
        let pitch = self.pitch.unwrap_or(self.pupil.clear_radius / (size as f64 / 8.0));
        GridSpec::new(size, pitch)
    }

    pub fn spectrum(&self) -> Spectrum {
        self.spectrum.clone().unwrap_or_else(Spectrum::hps)
    }
}

/// Result of rendering an aperture manifest.
#[derive(Clone, Debug)]
pub struct PsfRender<T> {
    pub grid: GridSpec,
    pub setup: OpticalSetup,
    pub spectrum: Spectrum,
    pub psf: PsfImage<T>,
    pub report: Option<ApproximationReport>,
}

pub fn render_manifest<T: Real>(
    m: &ApertureManifest,
    grid_override: Option<usize>,
    sum_components: bool,
) -> Result<PsfRender<T>> {
    let grid = m.grid(grid_override)?;
    let setup = m.setup.build()?;
    let spectrum = m.spectrum();
    let spec = m.aperture();
    let psf = spectral_psf(&spec, &grid, &setup, &spectrum)?;
    let report = if sum_components {
        // Amplitude masks only; the component split is wavelength independent.
        let g = grid;
        let base: Image<T> = rasterize_pupil(&spec, &g)?;
        let comps = m
            .dirt
            .non_empty()
            .into_iter()
            .map(|(_, d)| rasterize_dirt(d, &g))
            .collect::<Result<Vec<Image<T>>>>()?;
        Some(component_sum_psf(&comps, &base, super::components::DEFAULT_EXCLUSION_RADIUS)?.1)
    } else {
        None
    };
    Ok(PsfRender {
        grid,
        setup,
        spectrum,
        psf,
        report,
    })
}
