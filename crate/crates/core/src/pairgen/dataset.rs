use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::augment::{augment_background, augment_flare_window, composite_pair, PairedSample, SourceIds};
use super::params::{AugmentConfig, AugmentParams};
use crate::error::{Error, Result};
use crate::imaging::{load_image, save_image, BitDepth, Image, RngStream};
use crate::manifest::SCHEMA_VERSION;
use crate::reflect::ReflectManifest;
use crate::scalar::Real;
use crate::scatter::{check_unique_names, create_dirs, sample_stream, ScatterManifest};

pub const PAIRS_DIR: &str = "pairs";
pub const PAIR_LAYERS: [&str; 4] = ["input", "gt", "flare", "mask"];
pub const INDEX_FILE: &str = "index.json";
/// Templates per flare type, as in the released dataset.
pub const DEFAULT_TEMPLATES_PER_TYPE: usize = 200;
pub const DEFAULT_PAIR_SIZE: [usize; 2] = [512, 512];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairConfig {
    /// Output width and height.
    pub size: [usize; 2],
    /// Template indices are drawn from `0..templates_per_type`.
    pub templates_per_type: usize,
    pub augment: AugmentConfig,
    pub depth: BitDepth,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig {
            size: DEFAULT_PAIR_SIZE,
            templates_per_type: DEFAULT_TEMPLATES_PER_TYPE,
            augment: AugmentConfig::default(),
            depth: BitDepth::Eight,
        }
    }
}

/// Everything needed to rebuild pair `index` without rendering it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairPlan {
    pub index: usize,
    pub stream: RngStream,
    pub params: AugmentParams,
    pub background: usize,
    /// `(manifest, template index)`.
    pub scatter: (usize, usize),
    pub reflective: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub index: usize,
    pub stream: RngStream,
    pub params: AugmentParams,
    pub sources: SourceIds,
    /// Relative to the output root, in [`PAIR_LAYERS`] order.
    pub files: Vec<String>,
}

/// Index written after every pair of a run is on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairIndex {
    pub schema: u32,
    pub seed: u64,
    pub count: usize,
    pub config: PairConfig,
    pub records: Vec<PairRecord>,
}

/// Sorted PNG / JPEG files of a directory.
pub fn list_backgrounds(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::MissingInput(format!("background directory {} does not exist", dir.display())));
    }
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let p = e.map_err(|err| Error::io(dir, err))?.path();
        let ext = p.extension().and_then(|x| x.to_str()).map(str::to_ascii_lowercase);
        if p.is_file() && matches!(ext.as_deref(), Some("png" | "jpg" | "jpeg")) {
            out.push(p);
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(Error::MissingInput(format!("no PNG or JPEG backgrounds in {}", dir.display())));
    }
    Ok(out)
}

pub fn pair_file_name(index: usize) -> String {
    format!("{index:06}.png")
}

/// Renders pairs on demand. Pair `i` depends only on the seed, `i`, the
/// manifests and the backgrounds.
#[derive(Clone, Debug)]
pub struct PairGenerator {
    pub scatter: Vec<ScatterManifest>,
    pub reflect: Vec<ReflectManifest>,
    pub backgrounds: Vec<PathBuf>,
    pub seed: u64,
    pub config: PairConfig,
}

impl PairGenerator {
    pub fn new(
        scatter: Vec<ScatterManifest>,
        reflect: Vec<ReflectManifest>,
        backgrounds: Vec<PathBuf>,
        seed: u64,
        config: PairConfig,
    ) -> Result<Self> {
        if scatter.is_empty() {
            return Err(Error::MissingInput("no scattering-flare manifests".into()));
        }
        if backgrounds.is_empty() {
            return Err(Error::MissingInput("no background images".into()));
        }
        check_unique_names(scatter.iter().map(|m| m.name.as_str()))?;
        check_unique_names(reflect.iter().map(|m| m.name.as_str()))?;
        config.augment.validate()?;
        if config.size[0] == 0 || config.size[1] == 0 || config.templates_per_type == 0 {
            return Err(Error::invalid("pair size and templates per type must be positive"));
        }
        Ok(PairGenerator {
            scatter,
            reflect,
            backgrounds,
            seed,
            config,
        })
    }

    /// Draws the random choices of pair `index`. Selection is uniform with
    /// replacement.
    pub fn plan(&self, index: usize) -> Result<PairPlan> {
        let stream = RngStream::at(self.seed, index as u64);
        let mut r = stream.substream(0).rng();
        let k = self.config.templates_per_type;
        let background = r.random_range(0..self.backgrounds.len());
        let scatter = (r.random_range(0..self.scatter.len()), r.random_range(0..k));
        let reflective = if self.reflect.is_empty() {
            None
        } else {
            Some((r.random_range(0..self.reflect.len()), r.random_range(0..k)))
        };
        Ok(PairPlan {
            index,
            stream,
            params: self.config.augment.sample(&stream.substream(1))?,
            background,
            scatter,
            reflective,
        })
    }

    fn background_id(&self, i: usize) -> String {
        let p = &self.backgrounds[i];
        p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
    }

    pub fn sources(&self, plan: &PairPlan) -> SourceIds {
        let (si, sk) = plan.scatter;
        SourceIds {
            background: self.background_id(plan.background),
            scatter: format!("{}_{sk:04}", self.scatter[si].name),
            reflective: plan.reflective.map(|(ri, rk)| format!("{}_{rk:04}", self.reflect[ri].name)),
        }
    }

    /// Template `k` of a type is the one `synth-scatter` / `synth-reflect`
    /// write with the same seed.
    pub fn render<T: Real>(&self, plan: &PairPlan) -> Result<PairedSample<T>> {
        let [w, h] = self.config.size;
        let bg: Image<T> = load_image(&self.backgrounds[plan.background])?;
        let bg = bg.to_rgb().resize_cover(w, h);
        let bg = augment_background(&bg, &plan.params, &plan.stream.substream(2))?;

        let (si, sk) = plan.scatter;
        let sm = &self.scatter[si];
        let scatter = sm.render::<T>(&sample_stream(self.seed, &sm.name, sk))?.composite;
        let reflective = match plan.reflective {
            Some((ri, rk)) => {
                let rm = &self.reflect[ri];
                Some(rm.render::<T>(&sample_stream(self.seed, &rm.name, rk))?)
            }
            None => None,
        };
        let flare = augment_flare_window(&scatter, reflective.as_ref(), &plan.params, w, h)?;
        composite_pair(&bg, &flare, plan.params.gamma, self.seed, self.sources(plan))
    }

    pub fn sample<T: Real>(&self, index: usize) -> Result<PairedSample<T>> {
        self.render(&self.plan(index)?)
    }

    /// Lazily renders pairs `0..count`.
    pub fn iter<T: Real>(&self, count: usize) -> impl Iterator<Item = Result<PairedSample<T>>> + '_ {
        (0..count).map(move |i| self.sample(i))
    }
}

/// Writes `pairs/{input,gt,flare,mask}/NNNNNN.png` for `0..count` and then
/// `pairs/index.json`. The index is written last, through a rename, and
/// only if every pair succeeded; a stale index is removed up front.
pub fn generate_dataset<T: Real>(generator: &PairGenerator, count: usize, out: &Path) -> Result<PairIndex> {
    let base = out.join(PAIRS_DIR);
    create_dirs(PAIR_LAYERS.iter().map(|l| base.join(l)))?;
    let index_path = base.join(INDEX_FILE);
    if index_path.exists() {
        std::fs::remove_file(&index_path).map_err(|e| Error::io(&index_path, e))?;
    }
    let depth = generator.config.depth;
    let records = (0..count)
        .into_par_iter()
        .map(|i| {
            let plan = generator.plan(i)?;
            let pair: PairedSample<T> = generator.render(&plan)?;
            let e = pair.export()?;
            log::debug!("pair {i}: {:?}", pair.sources);
            let name = pair_file_name(i);
            let mut files = Vec::with_capacity(4);
            for (layer, img) in PAIR_LAYERS.iter().zip([&e.input, &e.gt, &e.flare, &e.mask]) {
                save_image(img, base.join(layer).join(&name), depth)?;
                files.push(format!("{PAIRS_DIR}/{layer}/{name}"));
            }
            Ok(PairRecord {
                index: i,
                stream: plan.stream,
                params: plan.params,
                sources: pair.sources,
                files,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let index = PairIndex {
        schema: SCHEMA_VERSION,
        seed: generator.seed,
        count,
        config: generator.config.clone(),
        records,
    };
    let tmp = base.join(format!("{INDEX_FILE}.tmp"));
    let text = serde_json::to_string_pretty(&index).map_err(|e| Error::invalid(e.to_string()))?;
    std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, &index_path).map_err(|e| Error::io(&index_path, e))?;
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::manifest::tests::SAMPLE;

    fn setup(dir: &Path) -> PairGenerator {
        let bgdir = dir.join("bg");
        std::fs::create_dir_all(&bgdir).unwrap();
        for k in 0..2 {
            let img = Image::<f64>::from_fn(40, 30, 3, |x, y, c| ((x * (k + 2) + y * 3 + c * 7) % 29) as f64 / 28.0);
            save_image(&img, bgdir.join(format!("b{k}.png")), BitDepth::Eight).unwrap();
        }
        let m = ScatterManifest::parse(SAMPLE, Path::new("s.toml")).unwrap();
        let r = ReflectManifest::parse(crate::reflect::manifest::tests::SAMPLE, Path::new("r.toml")).unwrap();
        let cfg = PairConfig {
            size: [48, 40],
            templates_per_type: 4,
            augment: AugmentConfig {
                translate: [-10.0, 10.0],
                ..AugmentConfig::default()
            },
            depth: BitDepth::Eight,
        };
        PairGenerator::new(vec![m], vec![r], list_backgrounds(&bgdir).unwrap(), 3, cfg).unwrap()
    }

    #[test]
    fn pairs_are_consistent() {
        let d = tempfile::tempdir().unwrap();
        let g = setup(d.path());
        for p in g.iter::<f32>(6) {
            let p = p.unwrap();
            assert!(p.consistency_error() <= 1e-6);
            assert_eq!((p.input.width(), p.input.height()), (48, 40));
        }
    }

    #[test]
    fn dataset_is_reproducible() {
        let d = tempfile::tempdir().unwrap();
        let g = setup(d.path());
        let (a, b) = (d.path().join("a"), d.path().join("b"));
        let ia = generate_dataset::<f32>(&g, 3, &a).unwrap();
        let ib = generate_dataset::<f32>(&g, 3, &b).unwrap();
        assert_eq!(ia, ib);
        for rec in &ia.records {
            for f in &rec.files {
                assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
            }
        }
        assert!(a.join("pairs/index.json").is_file());
        assert_eq!(std::fs::read_dir(a.join("pairs/mask")).unwrap().count(), 3);
    }

    #[test]
    fn zero_count_and_missing_inputs() {
        let d = tempfile::tempdir().unwrap();
        let g = setup(d.path());
        let idx = generate_dataset::<f32>(&g, 0, &d.path().join("z")).unwrap();
        assert!(idx.records.is_empty());
        assert_eq!(std::fs::read_dir(d.path().join("z/pairs/input")).unwrap().count(), 0);
        assert!(matches!(list_backgrounds(&d.path().join("nope")), Err(Error::MissingInput(_))));
        let empty = d.path().join("empty");
        std::fs::create_dir_all(&empty).unwrap();
        assert!(list_backgrounds(&empty).is_err());
    }

    #[test]
    fn failure_leaves_no_index() {
        let d = tempfile::tempdir().unwrap();
        let mut g = setup(d.path());
        g.backgrounds = vec![d.path().join("bg/missing.png")];
        let out = d.path().join("f");
        assert!(generate_dataset::<f32>(&g, 2, &out).is_err());
        assert!(!out.join("pairs/index.json").exists());
    }
}
