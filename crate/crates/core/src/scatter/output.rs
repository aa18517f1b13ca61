use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::manifest::ScatterManifest;
use super::template::FlareTemplate;
use crate::error::{Error, Result};
use crate::imaging::{save_image, BitDepth, RngStream};
use crate::scalar::Real;

pub const SCATTER_DIR: &str = "Scattering_Flare";
pub const COMPOUND_DIR: &str = "Compound_Flare";
pub const LIGHT_SOURCE_DIR: &str = "Light_Source";
pub const GLARE_DIR: &str = "Glare_with_shimmer";
pub const STREAK_DIR: &str = "Streak";

/// The four annotation layers, in output order.
pub const LAYER_DIRS: [&str; 4] = [COMPOUND_DIR, LIGHT_SOURCE_DIR, GLARE_DIR, STREAK_DIR];

pub fn sample_file_name(name: &str, index: usize) -> String {
    format!("{name}_{index:04}.png")
}

/// Stream of sample `index` of flare type `name`.
pub fn sample_stream(seed: u64, name: &str, index: usize) -> RngStream {
    RngStream::new(seed).named(name).with_counter(index as u64)
}

/// Paths of every file a scatter run writes, in a fixed order.
pub fn plan_scatter(root: &Path, manifests: &[ScatterManifest], count: usize) -> Vec<PathBuf> {
    let base = root.join(SCATTER_DIR);
    let mut out = Vec::with_capacity(manifests.len() * count * 4);
    for m in manifests {
        for i in 0..count {
            for layer in LAYER_DIRS {
                out.push(base.join(layer).join(sample_file_name(&m.name, i)));
            }
        }
    }
    out
}

/// Writes the four annotation layers of one template.
pub fn write_template<T: Real>(
    t: &FlareTemplate<T>,
    root: &Path,
    name: &str,
    index: usize,
    depth: BitDepth,
) -> Result<()> {
    let base = root.join(SCATTER_DIR);
    let file = sample_file_name(name, index);
    save_image(&t.composite, base.join(COMPOUND_DIR).join(&file), depth)?;
    save_image(&t.source, base.join(LIGHT_SOURCE_DIR).join(&file), depth)?;
    save_image(&t.glare_with_shimmer(), base.join(GLARE_DIR).join(&file), depth)?;
    save_image(&t.streak.clip01(), base.join(STREAK_DIR).join(&file), depth)
}

pub(crate) fn create_dirs(dirs: impl IntoIterator<Item = PathBuf>) -> Result<()> {
    for d in dirs {
        std::fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
    }
    Ok(())
}

pub(crate) fn check_unique_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::invalid(format!("duplicate flare type name {n:?}")));
        }
    }
    Ok(())
}

/// Renders `count` templates per manifest into `root`. Work is split by
/// `(type, index)` and each item has its own stream, so the files do not
/// depend on the thread count. Returns the number of templates written.
pub fn synth_scatter<T: Real>(
    manifests: &[ScatterManifest],
    count: usize,
    seed: u64,
    root: &Path,
    depth: BitDepth,
) -> Result<usize> {
    check_unique_names(manifests.iter().map(|m| m.name.as_str()))?;
    if count == 0 || manifests.is_empty() {
        return Ok(0);
    }
    let base = root.join(SCATTER_DIR);
    create_dirs(LAYER_DIRS.iter().map(|l| base.join(l)))?;
    let jobs: Vec<(usize, usize)> = (0..manifests.len()).flat_map(|m| (0..count).map(move |i| (m, i))).collect();
    jobs.par_iter().try_for_each(|&(mi, i)| {
        let m = &manifests[mi];
        let t: FlareTemplate<T> = m.render(&sample_stream(seed, &m.name, i))?;
        write_template(&t, root, &m.name, i, depth)
    })?;
    Ok(jobs.len())
}
