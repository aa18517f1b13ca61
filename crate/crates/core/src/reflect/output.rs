use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::manifest::ReflectManifest;
use crate::error::Result;
use crate::imaging::{save_image, BitDepth, Image};
use crate::scalar::Real;
use crate::scatter::{check_unique_names, create_dirs, sample_file_name, sample_stream};

pub const REFLECT_DIR: &str = "Reflective_Flare";

pub fn plan_reflect(root: &Path, manifests: &[ReflectManifest], count: usize) -> Vec<PathBuf> {
    let base = root.join(REFLECT_DIR);
    manifests
        .iter()
        .flat_map(|m| (0..count).map(|i| base.join(sample_file_name(&m.name, i))))
        .collect()
}

/// Renders `count` templates per manifest into `root/Reflective_Flare`.
pub fn synth_reflect<T: Real>(
    manifests: &[ReflectManifest],
    count: usize,
    seed: u64,
    root: &Path,
    depth: BitDepth,
) -> Result<usize> {
    check_unique_names(manifests.iter().map(|m| m.name.as_str()))?;
    if count == 0 || manifests.is_empty() {
        return Ok(0);
    }
    let base = root.join(REFLECT_DIR);
    create_dirs([base.clone()])?;
    let jobs: Vec<(usize, usize)> = (0..manifests.len()).flat_map(|m| (0..count).map(move |i| (m, i))).collect();
    jobs.par_iter().try_for_each(|&(mi, i)| {
        let m = &manifests[mi];
        let img: Image<T> = m.render(&sample_stream(seed, &m.name, i))?;
        save_image(&img, base.join(sample_file_name(&m.name, i)), depth)
    })?;
    Ok(jobs.len())
}
