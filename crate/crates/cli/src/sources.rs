use std::path::{Path, PathBuf};

use flarekit::manifest::list_manifests;
use flarekit::{Error, Result};
use serde::Serialize;

/// Manifest text as read, kept for the run manifest.
#[derive(Clone, Debug, Serialize)]
pub struct ManifestSource {
    pub origin: String,
    pub text: String,
}

pub struct Loaded<M> {
    pub manifests: Vec<M>,
    pub sources: Vec<ManifestSource>,
}

type Parser<M> = fn(&str, &Path) -> Result<M>;

fn from_files<M>(files: &[PathBuf], parse: Parser<M>) -> Result<Loaded<M>> {
    let mut out = Loaded {
        manifests: Vec::new(),
        sources: Vec::new(),
    };
    for f in files {
        let text = std::fs::read_to_string(f).map_err(|e| Error::Io {
            path: f.clone(),
            source: e,
        })?;
        out.manifests.push(parse(&text, f)?);
        out.sources.push(ManifestSource {
            origin: f.display().to_string(),
            text,
        });
    }
    Ok(out)
}

/// Explicit files, else every `*.toml` of `dir`, else the built-ins.
pub fn load<M>(
    files: &[PathBuf],
    dir: Option<&Path>,
    builtin: &[(&str, &str)],
    kind: &str,
    parse: Parser<M>,
) -> Result<Loaded<M>> {
    if !files.is_empty() {
        return from_files(files, parse);
    }
    if let Some(d) = dir {
        if !d.is_dir() {
            return Err(Error::MissingInput(format!("manifest directory {} does not exist", d.display())));
        }
        let files = list_manifests(d)?;
        if files.is_empty() {
            return Err(Error::MissingInput(format!("no *.toml manifests in {}", d.display())));
        }
        return from_files(&files, parse);
    }
    let mut out = Loaded {
        manifests: Vec::new(),
        sources: Vec::new(),
    };
    for (name, text) in builtin {
        let origin = format!("builtin:{kind}/{name}");
        out.manifests.push(parse(text, Path::new(&origin))?);
        out.sources.push(ManifestSource {
            origin,
            text: text.to_string(),
        });
    }
    Ok(out)
}
