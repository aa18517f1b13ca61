//! TOML manifest loading shared by the optics, scatter, reflect and pairgen
//! front ends. Unknown keys are rejected by the individual schemas.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// The only manifest schema version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

/// Parses `text`, attributing errors to `path` with a line and column.
pub fn parse_toml<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let message = match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                format!("line {line}, column {col}: {}", e.message())
            }
            None => e.message().to_string(),
        };
        Error::Manifest {
            path: path.to_path_buf(),
            message,
        }
    })
}

pub fn load_toml<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_toml(&text, path)
}

pub fn check_schema(found: u32, path: &Path) -> Result<()> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Manifest {
            path: path.to_path_buf(),
            message: format!("unsupported schema {found}, expected {SCHEMA_VERSION}"),
        })
    }
}

/// Sorted `*.toml` files of a directory.
pub fn list_manifests(dir: impl AsRef<Path>) -> Result<Vec<std::path::PathBuf>> {
    let dir = dir.as_ref();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let p = entry.map_err(|e| Error::io(dir, e))?.path();
        if p.extension().is_some_and(|x| x == "toml") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Demo {
        schema: u32,
        value: f64,
    }

    #[test]
    fn reports_line_of_unknown_key() {
        let text = "schema = 1\nvalue = 2.0\ntypo = 3\n";
        let err = parse_toml::<Demo>(text, Path::new("demo.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("demo.toml") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn reports_line_of_type_error() {
        let text = "schema = 1\n\nvalue = \"x\"\n";
        let msg = parse_toml::<Demo>(text, Path::new("d.toml")).unwrap_err().to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn schema_check() {
        assert!(check_schema(1, Path::new("a")).is_ok());
        assert!(matches!(check_schema(2, Path::new("a")), Err(Error::Manifest { .. })));
    }

    #[test]
    fn line_col_counts() {
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("ab", 0), (1, 1));
    }
}
