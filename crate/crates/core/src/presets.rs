//! Built-in flare types: 25 scattering, 10 reflective and a few apertures.
//!
//! The TOML sources live in `presets/` and are compiled in, so the default
//! generation profile needs no files on disk.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::optics::ApertureManifest;
use crate::reflect::ReflectManifest;
use crate::scatter::ScatterManifest;

macro_rules! preset {
    ($dir:literal, $name:literal) => {
        ($name, include_str!(concat!("../presets/", $dir, "/", $name, ".toml")))
    };
}

pub const SCATTER: [(&str, &str); 25] = [
    preset!("scatter", "halogen_glow"),
    preset!("scatter", "halogen_star"),
    preset!("scatter", "halogen_streak"),
    preset!("scatter", "headlight_twin_streak"),
    preset!("scatter", "led_cool_halo"),
    preset!("scatter", "led_cool_spiky"),
    preset!("scatter", "led_cool_streak_v"),
    preset!("scatter", "led_warm_streak"),
    preset!("scatter", "led_warm_wide"),
    preset!("scatter", "led_white_soft"),
    preset!("scatter", "led_white_star"),
    preset!("scatter", "led_white_streak"),
    preset!("scatter", "mercury_halo"),
    preset!("scatter", "mercury_streak"),
    preset!("scatter", "neon_green"),
    preset!("scatter", "neon_red"),
    preset!("scatter", "sodium_dim"),
    preset!("scatter", "sodium_hex"),
    preset!("scatter", "sodium_long_streak"),
    preset!("scatter", "sodium_soft"),
    preset!("scatter", "sodium_spiky"),
    preset!("scatter", "sodium_streak_diag"),
    preset!("scatter", "sodium_streak_h"),
    preset!("scatter", "sodium_wide"),
    preset!("scatter", "traffic_amber"),
];

pub const REFLECT: [(&str, &str); 10] = [
    preset!("reflect", "ghost_hept_mixed"),
    preset!("reflect", "ghost_hex_chain"),
    preset!("reflect", "ghost_matrix_led"),
    preset!("reflect", "ghost_matrix_wide"),
    preset!("reflect", "ghost_oct_tight"),
    preset!("reflect", "ghost_pent_spread"),
    preset!("reflect", "ghost_ring_large"),
    preset!("reflect", "ghost_round_pair"),
    preset!("reflect", "ghost_small_many"),
    preset!("reflect", "ghost_square_chain"),
];

pub const APERTURE: [(&str, &str); 3] = [
    preset!("aperture", "clean_circle"),
    preset!("aperture", "dusty_grating"),
    preset!("aperture", "hexagon_stop"),
];

fn virtual_path(kind: &str, name: &str) -> PathBuf {
    Path::new("presets").join(kind).join(format!("{name}.toml"))
}

pub fn scatter_manifests() -> Result<Vec<ScatterManifest>> {
    SCATTER
        .iter()
        .map(|(n, t)| ScatterManifest::parse(t, &virtual_path("scatter", n)))
        .collect()
}

pub fn reflect_manifests() -> Result<Vec<ReflectManifest>> {
    REFLECT
        .iter()
        .map(|(n, t)| ReflectManifest::parse(t, &virtual_path("reflect", n)))
        .collect()
}

pub fn aperture(name: &str) -> Result<ApertureManifest> {
    let (n, t) = APERTURE
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::MissingInput(format!("no aperture preset named {name:?}")))?;
    ApertureManifest::parse(t, &virtual_path("aperture", n))
}

/// Copies every preset into `dir/{scatter,reflect,aperture}/`.
pub fn export(dir: &Path) -> Result<()> {
    for (kind, list) in [("scatter", &SCATTER[..]), ("reflect", &REFLECT[..]), ("aperture", &APERTURE[..])] {
        let sub = dir.join(kind);
        std::fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
        for (n, t) in list {
            let p = sub.join(format!("{n}.toml"));
            std::fs::write(&p, t).map_err(|e| Error::io(&p, e))?;
        }
    }
    Ok(())
}
