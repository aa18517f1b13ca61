use std::path::Path;

use anyhow::{Context, Result};
use flarekit::imaging::BitDepth;
use flarekit::optics::{export_psf, render_manifest, sidecar_text, ApertureManifest};
use flarekit::pairgen::{self, PairConfig, PairGenerator};
use flarekit::reflect::{self, ReflectManifest};
use flarekit::scatter::{self, ScatterManifest};
use flarekit::{evalkit, presets as builtin};
use log::info;
use serde::Serialize;
use serde_json::json;

use crate::sources::{load, Loaded, ManifestSource};
use crate::{EvalArgs, PairArgs, PresetArgs, PsfArgs, SynthArgs};

/// Bad arguments that clap cannot catch; exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn depth(bits: u8) -> Result<BitDepth> {
    Ok(BitDepth::from_bits(bits)?)
}

fn create_dir(p: &Path) -> Result<()> {
    std::fs::create_dir_all(p).with_context(|| format!("creating {}", p.display()))
}

/// Everything needed to repeat a run. No timestamps or thread counts, so
/// repeated runs write identical bytes.
#[derive(Serialize)]
struct RunManifest<'a, A: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    args: A,
    manifests: &'a [ManifestSource],
    outputs: usize,
}

fn write_run_manifest<A: Serialize>(
    out: &Path,
    command: &'static str,
    args: A,
    manifests: &[ManifestSource],
    outputs: usize,
) -> Result<()> {
    let rm = RunManifest {
        tool: "flarekit",
        version: env!("CARGO_PKG_VERSION"),
        command,
        args,
        manifests,
        outputs,
    };
    let p = out.join(format!("run_manifest.{command}.json"));
    std::fs::write(&p, serde_json::to_string_pretty(&rm)?).with_context(|| format!("writing {}", p.display()))
}

pub fn psf(a: PsfArgs) -> Result<()> {
    let (m, source) = match (&a.manifest, &a.preset) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| flarekit::Error::Io {
                path: p.clone(),
                source: e,
            })?;
            let m = ApertureManifest::parse(&text, p)?;
            (m, ManifestSource {
                origin: p.display().to_string(),
                text,
            })
        }
        (None, name) => {
            let name = name.as_deref().unwrap_or("clean_circle");
            let m = builtin::aperture(name)?;
            let text = builtin::APERTURE.iter().find(|(n, _)| *n == name).map(|(_, t)| t.to_string());
            (m, ManifestSource {
                origin: format!("builtin:aperture/{name}"),
                text: text.unwrap_or_default(),
            })
        }
    };
    if let Some(g) = a.grid {
        if g < 8 {
            return Err(UsageError(format!("--grid must be at least 8, got {g}")).into());
        }
    }
    info!("rendering PSF of {} at grid {}", m.name, m.grid(a.grid)?.size);
    let r = render_manifest::<f64>(&m, a.grid, a.sum_components)?;
    create_dir(&a.out)?;
    let png = a.out.join(format!("{}.png", m.name));
    export_psf(&r.psf, &png, &sidecar_text(&r.grid, &r.setup, &r.spectrum, r.report.as_ref()))?;
    let mut outputs = 2;
    if let Some(rep) = &r.report {
        let p = a.out.join(format!("{}_approximation_report.json", m.name));
        std::fs::write(&p, serde_json::to_string_pretty(rep)?)?;
        outputs += 1;
        println!(
            "component sum: outside rel L2 {:.4e} (clean pupil alone {:.4e})",
            rep.outside_error, rep.baseline_outside_error
        );
    }
    println!("wrote {}", png.display());
    write_run_manifest(
        &a.out,
        "psf",
        json!({ "grid": r.grid.size, "pitch": r.grid.pitch, "sum_components": a.sum_components }),
        std::slice::from_ref(&source),
        outputs,
    )
}

fn selection_args(a: &SynthArgs) -> serde_json::Value {
    json!({
        "count": a.count,
        "seed": a.seed,
        "bit_depth": a.bit_depth,
    })
}

pub fn synth_scatter(a: SynthArgs) -> Result<()> {
    let bits = depth(a.bit_depth)?;
    let Loaded { manifests, sources } = load(
        &a.select.manifests,
        a.select.manifest_dir.as_deref(),
        &builtin::SCATTER,
        "scatter",
        ScatterManifest::parse,
    )?;
    if a.dry_run {
        let plan = scatter::plan_scatter(&a.out, &manifests, a.count);
        for p in &plan {
            println!("{}", p.display());
        }
        println!("{} types x {} = {} templates, {} files", manifests.len(), a.count, manifests.len() * a.count, plan.len());
        return Ok(());
    }
    create_dir(&a.out)?;
    info!("{} scattering types x {}", manifests.len(), a.count);
    let n = scatter::synth_scatter::<f32>(&manifests, a.count, a.seed, &a.out, bits)?;
    println!("wrote {n} scattering templates under {}", a.out.join(scatter::SCATTER_DIR).display());
    write_run_manifest(&a.out, "synth-scatter", selection_args(&a), &sources, n)
}

pub fn synth_reflect(a: SynthArgs) -> Result<()> {
    let bits = depth(a.bit_depth)?;
    let Loaded { manifests, sources } = load(
        &a.select.manifests,
        a.select.manifest_dir.as_deref(),
        &builtin::REFLECT,
        "reflect",
        ReflectManifest::parse,
    )?;
    if a.dry_run {
        let plan = reflect::plan_reflect(&a.out, &manifests, a.count);
        for p in &plan {
            println!("{}", p.display());
        }
        println!("{} types x {} = {} templates", manifests.len(), a.count, plan.len());
        return Ok(());
    }
    create_dir(&a.out)?;
    info!("{} reflective types x {}", manifests.len(), a.count);
    let n = reflect::synth_reflect::<f32>(&manifests, a.count, a.seed, &a.out, bits)?;
    println!("wrote {n} reflective templates under {}", a.out.join(reflect::REFLECT_DIR).display());
    write_run_manifest(&a.out, "synth-reflect", selection_args(&a), &sources, n)
}

pub fn make_pairs(a: PairArgs) -> Result<()> {
    let bits = depth(a.bit_depth)?;
    if a.size == 0 {
        return Err(UsageError("--size must be positive".into()).into());
    }
    let backgrounds = pairgen::list_backgrounds(&a.backgrounds)?;
    let sc = load(&[], a.scatter_dir.as_deref(), &builtin::SCATTER, "scatter", ScatterManifest::parse)?;
    let rf = if a.no_reflective {
        Loaded {
            manifests: Vec::new(),
            sources: Vec::new(),
        }
    } else {
        load(&[], a.reflect_dir.as_deref(), &builtin::REFLECT, "reflect", ReflectManifest::parse)?
    };
    let mut config = PairConfig {
        size: [a.size, a.size],
        templates_per_type: a.templates_per_type,
        depth: bits,
        ..PairConfig::default()
    };
    config.augment.chi2_dof = a.chi2_dof;
    let generator = PairGenerator::new(sc.manifests, rf.manifests, backgrounds.clone(), a.seed, config)?;
    if a.dry_run {
        for i in 0..a.count {
            let plan = generator.plan(i)?;
            println!("{:06} {}", i, serde_json::to_string(&generator.sources(&plan))?);
        }
        return Ok(());
    }
    create_dir(&a.out)?;
    info!("{} pairs from {} backgrounds", a.count, backgrounds.len());
    let index = pairgen::generate_dataset::<f32>(&generator, a.count, &a.out)?;
    println!(
        "wrote {} pairs under {}",
        index.records.len(),
        a.out.join(pairgen::PAIRS_DIR).display()
    );
    let mut sources = sc.sources;
    sources.extend(rf.sources);
    let bg: Vec<String> = backgrounds
        .iter()
        .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    write_run_manifest(
        &a.out,
        "make-pairs",
        json!({
            "count": a.count,
            "seed": a.seed,
            "size": a.size,
            "templates_per_type": a.templates_per_type,
            "chi2_dof": a.chi2_dof,
            "bit_depth": a.bit_depth,
            "reflective": !a.no_reflective,
            "backgrounds": bg,
        }),
        &sources,
        index.records.len(),
    )
}

pub fn eval(a: EvalArgs) -> Result<()> {
    for d in [&a.pred, &a.gt] {
        if !d.is_dir() {
            return Err(flarekit::Error::MissingInput(format!("{} is not a directory", d.display())).into());
        }
    }
    let report = evalkit::evaluate_dirs(&a.pred, &a.gt)?;
    let text = report.to_text();
    print!("{text}");
    if let Some(out) = &a.out {
        create_dir(out)?;
        std::fs::write(out.join("eval_report.txt"), &text)?;
        std::fs::write(out.join("eval_report.json"), report.to_json())?;
        write_run_manifest(out, "eval", json!({ "pred": a.pred, "gt": a.gt }), &[], report.count)?;
    }
    if !report.errors.is_empty() {
        anyhow::bail!("{} file(s) could not be scored", report.errors.len());
    }
    Ok(())
}

pub fn presets(a: PresetArgs) -> Result<()> {
    builtin::export(&a.out)?;
    println!("wrote built-in manifests to {}", a.out.display());
    Ok(())
}
