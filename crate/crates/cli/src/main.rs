use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod sources;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20230;

#[derive(Parser, Debug)]
#[command(name = "flarekit", version, about = "Lens flare synthesis and flare-removal dataset tools")]
struct Cli {
    /// Worker threads; 0 uses every logical core. Output does not depend on it.
    #[arg(long, global = true, env = "FLAREKIT_THREADS", default_value_t = 0)]
    threads: usize,

    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral PSF of an aperture manifest.
    Psf(PsfArgs),
    /// Scattering-flare templates with their annotation layers.
    SynthScatter(SynthArgs),
    /// Reflective-flare templates.
    SynthReflect(SynthArgs),
    /// Paired flare-corrupted / flare-free training samples.
    MakePairs(PairArgs),
    /// PSNR and SSIM of predictions against ground truth.
    Eval(EvalArgs),
    /// Copies the built-in manifests to a directory for editing.
    Presets(PresetArgs),
}

#[derive(Args, Debug)]
pub struct PsfArgs {
    /// Aperture manifest; defaults to the built-in `clean_circle`.
    #[arg(long, conflicts_with = "preset")]
    pub manifest: Option<PathBuf>,
    /// Built-in aperture name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Grid size override (power of two recommended).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Also compare against the component-sum approximation.
    #[arg(long)]
    pub sum_components: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ManifestSelection {
    /// Manifest file; may be repeated.
    #[arg(long = "manifest")]
    pub manifests: Vec<PathBuf>,
    /// Directory of `*.toml` manifests.
    #[arg(long, conflicts_with = "manifests")]
    pub manifest_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(flatten)]
    pub select: ManifestSelection,
    /// Templates per flare type.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// PNG sample depth, 8 or 16.
    #[arg(long, default_value_t = 8)]
    pub bit_depth: u8,
    /// List what would be written and stop.
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// Directory of flare-free PNG / JPEG backgrounds.
    #[arg(long)]
    pub backgrounds: PathBuf,
    /// Scattering manifests; built-in presets when omitted.
    #[arg(long)]
    pub scatter_dir: Option<PathBuf>,
    /// Reflective manifests; built-in presets when omitted.
    #[arg(long, conflicts_with = "no_reflective")]
    pub reflect_dir: Option<PathBuf>,
    /// Scattering flares only.
    #[arg(long)]
    pub no_reflective: bool,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Output side length.
    #[arg(long, default_value_t = 512)]
    pub size: usize,
    /// Template indices are drawn from 0..N per flare type.
    #[arg(long, default_value_t = flarekit::pairgen::DEFAULT_TEMPLATES_PER_TYPE)]
    pub templates_per_type: usize,
    /// Degrees of freedom of the χ² noise-variance draw.
    #[arg(long, default_value_t = 1.0)]
    pub chi2_dof: f64,
    #[arg(long, default_value_t = 8)]
    pub bit_depth: u8,
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gt: PathBuf,
    /// Where to write `eval_report.{json,txt}`; stdout only when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PresetArgs {
    #[arg(long, default_value = "presets")]
    pub out: PathBuf,
}

/// Configuration problems exit with 2, everything else with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    use flarekit::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Manifest { .. } | E::MissingInput(_) | E::InvalidParameter(_) => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<commands::UsageError>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let res = match cli.command {
        Command::Psf(a) => commands::psf(a),
        Command::SynthScatter(a) => commands::synth_scatter(a),
        Command::SynthReflect(a) => commands::synth_reflect(a),
        Command::MakePairs(a) => commands::make_pairs(a),
        Command::Eval(a) => commands::eval(a),
        Command::Presets(a) => commands::presets(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
