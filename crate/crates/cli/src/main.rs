//! Command-line front end. All pixel and metric arithmetic happens in the
//! `oicmark` library; this binary only parses flags, moves files and formats
//! reports.
//!
//! Exit codes are stable: 0 = success / clean verification, 1 = usage or I/O
//! error, 2 = tamper detected.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use oicmark::manifest::{sidecar_path, Manifest};
use oicmark::{
    apply_attack, attack, calibrate_tolerance, default_tolerance, embed, io, metrics, report,
    summarize, verify, AttackMode, AttackSpec, Channel, QualityReport, RgbImage,
    SubstitutionStrategy,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_TAMPERED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "oicmark",
    version,
    about = "Fragile watermarking for RGB medical images",
    after_help = "Exit codes: 0 success/clean, 1 usage or I/O error, 2 tamper detected."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Watermark an image and write it with a sidecar manifest.
    Embed(EmbedArgs),
    /// Check a watermarked image for tampering.
    Verify(VerifyArgs),
    /// Overwrite a region of one channel (tamper simulation).
    Attack(AttackArgs),
    /// Compare two images, or sweep all strategies over one image.
    Metrics(MetricsArgs),
    /// Measure default tolerances over a corpus of images.
    Calibrate(CalibrateArgs),
}

/// Device identity, given inline or via file (exactly one of the two).
#[derive(Args)]
struct IdArgs {
    /// Device identifier string.
    #[arg(long, value_name = "ID")]
    id: Option<String>,
    /// File whose (trimmed) contents are the device identifier.
    #[arg(long, value_name = "PATH", conflicts_with = "id")]
    id_file: Option<PathBuf>,
}

impl IdArgs {
    fn resolve(&self) -> Result<String> {
        match (&self.id, &self.id_file) {
            (Some(id), None) => Ok(id.clone()),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading id file {}", path.display()))?;
                Ok(text.trim().to_string())
            }
            (None, None) => bail!("either --id or --id-file is required"),
            (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
        }
    }
}

#[derive(Args)]
struct EmbedArgs {
    /// Input image (PNG, BMP or JPEG).
    input: PathBuf,
    /// Output image path (written as PNG).
    #[arg(short, long, value_name = "PATH")]
    output: PathBuf,
    #[command(flatten)]
    id: IdArgs,
    /// Which coefficient to substitute.
    #[arg(long, default_value_t = SubstitutionStrategy::Mac)]
    strategy: SubstitutionStrategy,
    /// Also write the quality report to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Watermarked image to check.
    input: PathBuf,
    #[command(flatten)]
    id: IdArgs,
    /// Strategy to verify against (the sidecar manifest takes precedence).
    #[arg(long)]
    strategy: Option<SubstitutionStrategy>,
    /// Prefer the --strategy flag over the manifest when they disagree.
    #[arg(long)]
    force: bool,
    /// Deviation threshold; defaults to OICMARK_TOLERANCE or the calibrated
    /// per-strategy value.
    #[arg(long, value_name = "T")]
    tolerance: Option<f64>,
    /// Also write the tamper report to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Image to modify.
    input: PathBuf,
    /// Output image path (written as PNG).
    #[arg(short, long, value_name = "PATH")]
    output: PathBuf,
    /// Built-in attack name (fig9a, fig10a, fig10b, fig11a, fig12b, fig13b);
    /// its region is clipped to the image if needed.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// File in the `key = value` attack-spec format.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    spec: Option<PathBuf>,
    /// Channel to overwrite (red, green, blue).
    #[arg(long, conflicts_with_all = ["preset", "spec"])]
    channel: Option<Channel>,
    /// Row range, 1-based inclusive (e.g. 238:241).
    #[arg(long, value_name = "A:B", conflicts_with_all = ["preset", "spec"])]
    rows: Option<String>,
    /// Column range, 1-based inclusive (e.g. 300:303).
    #[arg(long, value_name = "A:B", conflicts_with_all = ["preset", "spec"])]
    cols: Option<String>,
    /// Overwrite the region with this constant (0-255).
    #[arg(long, value_name = "VALUE", conflicts_with_all = ["preset", "spec", "copy_from"])]
    fill: Option<u8>,
    /// Overwrite the region with this channel's samples.
    #[arg(long, value_name = "CHANNEL", conflicts_with_all = ["preset", "spec"])]
    copy_from: Option<Channel>,
    /// Also write the attack report to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference image.
    original: PathBuf,
    /// Image to compare against the reference (omit with --sweep).
    processed: Option<PathBuf>,
    /// Embed with all four strategies and tabulate the metrics.
    #[arg(long, conflicts_with = "processed")]
    sweep: bool,
    #[command(flatten)]
    id: IdArgs,
    /// Also write the report to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Directory of corpus images (defaults to the bundled synthetic corpus).
    #[arg(long, value_name = "DIR")]
    corpus: Option<PathBuf>,
    #[command(flatten)]
    id: IdArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Embed(args) => run_embed(args),
        Command::Verify(args) => run_verify(args),
        Command::Attack(args) => run_attack(args),
        Command::Metrics(args) => run_metrics(args),
        Command::Calibrate(args) => run_calibrate(args),
    }
}

fn load(path: &Path) -> Result<RgbImage> {
    io::load_image(path).with_context(|| format!("loading {}", path.display()))
}

fn save(image: &RgbImage, path: &Path) -> Result<()> {
    io::save_image(image, path).with_context(|| format!("writing {}", path.display()))
}

/// Prints a report to stdout and optionally writes it to a file.
fn emit(value: &serde_json::Value, report_path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    println!("{text}");
    if let Some(path) = report_path {
        std::fs::write(path, text + "\n")
            .with_context(|| format!("writing report {}", path.display()))?;
    }
    Ok(())
}

fn run_embed(args: EmbedArgs) -> Result<u8> {
    let device_id = args.id.resolve()?;
    let original = load(&args.input)?;
    let marked = embed(&original, &device_id, args.strategy)?;
    save(&marked.image, &args.output)?;
    Manifest::for_watermarked(&marked).save(&sidecar_path(&args.output))?;
    let quality = QualityReport::compute(&original, &marked.image)?;
    emit(
        &report::metrics_report(
            &args.input.display().to_string(),
            &args.output.display().to_string(),
            &quality,
        ),
        args.report.as_deref(),
    )?;
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let device_id = args.id.resolve()?;
    let image = load(&args.input)?;

    let manifest_path = sidecar_path(&args.input);
    let manifest = if manifest_path.exists() {
        Some(Manifest::load(&manifest_path)?)
    } else {
        None
    };

    let strategy = match (&manifest, args.strategy) {
        (Some(m), Some(flag)) if m.strategy != flag => {
            if args.force {
                eprintln!(
                    "warning: --force overrides manifest strategy {} with {}",
                    m.strategy, flag
                );
                flag
            } else {
                eprintln!(
                    "warning: manifest says strategy {}, ignoring --strategy {} (use --force to override)",
                    m.strategy, flag
                );
                m.strategy
            }
        }
        (Some(m), _) => m.strategy,
        (None, flag) => flag.unwrap_or_default(),
    };

    if let Some(m) = &manifest {
        if !m.matches_device_id(&device_id)? {
            eprintln!(
                "warning: device id does not match the manifest digest; expect widespread flags"
            );
        }
    }

    let tolerance = match (args.tolerance, std::env::var("OICMARK_TOLERANCE")) {
        (Some(t), _) => t,
        (None, Ok(text)) => text
            .trim()
            .parse::<f64>()
            .map_err(|_| anyhow!("OICMARK_TOLERANCE {text:?} is not a number"))?,
        (None, Err(_)) => default_tolerance(strategy),
    };

    let map = verify(&image, &device_id, strategy, tolerance)?;
    let verdict = summarize(&map);
    let digest = oicmark::crypto::device_digest_hex(&device_id)?;
    emit(
        &report::verify_report(
            &args.input.display().to_string(),
            &digest,
            &verdict,
            (map.image_rows(), map.image_cols()),
            (map.total_blocks(), map.full_count(), map.partial_count()),
        ),
        args.report.as_deref(),
    )?;
    Ok(if verdict.tampered { EXIT_TAMPERED } else { EXIT_OK })
}

fn parse_cli_range(value: &str, flag: &str) -> Result<(usize, usize)> {
    let (a, b) = value
        .split_once(':')
        .or_else(|| value.split_once(".."))
        .ok_or_else(|| anyhow!("{flag} must look like 238:241"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("{flag}: bad bound {s:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

/// Builds the attack spec from whichever flag group was used. Presets are
/// clipped to the image; explicit regions must fit exactly.
fn resolve_attack(args: &AttackArgs, image: &RgbImage) -> Result<AttackSpec> {
    if let Some(name) = &args.preset {
        let spec = attack::preset(name).ok_or_else(|| {
            anyhow!(
                "unknown preset {name:?} (available: {})",
                attack::PRESET_NAMES.join(", ")
            )
        })?;
        return Ok(spec.clipped_to(image.height(), image.width())?);
    }
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading attack spec {}", path.display()))?;
        let spec = AttackSpec::parse(&text)?;
        spec.validate_within(image.height(), image.width())?;
        return Ok(spec);
    }
    let channel = args
        .channel
        .ok_or_else(|| anyhow!("one of --preset, --spec or --channel is required"))?;
    let rows = parse_cli_range(
        args.rows.as_deref().ok_or_else(|| anyhow!("--rows is required with --channel"))?,
        "--rows",
    )?;
    let cols = parse_cli_range(
        args.cols.as_deref().ok_or_else(|| anyhow!("--cols is required with --channel"))?,
        "--cols",
    )?;
    let mode = match (args.fill, args.copy_from) {
        (Some(value), None) => AttackMode::ConstantFill { value },
        (None, Some(source)) => AttackMode::CopyChannel { source },
        _ => bail!("exactly one of --fill or --copy-from is required with --channel"),
    };
    let spec = AttackSpec::new(channel, rows, cols, mode)?;
    spec.validate_within(image.height(), image.width())?;
    Ok(spec)
}

fn run_attack(args: AttackArgs) -> Result<u8> {
    let image = load(&args.input)?;
    let spec = resolve_attack(&args, &image)?;
    let attacked = apply_attack(&image, &spec)?;
    save(&attacked, &args.output)?;

    // Keep the provenance record with the tampered copy so `verify` can pick
    // up the strategy: the verifier, not the attacker, owns the sidecar.
    let input_manifest = sidecar_path(&args.input);
    if input_manifest.exists() {
        std::fs::copy(&input_manifest, sidecar_path(&args.output))?;
    }

    let modified = metrics::differing_samples(&image, &attacked)?;
    emit(
        &report::attack_report(
            &args.input.display().to_string(),
            &args.output.display().to_string(),
            &spec,
            modified,
        ),
        args.report.as_deref(),
    )?;
    Ok(EXIT_OK)
}

fn run_metrics(args: MetricsArgs) -> Result<u8> {
    let original = load(&args.original)?;
    if args.sweep {
        let device_id = args.id.resolve()?;
        let mut entries = Vec::new();
        for strategy in SubstitutionStrategy::ALL {
            let marked = embed(&original, &device_id, strategy)?;
            entries.push((strategy, QualityReport::compute(&original, &marked.image)?));
        }
        print!("{}", report::render_sweep(&entries));
        if args.report.is_some() {
            let value = report::sweep_report(&args.original.display().to_string(), &entries);
            let text = serde_json::to_string_pretty(&value).expect("report serializes");
            std::fs::write(args.report.as_ref().unwrap(), text + "\n")?;
        }
        return Ok(EXIT_OK);
    }
    let processed_path = args
        .processed
        .as_ref()
        .ok_or_else(|| anyhow!("a second image is required unless --sweep is given"))?;
    let processed = load(processed_path)?;
    let quality = QualityReport::compute(&original, &processed)?;
    emit(
        &report::metrics_report(
            &args.original.display().to_string(),
            &processed_path.display().to_string(),
            &quality,
        ),
        args.report.as_deref(),
    )?;
    Ok(EXIT_OK)
}

fn run_calibrate(args: CalibrateArgs) -> Result<u8> {
    let device_id = args.id.resolve()?;
    let corpus: Vec<RgbImage> = match &args.corpus {
        Some(dir) => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
                .with_context(|| format!("reading corpus dir {}", dir.display()))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| {
                    matches!(
                        p.extension().and_then(|e| e.to_str()),
                        Some("png" | "bmp" | "jpg" | "jpeg")
                    )
                })
                .collect();
            paths.sort();
            if paths.is_empty() {
                bail!("no images (png/bmp/jpg) found in {}", dir.display());
            }
            paths.iter().map(|p| load(p)).collect::<Result<_>>()?
        }
        None => oicmark::synth::corpus().into_iter().map(|c| c.image).collect(),
    };

    let mut value = serde_json::Map::new();
    value.insert("device_id".into(), serde_json::json!(device_id));
    for strategy in SubstitutionStrategy::ALL {
        let tolerance = calibrate_tolerance(&corpus, &device_id, strategy)?;
        value.insert(strategy.name().into(), serde_json::json!(tolerance));
    }
    println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
    Ok(EXIT_OK)
}
