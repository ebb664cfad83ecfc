use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qagait_core::geometry::{AlignMode, LeanProbe};
use qagait_core::qa::MatchMethod;
use qagait_core::qloss::{Aggregation, PairQuality};
use qagait_core::silcore::Connectivity;
use qagait_pipeline::demo::{loss_demo, DemoParams};
use qagait_pipeline::manifest::{read_manifest, write_manifest, ManifestRow};
use qagait_pipeline::report::Report;
use qagait_pipeline::run::{run_align, run_assess, run_augment};
use qagait_pipeline::templates::write_templates;
use qagait_pipeline::{scan_dataset, PipelineError, Result, RunConfig, TemplateSource};

#[derive(Parser)]
#[command(name = "qagait", version, about = "Silhouette quality assessment, alignment and loss tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter frames by largest-component share and template distance.
    Assess(AssessArgs),
    /// Rotate kept frames upright and normalize them.
    Align(AlignArgs),
    /// Apply sequence-level flip, lean-aware rotation and erasing.
    Augment(AugmentArgs),
    /// Summarize a manifest.
    Report {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Write the procedural template set.
    GenTemplates {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run both losses on a synthetic batch and check their gradients.
    LossDemo(DemoArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory levels below the root that hold the frames.
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Args)]
struct AssessArgs {
    #[arg(long)]
    input: PathBuf,
    /// Template directory, or `fixture` for the built-in set.
    #[arg(long, default_value = "fixture")]
    templates: String,
    #[arg(long, default_value_t = 0.95)]
    eps: f64,
    #[arg(long, default_value_t = 0.001)]
    tau: f64,
    #[arg(long, default_value_t = 15)]
    min_frames: usize,
    #[arg(long, default_value_t = 8)]
    connectivity: u8,
    #[arg(long, value_enum, default_value_t = MethodArg::I1)]
    method: MethodArg,
    #[arg(long)]
    no_retention: bool,
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AlignArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Sequence)]
    mode: ModeArg,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 64)]
    height: usize,
    #[arg(long, default_value_t = 44)]
    width: usize,
    #[arg(long, default_value_t = 8)]
    connectivity: u8,
    #[arg(long)]
    output: PathBuf,
    /// Where to write the updated manifest; defaults to OUTPUT/manifest.csv.
    #[arg(long)]
    manifest_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AugmentArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    p_hflip: f64,
    #[arg(long, default_value_t = 0.3)]
    p_rotate: f64,
    #[arg(long, default_value_t = 10.0)]
    rotate_max: f64,
    #[arg(long, default_value_t = 0.3)]
    p_erase: f64,
    #[arg(long, default_value_t = 0.5)]
    lean_proportion: f64,
    #[arg(long, value_enum, default_value_t = ProbeArg::Middle)]
    lean_probe: ProbeArg,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    batch_n: usize,
    #[arg(long, default_value_t = 32)]
    dim: usize,
    #[arg(long, default_value_t = 16)]
    parts: usize,
    #[arg(long, default_value_t = 4)]
    classes: usize,
    #[arg(long, default_value_t = 0.1)]
    m1: f64,
    #[arg(long, default_value_t = 8.0)]
    scale: f64,
    #[arg(long, default_value_t = 0.15)]
    m2: f64,
    #[arg(long, value_enum, default_value_t = AggArg::Avg)]
    aggregation: AggArg,
    #[arg(long, value_enum, default_value_t = PairArg::Min)]
    pair_quality: PairArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    I1,
    I2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sequence,
    Frame,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeArg {
    Middle,
    Majority,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggArg {
    Sum,
    Min,
    Avg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Min,
    Avg,
}

fn connectivity(n: u8) -> Result<Connectivity> {
    Connectivity::from_neighbors(n).ok_or_else(|| PipelineError::Usage(format!("connectivity must be 4 or 8, got {n}")))
}

fn base_config(common: &Common) -> RunConfig {
    RunConfig {
        workers: common.workers,
        seed: common.seed,
        depth: common.depth,
        ..RunConfig::default()
    }
}

fn save_manifest(path: &Path, rows: &[ManifestRow]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| PipelineError::io(path, e))?;
    write_manifest(BufWriter::new(file), rows)
}

fn load_manifest(path: &Path) -> Result<Vec<ManifestRow>> {
    let file = fs::File::open(path).map_err(|e| PipelineError::io(path, e))?;
    read_manifest(file)
}

fn assess(a: AssessArgs) -> Result<()> {
    let mut cfg = base_config(&a.common);
    cfg.qa.eps = a.eps;
    cfg.qa.tau = a.tau;
    cfg.qa.min_frames = a.min_frames;
    cfg.qa.connectivity = connectivity(a.connectivity)?;
    cfg.qa.method = match a.method {
        MethodArg::I1 => MatchMethod::I1,
        MethodArg::I2 => MatchMethod::I2,
    };
    cfg.qa.retention = !a.no_retention;
    cfg.templates = TemplateSource::parse(&a.templates);
    cfg.validate()?;
    let scan = scan_dataset(&a.input, cfg.depth)?;
    if scan.sequences.is_empty() {
        return Err(PipelineError::Empty(format!("no sequences under {}", a.input.display())));
    }
    let templates = cfg.templates.load()?;
    let out = run_assess(&a.input, &scan.sequences, &cfg, &templates, a.output.as_deref())?;
    save_manifest(&a.manifest, &out.rows)?;
    let kept = out.rows.iter().filter(|r| r.verdict.is_kept()).count();
    println!(
        "assessed {} frames in {} sequences: {} kept, {} removed",
        out.rows.len(),
        scan.sequences.len(),
        kept,
        out.rows.len() - kept
    );
    Ok(())
}

fn align(a: AlignArgs) -> Result<()> {
    let mut cfg = base_config(&a.common);
    cfg.align.mode = match a.mode {
        ModeArg::Sequence => AlignMode::SequenceLevel,
        ModeArg::Frame => AlignMode::FrameLevel,
    };
    cfg.align.theta = a.theta;
    cfg.align.height = a.height;
    cfg.align.width = a.width;
    cfg.qa.connectivity = connectivity(a.connectivity)?;
    cfg.validate()?;
    let manifest = load_manifest(&a.manifest)?;
    if !manifest.iter().any(|r| r.verdict.is_kept()) {
        return Err(PipelineError::Empty("manifest has no kept frames".into()));
    }
    let out = run_align(&a.input, &manifest, &cfg, &a.output)?;
    let dest = a.manifest_out.unwrap_or_else(|| a.output.join("manifest.csv"));
    save_manifest(&dest, &out.rows)?;
    let aligned = out.rows.iter().filter(|r| r.align_angle_deg.is_some()).count();
    println!("aligned {aligned} frames; manifest written to {}", dest.display());
    Ok(())
}

fn augment(a: AugmentArgs) -> Result<()> {
    let mut cfg = base_config(&a.common);
    cfg.aug.p_hflip = a.p_hflip;
    cfg.aug.p_rotate = a.p_rotate;
    cfg.aug.rotate_max = a.rotate_max;
    cfg.aug.p_erase = a.p_erase;
    cfg.aug.lean_proportion = a.lean_proportion;
    cfg.aug.lean_probe = match a.lean_probe {
        ProbeArg::Middle => LeanProbe::Middle,
        ProbeArg::Majority => LeanProbe::Majority,
    };
    cfg.validate()?;
    let scan = scan_dataset(&a.input, cfg.depth)?;
    if scan.sequences.is_empty() {
        return Err(PipelineError::Empty(format!("no sequences under {}", a.input.display())));
    }
    let (records, _) = run_augment(&a.input, &scan.sequences, &cfg, &a.output)?;
    for r in &records {
        let rot = r.rotation.map_or_else(|| "none".to_string(), |v| format!("{v:.2}"));
        println!(
            "{} frames={} flipped={} lean={:?} rotation={} erased={}",
            r.seq_path, r.frames, r.flipped, r.lean, rot, r.erased
        );
    }
    Ok(())
}

fn demo(a: DemoArgs) -> Result<()> {
    let params = DemoParams {
        seed: a.seed,
        n: a.batch_n,
        dim: a.dim,
        parts: a.parts,
        classes: a.classes,
        m1: a.m1,
        scale: a.scale,
        m2: a.m2,
        aggregation: match a.aggregation {
            AggArg::Sum => Aggregation::SumPartial,
            AggArg::Min => Aggregation::MinPartial,
            AggArg::Avg => Aggregation::AvgPartial,
        },
        pair_quality: match a.pair_quality {
            PairArg::Min => PairQuality::MinQualityPair,
            PairArg::Avg => PairQuality::AvgQualityPair,
        },
    };
    print!("{}", loss_demo(&params)?.render());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Assess(a) => assess(a),
        Command::Align(a) => align(a),
        Command::Augment(a) => augment(a),
        Command::Report { manifest } => {
            let report = Report::from_rows(&load_manifest(&manifest)?)?;
            print!("{}", report.render());
            Ok(())
        }
        Command::GenTemplates { output, seed } => {
            let n = write_templates(&output, seed)?;
            println!("wrote {n} templates to {}", output.display());
            Ok(())
        }
        Command::LossDemo(a) => demo(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QAGAIT_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
