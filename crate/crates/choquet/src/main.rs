//! Command-line surface: numerical-range sweeps, boundary classification,
//! periodic-shift verification and block decomposition.
//!
//! Exit codes: 0 success, 1 input error, 2 numeric failure, 3 verdict
//! undetermined.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use choquet::classify::{self, EnvelopeShape, OperatorDescriptor, UnitarySpectrum};
use choquet::config::ToleranceConfig;
use choquet::linalg::CMatrix;
use choquet::report::{self, ReportDocument};
use choquet::shifts;
use choquet::structure;
use choquet::{numrange, ClassifyError};

#[derive(Parser)]
#[command(
    name = "choquet",
    version,
    about = "Numerical ranges and C*-envelope verdicts for operator systems Span{1, T, T*}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the numerical range of a finite-dimensional operator and emit
    /// the polygon (CSV by default) plus its numerical radius.
    Numrange(CommonArgs),
    /// Classify boundary representations and assemble the envelope verdict.
    Classify(CommonArgs),
    /// Run the periodic-shift evidence suite on a periodic_shift descriptor.
    ShiftVerify(CommonArgs),
    /// Decompose a matrix into irreducible direct summands.
    Decompose(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input descriptor file (JSON).
    file: PathBuf,
    /// Number of sweep angles.
    #[arg(long, default_value_t = 720)]
    angles: u32,
    /// Seed for randomized searches.
    #[arg(long)]
    seed: Option<u64>,
    /// Geometric membership tolerance.
    #[arg(long, value_name = "X")]
    tol_hull: Option<f64>,
    /// Eigensolver and rank tolerance.
    #[arg(long, value_name = "X")]
    tol_eig: Option<f64>,
    /// λ-grid size for periodic-shift checks.
    #[arg(long, default_value_t = 360)]
    grid: usize,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum RunError {
    Input(String),
    Numeric(String),
    Undetermined,
}

impl From<ClassifyError> for RunError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::UnsupportedDescriptor { .. }
            | ClassifyError::InvalidDescriptor { .. }
            | ClassifyError::ScalarOperator
            | ClassifyError::NotScalarBlock { .. } => RunError::Input(e.to_string()),
            ClassifyError::Linalg(choquet::linalg::LinalgError::DimensionLimit { .. }) => {
                RunError::Input(e.to_string())
            }
            other => RunError::Numeric(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Numrange(args) => run_numrange(&args),
        Command::Classify(args) => run_classify(&args),
        Command::ShiftVerify(args) => run_shift_verify(&args),
        Command::Decompose(args) => run_decompose(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Undetermined) => {
            eprintln!("verdict undetermined; see the report for diagnostics");
            ExitCode::from(3)
        }
    }
}

fn config_from(args: &CommonArgs) -> Result<ToleranceConfig, RunError> {
    let mut cfg = ToleranceConfig {
        angle_count: args.angles,
        ..ToleranceConfig::default()
    };
    if let Some(s) = args.seed {
        cfg.rng_seed = s;
    }
    if let Some(x) = args.tol_hull {
        cfg.eps_hull = x;
    }
    if let Some(x) = args.tol_eig {
        cfg.eps_eig = x;
    }
    cfg.validate().map_err(RunError::Input)?;
    Ok(cfg)
}

fn read_descriptor(args: &CommonArgs) -> Result<OperatorDescriptor, RunError> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| RunError::Input(format!("{}: {e}", args.file.display())))?;
    report::parse_descriptor(&text).map_err(|e| RunError::Input(e.to_string()))
}

fn write_output(args: &CommonArgs, content: &str) -> Result<(), RunError> {
    match &args.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| RunError::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| if content.ends_with('\n') {
                    Ok(())
                } else {
                    stdout.write_all(b"\n")
                })
                .map_err(|e| RunError::Numeric(format!("stdout: {e}")))
        }
    }
}

/// Materializes descriptors that stand for finite matrices.
fn require_matrix(d: &OperatorDescriptor) -> Result<CMatrix, RunError> {
    match d {
        OperatorDescriptor::Matrix { data } => Ok(data.clone()),
        OperatorDescriptor::FiniteShift { weights } => {
            Ok(classify::finite_shift_matrix(weights))
        }
        OperatorDescriptor::Normal { eigenvalues } => Ok(CMatrix::diag(eigenvalues)),
        OperatorDescriptor::Unitary {
            spectrum: UnitarySpectrum::FiniteSet(pts),
        } => Ok(CMatrix::diag(pts)),
        OperatorDescriptor::DirectSum { blocks } => {
            let mats = blocks
                .iter()
                .map(require_matrix)
                .collect::<Result<Vec<_>, _>>()?;
            choquet::linalg::direct_sum(&mats).map_err(|e| RunError::Input(e.to_string()))
        }
        other => Err(RunError::Input(format!(
            "this command needs a finite-dimensional operator, got {}",
            descriptor_kind(other)
        ))),
    }
}

fn descriptor_kind(d: &OperatorDescriptor) -> &'static str {
    match d {
        OperatorDescriptor::Matrix { .. } => "matrix",
        OperatorDescriptor::DirectSum { .. } => "direct_sum",
        OperatorDescriptor::FiniteShift { .. } => "finite_shift",
        OperatorDescriptor::PeriodicShift { .. } => "periodic_shift",
        OperatorDescriptor::UnilateralShift => "unilateral_shift",
        OperatorDescriptor::Unitary { .. } => "unitary",
        OperatorDescriptor::Normal { .. } => "normal",
    }
}

fn run_numrange(args: &CommonArgs) -> Result<(), RunError> {
    let cfg = config_from(args)?;
    let d = read_descriptor(args)?;
    classify::validate_descriptor(&d).map_err(RunError::from)?;
    let t = require_matrix(&d)?;
    t.check_dim_limit()
        .map_err(|e| RunError::Input(e.to_string()))?;
    let nr = numrange::numrange_sweep(&t, &cfg).map_err(|e| RunError::Numeric(e.to_string()))?;
    match args.format {
        Format::Csv => {
            eprintln!("radius = {:.12e}", nr.radius);
            write_output(args, &report::emit_polygon_csv(&nr))
        }
        Format::Json => write_output(args, &report::to_json_precise(&nr)),
    }
}

fn run_classify(args: &CommonArgs) -> Result<(), RunError> {
    if args.format == Format::Csv {
        return Err(RunError::Input(
            "classify emits JSON reports; use --format json".to_string(),
        ));
    }
    let cfg = config_from(args)?;
    let d = read_descriptor(args)?;
    let (statuses, verdict) = classify::classify_descriptor(&d, &cfg).map_err(RunError::from)?;
    let undetermined = verdict.shape == EnvelopeShape::Undetermined;
    let doc = ReportDocument::new(d, &cfg, statuses, verdict);
    write_output(args, &report::emit_report(&doc))?;
    if undetermined {
        return Err(RunError::Undetermined);
    }
    Ok(())
}

#[derive(Serialize)]
struct ShiftVerifyDocument {
    tool: String,
    version: String,
    spec: shifts::PeriodicShiftSpec,
    tolerances: ToleranceConfig,
    grid: usize,
    evidence: shifts::ShiftEvidence,
    verdict: choquet::EnvelopeVerdict,
}

fn run_shift_verify(args: &CommonArgs) -> Result<(), RunError> {
    if args.format == Format::Csv {
        return Err(RunError::Input(
            "shift-verify emits JSON reports; use --format json".to_string(),
        ));
    }
    let cfg = config_from(args)?;
    let d = read_descriptor(args)?;
    let OperatorDescriptor::PeriodicShift { weights } = &d else {
        return Err(RunError::Input(format!(
            "shift-verify needs a periodic_shift descriptor, got {}",
            descriptor_kind(&d)
        )));
    };
    let spec = shifts::normalize_spec(weights).map_err(|e| RunError::Input(e.to_string()))?;
    // The λ-grid flag drives an explicit constancy check at the requested
    // resolution on top of the verdict's own evidence.
    let constancy = shifts::radius_constancy_check(&spec, args.grid, &cfg)
        .map_err(|e| RunError::Numeric(e.to_string()))?;
    let (verdict, mut evidence) = shifts::periodic_envelope_verdict(&spec, &cfg)
        .map_err(|e| RunError::Numeric(e.to_string()))?;
    evidence.radius_constancy = Some(constancy);
    let undetermined = verdict.shape == EnvelopeShape::Undetermined;
    let doc = ShiftVerifyDocument {
        tool: "choquet".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        spec,
        tolerances: cfg,
        grid: args.grid,
        evidence,
        verdict,
    };
    write_output(args, &report::to_json_precise(&doc))?;
    if undetermined {
        return Err(RunError::Undetermined);
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeDocument {
    tool: String,
    version: String,
    tolerances: ToleranceConfig,
    dimension: usize,
    decomposition: structure::BlockDecomposition,
}

fn run_decompose(args: &CommonArgs) -> Result<(), RunError> {
    if args.format == Format::Csv {
        return Err(RunError::Input(
            "decompose emits JSON reports; use --format json".to_string(),
        ));
    }
    let cfg = config_from(args)?;
    let d = read_descriptor(args)?;
    classify::validate_descriptor(&d).map_err(RunError::from)?;
    let t = require_matrix(&d)?;
    t.check_dim_limit()
        .map_err(|e| RunError::Input(e.to_string()))?;
    let decomposition = structure::decompose_irreducible(&t, &cfg)
        .map_err(|e| RunError::Numeric(e.to_string()))?;
    let doc = DecomposeDocument {
        tool: "choquet".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        tolerances: cfg,
        dimension: t.dim(),
        decomposition,
    };
    write_output(args, &report::to_json_precise(&doc))
}
