//! Batch command-line front end for the Tucker decomposition toolkit.
//!
//! Subcommands: `synth`, `decompose`, `info`, `error`, `convert`, `bench`.
//! Exit codes: 0 success, 1 usage error, 2 IO/format error, 3 numeric
//! failure. Summary lines are stable, machine-parseable contracts; see the
//! repository README.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use tucker_core::bench::{bench_rows_to_csv, run_bench, BenchSpec};
use tucker_core::io;
use tucker_core::synth::{generate, SynthKind, SynthSpec};
use tucker_core::{
    decompose, rel_error_exact, DecomposeConfig, GradVariant, Init, Method, TuckerError,
};

#[derive(Parser)]
#[command(
    name = "tucker",
    version,
    about = "Dense Tucker decomposition: preconditioned coordinate descent, HOOI/HOSVD baselines, synthetic data and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic tensor and write it as .dten
    Synth(SynthArgs),
    /// Decompose a .dten tensor with the chosen method
    Decompose(DecomposeArgs),
    /// Print dims, order and Frobenius norm of a .dten tensor
    Info(InfoArgs),
    /// Recompute the exact relative error of a stored model
    Error(ErrorArgs),
    /// Wrap a raw little-endian f64 payload into a .dten file
    Convert(ConvertArgs),
    /// Time methods on freshly seeded synthetic instances
    Bench(BenchArgs),
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::from_str(s).map_err(|e| e.to_string())
}

fn parse_init(s: &str) -> Result<Init, String> {
    Init::from_str(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<SynthKind, String> {
    SynthKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_grad_variant(s: &str) -> Result<GradVariant, String> {
    GradVariant::from_str(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct SynthArgs {
    /// Tensor dimensions, comma separated (e.g. 100,100,100)
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Multilinear ranks, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    ranks: Vec<usize>,
    /// lowrank | noisy
    #[arg(long, value_parser = parse_kind)]
    kind: SynthKind,
    /// Noise coefficient for the noisy kind
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long)]
    seed: u64,
    /// Output .dten path
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    ranks: Vec<usize>,
    /// rpcd | rpcd-plus | hooi | hosvd | st-hosvd | euclid-cd
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Step size (default: 1.0; euclid-cd estimates an inverse Lipschitz
    /// step per mode when unset)
    #[arg(long)]
    step: Option<f64>,
    /// Stopping threshold on the relative-error delta
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Inner-loop threshold for rpcd-plus; "auto" resolves to eps/10
    #[arg(long = "eps-inner", default_value = "auto")]
    eps_inner: String,
    #[arg(long = "max-iter", default_value_t = 100)]
    max_iter: usize,
    /// eye | random | hosvd
    #[arg(long, value_parser = parse_init, default_value = "random")]
    init: Init,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// literal | metric form of the preconditioned gradient
    #[arg(long = "grad-variant", value_parser = parse_grad_variant, default_value = "literal")]
    grad_variant: GradVariant,
    /// Write the per-update convergence trace as CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write core.dten and factor_i.dten into this directory
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ErrorArgs {
    #[arg(long)]
    input: PathBuf,
    /// Model directory written by decompose --out-dir
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct ConvertArgs {
    /// Raw payload: 8 * prod(dims) bytes of little-endian f64
    #[arg(long)]
    raw: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    ranks: Vec<usize>,
    /// Methods to compare, comma separated
    #[arg(long, value_delimiter = ',', value_parser = parse_method, required = true)]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    repeat: usize,
    /// Instance kind: lowrank | noisy
    #[arg(long, value_parser = parse_kind, default_value = "lowrank")]
    kind: SynthKind,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    /// Output CSV path
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

struct CliError {
    code: u8,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError {
        code: 1,
        message: e.to_string(),
    }
}

fn io_failure(e: impl std::fmt::Display) -> CliError {
    CliError {
        code: 2,
        message: e.to_string(),
    }
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError {
        code: 3,
        message: e.to_string(),
    }
}

/// Errors raised while running a decomposition: configuration slips are
/// usage errors, everything else is a numeric failure.
fn compute_failure(e: TuckerError) -> CliError {
    match e {
        TuckerError::InvalidArgument(_) | TuckerError::ShapeMismatch(_) => usage(e),
        other => numeric(other),
    }
}

fn join_dims(dims: &[usize]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e);
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Synth(a) => cmd_synth(a),
        Cmd::Decompose(a) => cmd_decompose(a),
        Cmd::Info(a) => cmd_info(a),
        Cmd::Error(a) => cmd_error(a),
        Cmd::Convert(a) => cmd_convert(a),
        Cmd::Bench(a) => cmd_bench(a),
    }
}

fn cmd_synth(a: SynthArgs) -> Result<(), CliError> {
    let mut spec = SynthSpec::new(a.dims, a.ranks, a.kind, a.seed);
    spec.noise = a.noise;
    spec.validate().map_err(usage)?;
    let t = generate(&spec).map_err(numeric)?;
    io::write_dten(&a.out, &t).map_err(io_failure)?;
    println!("dims={} norm={}", join_dims(t.dims()), t.frobenius_norm());
    Ok(())
}

fn cmd_decompose(a: DecomposeArgs) -> Result<(), CliError> {
    let eps_inner = match a.eps_inner.as_str() {
        "auto" => None,
        s => Some(
            s.parse::<f64>()
                .map_err(|e| usage(format!("--eps-inner: {}", e)))?,
        ),
    };
    let x = io::read_dten(&a.input).map_err(io_failure)?;

    let mut cfg = DecomposeConfig::new(a.ranks, a.method);
    cfg.alpha = a.step;
    cfg.eps = a.eps;
    cfg.eps_inner = eps_inner;
    cfg.max_iter = a.max_iter;
    cfg.init = a.init;
    cfg.seed = a.seed;
    cfg.grad_variant = a.grad_variant;
    cfg.validate(x.dims()).map_err(usage)?;

    let (model, trace) = decompose(&x, &cfg).map_err(compute_failure)?;

    if let Some(path) = &a.trace {
        io::write_trace_csv(path, &trace).map_err(io_failure)?;
    }
    if let Some(dir) = &a.out_dir {
        io::write_model(dir, &model).map_err(io_failure)?;
    }
    println!(
        "final_rel_err={} iters={} elapsed_s={}",
        trace.final_rel_err, trace.iterations, trace.work_s
    );
    Ok(())
}

fn cmd_info(a: InfoArgs) -> Result<(), CliError> {
    let t = io::read_dten(&a.input).map_err(io_failure)?;
    println!(
        "dims={} order={} norm={}",
        join_dims(t.dims()),
        t.order(),
        t.frobenius_norm()
    );
    Ok(())
}

fn cmd_error(a: ErrorArgs) -> Result<(), CliError> {
    let x = io::read_dten(&a.input).map_err(io_failure)?;
    let model = io::read_model(&a.model).map_err(io_failure)?;
    // a dims mismatch between stored artifacts is a data problem, not usage
    let rel = rel_error_exact(&x, &model).map_err(io_failure)?;
    println!("rel_err={}", rel);
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> Result<(), CliError> {
    if a.dims.contains(&0) {
        return Err(usage("dims must be positive"));
    }
    let t = io::import_raw(&a.raw, &a.dims).map_err(io_failure)?;
    io::write_dten(&a.out, &t).map_err(io_failure)?;
    println!("dims={} norm={}", join_dims(t.dims()), t.frobenius_norm());
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    if a.repeat == 0 {
        return Err(usage("--repeat must be at least 1"));
    }
    let mut probe = SynthSpec::new(a.dims.clone(), a.ranks.clone(), a.kind, a.seed);
    probe.noise = a.noise;
    probe.validate().map_err(usage)?;

    let mut spec = BenchSpec::new(a.dims, a.ranks, a.seed, a.repeat, a.methods);
    spec.kind = a.kind;
    spec.noise = a.noise;
    let rows = run_bench(&spec).map_err(compute_failure)?;
    let csv = bench_rows_to_csv(&rows);
    std::fs::write(&a.out, &csv).map_err(io_failure)?;
    for row in &rows {
        println!(
            "method={} mean_elapsed_s={} mean_rel_err={} repeats={}",
            row.method, row.mean_elapsed_s, row.mean_rel_err, row.repeats
        );
    }
    Ok(())
}
