//! Argument parsing and the four subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqsp_core::circuit::emit_qasm;
use sqsp_core::sqsp::{DenseChoice, SynthesisOptions};
use sqsp_core::McxStrategy;

use crate::bench::{run_bench, write_csv, BenchConfig, Grid};
use crate::error::CliError;
use crate::files::{circuit_to_json, read_spec, spec_to_json, write};
use crate::gen::random_spec;
use crate::run::{run, MetricsReport, Outcome, VerifyPolicy};

#[derive(Debug, Parser)]
#[command(name = "sqsp", version, about = "Sparse quantum state preparation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a circuit for a spec file.
    Synth(SynthArgs),
    /// Synthesize, simulate and compare against the spec.
    Verify(VerifyArgs),
    /// Sweep a grid of random instances and write CSV.
    Bench(BenchArgs),
    /// Write a random spec file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum McxArg {
    #[default]
    Tree,
    Chain,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum DenseArg {
    #[default]
    Auto,
    Multiplexed,
    Onehot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum EmitArg {
    #[default]
    Qasm,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    /// Block arity override.
    #[arg(long)]
    pub r: Option<usize>,
    /// Terms per Phase-1 iteration override (power of two).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub mcx: McxArg,
    #[arg(long, value_enum, default_value_t)]
    pub dense: DenseArg,
}

impl PlanArgs {
    pub fn options(&self) -> SynthesisOptions {
        SynthesisOptions {
            r: self.r,
            k: self.k,
            mcx: match self.mcx {
                McxArg::Tree => McxStrategy::Tree,
                McxArg::Chain => McxStrategy::Chain,
            },
            dense: match self.dense {
                DenseArg::Auto => DenseChoice::Auto,
                DenseArg::Multiplexed => DenseChoice::Multiplexed,
                DenseArg::Onehot => DenseChoice::OneHot,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyFlags {
    /// Skip simulation; structural checks still run.
    #[arg(long, conflicts_with = "force_verify")]
    pub no_verify: bool,
    /// Simulate even above the default size limits.
    #[arg(long)]
    pub force_verify: bool,
}

impl VerifyFlags {
    pub fn policy(&self) -> VerifyPolicy {
        if self.no_verify {
            VerifyPolicy::Never
        } else if self.force_verify {
            VerifyPolicy::Always
        } else {
            VerifyPolicy::Auto
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Spec file (JSON).
    pub spec: PathBuf,
    /// Ancilla budget.
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long, value_enum, default_value_t)]
    pub emit: EmitArg,
    /// Circuit output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metrics JSON path; defaults to `<out>.metrics.json` when `--out` is given.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Emit the logical circuit (Toffoli, MCX and Givens kept as macros).
    #[arg(long)]
    pub logical: bool,
    #[command(flatten)]
    pub verify: VerifyFlags,
    /// Append a fault to the circuit (testing only).
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub spec: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Append a fault to the circuit (testing only).
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',')]
    pub grid_n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub grid_d: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub grid_m: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub verify: VerifyFlags,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn check(outcome: &Outcome) -> Result<(), CliError> {
    if !outcome.structural.is_empty() {
        return Err(CliError::Verify(outcome.structural.join("; ")));
    }
    match &outcome.verify {
        Some(v) if !v.pass => Err(CliError::Verify(format!(
            "max amplitude error {:.3e}, ancillae clean: {}, missing terms: {}",
            v.max_amp_error, v.ancilla_clean, v.missing_terms
        ))),
        _ => Ok(()),
    }
}

fn metrics_path(args: &SynthArgs) -> Option<PathBuf> {
    args.metrics.clone().or_else(|| {
        args.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".metrics.json");
            PathBuf::from(s)
        })
    })
}

pub fn synth(args: &SynthArgs) -> Result<(), CliError> {
    let spec = read_spec(&args.spec)?;
    let outcome = run(&spec, args.m, &args.plan.options(), args.verify.policy(), args.corrupt)?;
    let syn = &outcome.synthesis;
    let circuit = if args.logical {
        syn.circuit.clone()
    } else {
        syn.circuit.decompose(syn.plan.mcx)?
    };
    let text = match args.emit {
        EmitArg::Qasm => emit_qasm(&circuit, args.logical)?,
        EmitArg::Json => circuit_to_json(&circuit),
    };
    emit(args.out.as_deref(), &text)?;
    if let Some(p) = metrics_path(args) {
        let mut json = serde_json::to_string_pretty(&MetricsReport::from(&outcome)).expect("metrics serialize");
        json.push('\n');
        write(&p, &json)?;
    }
    check(&outcome)
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let spec = read_spec(&args.spec)?;
    let outcome = run(&spec, args.m, &args.plan.options(), VerifyPolicy::Always, args.corrupt)?;
    let report = outcome.verify.as_ref().expect("always simulated");
    println!("{}", if report.pass { "PASS" } else { "FAIL" });
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    check(&outcome)
}

pub fn bench(args: &BenchArgs) -> Result<(), CliError> {
    let cfg = BenchConfig {
        grid: Grid {
            n: args.grid_n.clone(),
            d: args.grid_d.clone(),
            m: args.grid_m.clone(),
        },
        seed: args.seed,
        opts: args.plan.options(),
        verify: args.verify.policy(),
    };
    let rows = run_bench(&cfg)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(args.out.as_deref(), std::str::from_utf8(&buf).expect("csv is UTF-8"))?;
    let failed = rows.iter().filter(|r| r.status == "verify_failed").count();
    if failed > 0 {
        return Err(CliError::Verify(format!("{failed} bench cells failed verification")));
    }
    Ok(())
}

pub fn gen(args: &GenArgs) -> Result<(), CliError> {
    let spec = random_spec(args.n, args.d, args.seed)?;
    emit(args.out.as_deref(), &spec_to_json(&spec))
}

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
    }
}
