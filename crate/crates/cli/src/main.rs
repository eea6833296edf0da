//! `ctrlexpr` — decide pure-state / operator controllability of a qubit
//! array described in a spec file.
//!
//! Exit codes: 0 controllable, 1 not controllable, 2 inconclusive,
//! 64 usage error, 65 malformed spec, 66 unreadable input, 70 engine error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use ctrlexpr::{
    density_matrix, generate_algebra, pure_state_orbit_dimension, run_test, Outcome, ScanRole,
    StateVector, TestKind, Verdict, DEFAULT_RESIDUAL_TOL,
};

use ctrlexpr_cli::report::{OracleReport, Report};
use ctrlexpr_cli::spec_file::{SpecError, SystemSpec};

const EXIT_USAGE: u8 = 64;
const EXIT_BAD_SPEC: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_ENGINE: u8 = 70;

#[derive(Parser)]
#[command(
    name = "ctrlexpr",
    version,
    about = "Controllability tests for driven qubit arrays via dimensional expressivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the controllability test described by a spec file.
    Test {
        /// Path to the system description (TOML; see specs/ for examples).
        spec: PathBuf,
        /// Also run the brute-force Lie-algebra oracle and report agreement.
        #[arg(long)]
        oracle: bool,
        /// Override the seed from the spec file.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full JSON report to this path.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Print the per-slot rank trace of the decisive scan.
        #[arg(long)]
        trace: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = err.print();
                    return ExitCode::SUCCESS;
                }
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    init_thread_pool();

    match cli.command {
        Command::Test {
            spec,
            oracle,
            seed,
            json,
            trace,
        } => match run(&spec, oracle, seed, json.as_deref(), trace) {
            Ok(code) => ExitCode::from(code),
            Err(err) => {
                eprintln!("ctrlexpr: {err:#}");
                ExitCode::from(exit_code_for(&err))
            }
        },
    }
}

/// Honor CTRL_EXPR_THREADS as a cap on worker parallelism.
fn init_thread_pool() {
    if let Ok(raw) = std::env::var("CTRL_EXPR_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("ctrlexpr: ignoring invalid CTRL_EXPR_THREADS={raw:?}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("engine error: {0}")]
    Engine(#[from] ctrlexpr::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

fn exit_code_for(err: &CliError) -> u8 {
    match err {
        CliError::Spec(SpecError::Io { .. }) => EXIT_NO_INPUT,
        CliError::Spec(_) => EXIT_BAD_SPEC,
        CliError::Engine(_) => EXIT_ENGINE,
        CliError::Write { .. } => EXIT_NO_INPUT,
    }
}

fn run(
    spec_path: &std::path::Path,
    with_oracle: bool,
    seed_override: Option<u64>,
    json_path: Option<&std::path::Path>,
    trace: bool,
) -> Result<u8, CliError> {
    let started = Instant::now();
    let mut spec = SystemSpec::load(spec_path)?;
    if let Some(seed) = seed_override {
        spec.test.seed = seed;
    }
    let system = spec.to_system()?;
    let config = spec.to_config();

    let test_started = Instant::now();
    let verdict = run_test(&system, &config)?;
    let test_ms = test_started.elapsed().as_secs_f64() * 1e3;

    print_summary(&spec, spec_path, &verdict);
    if trace {
        print_trace(&verdict);
    }

    let mut report = Report::new(spec_path.display().to_string(), spec, verdict);
    report.timings.test_ms = test_ms;

    if with_oracle {
        let oracle_started = Instant::now();
        let oracle = run_oracle(&system, config.test_type, &report.verdict)?;
        report.timings.oracle_ms = Some(oracle_started.elapsed().as_secs_f64() * 1e3);
        print_oracle(&oracle, config.test_type);
        report.oracle = Some(oracle);
    }

    report.timings.total_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = json_path {
        std::fs::write(path, report.to_json()).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?;
    }

    Ok(report.exit_code())
}

fn print_summary(spec: &SystemSpec, path: &std::path::Path, verdict: &Verdict) {
    let controls: Vec<&str> = spec.controls.iter().map(|c| c.pauli.as_str()).collect();
    println!(
        "spec: {} ({} qubits, {} controls: {})",
        path.display(),
        spec.qubits,
        spec.controls.len(),
        controls.join(", ")
    );
    println!(
        "test: {} seed {} tolerance {:e} layers {}",
        verdict.test_type, verdict.seed, spec.test.tolerance, verdict.layers_used
    );
    println!("verdict: {}", verdict.outcome);
    println!(
        "expressivity {}/{}",
        verdict.best_expressivity, verdict.expressivity_target
    );
    println!("layers used: {}", verdict.layers_used);
    if let Some(layer) = verdict.saturation_layer {
        println!("saturation layer: {layer}");
    }
    let resamples = verdict
        .scans
        .iter()
        .filter(|s| s.role == ScanRole::Resample)
        .count();
    println!(
        "scans: {} primary, {} resamples",
        verdict.scans.len() - resamples,
        resamples
    );
}

fn print_trace(verdict: &Verdict) {
    let Some(decisive) = verdict
        .scans
        .iter()
        .rev()
        .find(|s| s.role == ScanRole::Primary)
    else {
        return;
    };
    let scan = &decisive.scan;
    let mut prev = 0usize;
    for (slot, &rank) in scan.rank_trace.iter().enumerate() {
        let status = if rank > prev {
            "independent"
        } else {
            "redundant"
        };
        println!("trace: slot {slot:3} rank {rank:3} {status}");
        prev = rank;
    }
}

fn run_oracle(
    system: &ctrlexpr::ControlSystem,
    test_type: TestKind,
    verdict: &Verdict,
) -> Result<OracleReport, CliError> {
    let d = system.dim();
    let basis = generate_algebra(system, DEFAULT_RESIDUAL_TOL)?;
    let lie_dim = basis.dim();
    let operator_controllable = lie_dim == d * d - 1;

    let (pure_state_orbit_dim, pure_state_bound, controllable) = match test_type {
        TestKind::Operator => (None, None, operator_controllable),
        TestKind::PureState => {
            let rho0 = density_matrix(&StateVector::computational_zero(d));
            let orbit = pure_state_orbit_dimension(system, &rho0, DEFAULT_RESIDUAL_TOL)?;
            (Some(orbit), Some(2 * d - 2), orbit == 2 * d - 2)
        }
    };

    let agrees_with_verdict = match verdict.outcome {
        Outcome::Inconclusive => None,
        outcome => Some((outcome == Outcome::Controllable) == controllable),
    };

    Ok(OracleReport {
        lie_algebra_dim: lie_dim,
        lie_algebra_bound: d * d - 1,
        operator_controllable,
        pure_state_orbit_dim,
        pure_state_bound,
        controllable,
        agrees_with_verdict,
    })
}

fn print_oracle(oracle: &OracleReport, test_type: TestKind) {
    println!(
        "oracle: dim(L) = {}/{} -> {}operator controllable",
        oracle.lie_algebra_dim,
        oracle.lie_algebra_bound,
        if oracle.operator_controllable {
            ""
        } else {
            "not "
        }
    );
    if test_type == TestKind::PureState {
        if let (Some(orbit), Some(bound)) = (oracle.pure_state_orbit_dim, oracle.pure_state_bound) {
            println!(
                "oracle: state orbit dim = {orbit}/{bound} -> {}pure-state controllable",
                if oracle.controllable { "" } else { "not " }
            );
        }
    }
    match oracle.agrees_with_verdict {
        Some(true) => println!("oracle agreement: yes"),
        Some(false) => println!("oracle agreement: NO"),
        None => println!("oracle agreement: n/a (inconclusive run)"),
    }
}
