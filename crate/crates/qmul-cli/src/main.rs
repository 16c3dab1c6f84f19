//! `qmul` — build, verify, and cost quantum plus-equal multipliers.
//!
//! Subcommands:
//!
//! * `estimate` — one (algorithm, bit-size, platform) cell: tally the
//!   circuit with a counting sink (no gate list is materialised), run the
//!   physical-resource model, print one table row.
//! * `sweep` — a whole grid of cells, one row per
//!   (algorithm, n, platform), sorted and rendered deterministically;
//!   per-cell model failures land in the `error` column instead of
//!   aborting the grid.
//! * `verify` — simulate the circuit classically against the big-integer
//!   oracle, exhaustively or on seeded random samples.
//! * `presets` — the built-in platform parameter table.
//!
//! Exit codes: 0 success, 1 model failure (or verification
//! counterexamples), 2 usage error.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use output::{sort_rows, write_csv, write_json, Row};
use qmul::builders::{
    default_qc_constant, tally_multiplier, Algorithm, MultiplySpec, OperandMode, WindowSize,
};
use qmul::circuit::CircuitTally;
use qmul::config::EstimatorConfig;
use qmul::error::{Error, Result};
use qmul::platform::{self, QubitParams, PRESET_NAMES};
use qmul::qec::{self, ErrorBudget, SchemeKind};
use qmul::sim::{verify_multiplier, VerifyStrategy};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Schoolbook,
    Karatsuba,
    Windowed,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Schoolbook => Algorithm::Schoolbook,
            AlgoArg::Karatsuba => Algorithm::Karatsuba,
            AlgoArg::Windowed => Algorithm::Windowed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Quantum register × classical constant.
    Qc,
    /// Quantum register × quantum register.
    Qq,
}

impl From<ModeArg> for OperandMode {
    fn from(m: ModeArg) -> OperandMode {
        match m {
            ModeArg::Qc => OperandMode::Qc,
            ModeArg::Qq => OperandMode::Qq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeArg {
    Surface,
    Floquet,
}

impl From<CodeArg> for SchemeKind {
    fn from(c: CodeArg) -> SchemeKind {
        match c {
            CodeArg::Surface => SchemeKind::Surface,
            CodeArg::Floquet => SchemeKind::Floquet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct CircuitFlags {
    /// Operand mode of the multiplication a += b·c
    #[arg(long, value_enum, default_value_t = ModeArg::Qc)]
    mode: ModeArg,
    /// Window width in bits for the windowed algorithm (default: chosen
    /// automatically to minimise Toffoli count)
    #[arg(long)]
    window: Option<u32>,
    /// Bit-width at or below which the Karatsuba builder switches to the
    /// schoolbook base case
    #[arg(long)]
    threshold: Option<u32>,
    /// Decimal value of the classical constant c (qc mode only; default:
    /// a deterministic per-n pseudorandom constant)
    #[arg(long = "c-value")]
    c_value: Option<String>,
}

#[derive(Args, Debug)]
struct ModelFlags {
    /// Error-correction code (default: floquet on Majorana platforms,
    /// surface elsewhere)
    #[arg(long, value_enum)]
    code: Option<CodeArg>,
    /// Total error budget for the whole run (overrides the config file)
    #[arg(long)]
    budget: Option<f64>,
    /// Configuration file overriding scheme constants, budget shares,
    /// cycle-cost coefficients, or preset fields
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputFlags {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write the table to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "qmul",
    version,
    about = "Resource estimator and verifier for quantum plus-equal multipliers"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Estimate physical resources for one (algorithm, bit-size, platform) cell
    Estimate(EstimateArgs),
    /// Estimate a grid of cells and emit one table row per cell
    Sweep(SweepArgs),
    /// Simulate a circuit classically and check it against exact arithmetic
    Verify(VerifyArgs),
    /// List the built-in qubit platform presets
    Presets(PresetsArgs),
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Multiplication algorithm
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Bits per input factor (the accumulator holds 2n bits)
    #[arg(long)]
    bits: u32,
    /// Preset name or custom parameter file
    #[arg(long, default_value = "gate_ns_e3")]
    platform: String,
    #[command(flatten)]
    circuit: CircuitFlags,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Algorithms to sweep (comma-separated)
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = vec![AlgoArg::Schoolbook, AlgoArg::Karatsuba, AlgoArg::Windowed])]
    algo: Vec<AlgoArg>,
    /// Explicit bit sizes (comma-separated, strictly increasing);
    /// replaces the geometric range
    #[arg(long, value_delimiter = ',')]
    bits: Option<Vec<u32>>,
    /// First bit size of the geometric range
    #[arg(long, default_value_t = 8)]
    bits_from: u32,
    /// Last bit size of the geometric range (inclusive)
    #[arg(long, default_value_t = 8192)]
    bits_to: u32,
    /// Multiplier between consecutive bit sizes
    #[arg(long, default_value_t = 2)]
    bits_factor: u32,
    /// Preset names, 'all' for every preset, or parameter-file paths
    /// (comma-separated)
    #[arg(long, value_delimiter = ',', default_values_t = vec!["gate_ns_e3".to_string()])]
    platform: Vec<String>,
    #[command(flatten)]
    circuit: CircuitFlags,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Multiplication algorithm
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Bits per input factor
    #[arg(long)]
    bits: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Qc)]
    mode: ModeArg,
    /// Window width in bits for the windowed algorithm
    #[arg(long)]
    window: Option<u32>,
    /// Karatsuba recursion cutoff
    #[arg(long)]
    threshold: Option<u32>,
    /// Check every input tuple (permitted while 2^(4n) ≤ 2^20; in qc mode
    /// this sweeps the constant as well)
    #[arg(long, conflicts_with_all = ["samples", "seed"])]
    exhaustive: bool,
    /// Number of random cases to check
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    /// Seed for the deterministic case generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PresetsArgs {
    #[command(flatten)]
    out: OutputFlags,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Cmd::Estimate(args) => cmd_estimate(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Presets(args) => cmd_presets(args),
    }
}

// ---------------------------------------------------------------- shared

fn load_config(model: &ModelFlags) -> Result<EstimatorConfig> {
    match &model.config {
        Some(path) => EstimatorConfig::from_file(path),
        None => Ok(EstimatorConfig::default()),
    }
}

/// Flag beats config beats default.
fn effective_budget(config: &EstimatorConfig, model: &ModelFlags) -> ErrorBudget {
    let mut budget = config.budget;
    if let Some(total) = model.budget {
        budget.total = total;
    }
    budget
}

fn build_spec(algo: AlgoArg, bits: u32, circuit: &CircuitFlags) -> MultiplySpec {
    let mut spec = MultiplySpec::new(algo.into(), bits, circuit.mode.into());
    if let Some(threshold) = circuit.threshold {
        spec.karatsuba_threshold = threshold;
    }
    if let Some(window) = circuit.window {
        spec.window = WindowSize::Bits(window);
    }
    spec
}

/// The classical constant for one cell: the parsed `--c-value`, or the
/// deterministic per-n default. Quantum-operand cells take no constant.
fn resolve_constant(circuit: &CircuitFlags, n: u32) -> Result<Option<BigUint>> {
    match circuit.mode {
        ModeArg::Qq => {
            if circuit.c_value.is_some() {
                return Err(Error::InvalidArgument(
                    "--c-value applies only to --mode qc".into(),
                ));
            }
            Ok(None)
        }
        ModeArg::Qc => match &circuit.c_value {
            Some(text) => {
                let value = BigUint::from_str(text).map_err(|_| {
                    Error::InvalidArgument(format!(
                        "--c-value '{}' is not a decimal integer",
                        text
                    ))
                })?;
                Ok(Some(value))
            }
            None => Ok(Some(default_qc_constant(n))),
        },
    }
}

/// Expand platform tokens into parameter sets: preset names resolve
/// through the config (so overrides apply), `all` expands to every
/// preset, and anything naming an existing file is parsed as a custom
/// parameter file.
fn resolve_platforms(tokens: &[String], config: &EstimatorConfig) -> Result<Vec<QubitParams>> {
    let mut out = Vec::new();
    for token in tokens {
        if token == "all" {
            for name in PRESET_NAMES {
                out.push(config.preset(name)?);
            }
        } else if PRESET_NAMES.contains(&token.as_str()) {
            out.push(config.preset(token)?);
        } else if Path::new(token).exists() {
            out.push(platform::load_params(Path::new(token))?);
        } else {
            // Unknown name: this errors with the list of valid presets.
            out.push(config.preset(token)?);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one platform is required".into(),
        ));
    }
    Ok(out)
}

fn scheme_for(params: &QubitParams, code: Option<CodeArg>) -> SchemeKind {
    code.map(SchemeKind::from)
        .unwrap_or_else(|| params.default_scheme())
}

/// Assemble one row. `Ok` carries a fully populated row; `Err` carries a
/// partial row (circuit-level columns only, diagnostic in `error`)
/// together with the typed failure for callers that abort instead.
fn make_row(
    spec: &MultiplySpec,
    tally: &CircuitTally,
    params: &QubitParams,
    kind: SchemeKind,
    config: &EstimatorConfig,
    budget: &ErrorBudget,
) -> std::result::Result<Row, (Row, Error)> {
    let base = Row {
        algorithm: spec.algorithm.name().into(),
        n: spec.n,
        mode: spec.mode.name().into(),
        platform: params.name.clone(),
        code: kind.name().into(),
        logical_qubits_alg: tally.qubit_highwater,
        logical_qubits_total: qec::layout_total_qubits(tally.qubit_highwater).ok(),
        toffoli: tally.toffoli,
        t_states: tally.t_states_with(config.cost.t_per_toffoli),
        measurements: tally.measurements,
        code_distance: None,
        phys_per_logical: None,
        tfactories: None,
        tfactory_qubits: None,
        physical_qubits: None,
        logical_cycles: qec::logical_cycles(tally, &config.cost),
        runtime_seconds: None,
        error: None,
    };
    match qec::estimate(tally, params, config.scheme(kind), budget, &config.cost) {
        Ok(estimate) => Ok(Row {
            logical_qubits_total: Some(estimate.q_total),
            code_distance: Some(estimate.distance),
            phys_per_logical: Some(estimate.phys_per_logical),
            tfactories: Some(estimate.factories),
            tfactory_qubits: Some(estimate.factory_qubits),
            physical_qubits: Some(estimate.physical_qubits),
            runtime_seconds: Some(estimate.runtime_seconds),
            ..base
        }),
        Err(e) => {
            let row = Row {
                error: Some(e.to_string()),
                ..base
            };
            Err((row, e))
        }
    }
}

/// A row for a cell whose circuit construction itself failed (for
/// example an unsupported algorithm/mode combination inside a sweep):
/// identity columns plus the diagnostic.
fn placeholder_row(spec: &MultiplySpec, params: &QubitParams, kind: SchemeKind, e: &Error) -> Row {
    Row {
        algorithm: spec.algorithm.name().into(),
        n: spec.n,
        mode: spec.mode.name().into(),
        platform: params.name.clone(),
        code: kind.name().into(),
        logical_qubits_alg: 0,
        logical_qubits_total: None,
        toffoli: 0,
        t_states: 0,
        measurements: 0,
        code_distance: None,
        phys_per_logical: None,
        tfactories: None,
        tfactory_qubits: None,
        physical_qubits: None,
        logical_cycles: 0,
        runtime_seconds: None,
        error: Some(e.to_string()),
    }
}

fn emit(rows: &[Row], out: &OutputFlags) -> Result<()> {
    let text = match out.format {
        FormatArg::Csv => write_csv(rows),
        FormatArg::Json => write_json(rows),
    };
    write_text(&text, out)
}

fn write_text(text: &str, out: &OutputFlags) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

// ------------------------------------------------------------- estimate

fn cmd_estimate(args: EstimateArgs) -> Result<i32> {
    let config = load_config(&args.model)?;
    let budget = effective_budget(&config, &args.model);
    let platforms = resolve_platforms(std::slice::from_ref(&args.platform), &config)?;
    if platforms.len() != 1 {
        return Err(Error::InvalidArgument(
            "estimate takes a single platform; use sweep for several".into(),
        ));
    }
    let params = &platforms[0];
    let spec = build_spec(args.algo, args.bits, &args.circuit);
    let c = resolve_constant(&args.circuit, args.bits)?;
    let tally = tally_multiplier(&spec, c.as_ref())?;
    let kind = scheme_for(params, args.model.code);
    match make_row(&spec, &tally, params, kind, &config, &budget) {
        Ok(row) => {
            emit(&[row], &args.out)?;
            Ok(0)
        }
        Err((_, e)) => Err(e),
    }
}

// ---------------------------------------------------------------- sweep

fn resolve_bits(args: &SweepArgs) -> Result<Vec<u32>> {
    if let Some(list) = &args.bits {
        if list.is_empty() {
            return Err(Error::InvalidArgument("--bits list is empty".into()));
        }
        for pair in list.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidArgument(
                    "--bits values must be strictly increasing".into(),
                ));
            }
        }
        if list[0] == 0 {
            return Err(Error::InvalidArgument("bit sizes must be positive".into()));
        }
        return Ok(list.clone());
    }
    if args.bits_from == 0 {
        return Err(Error::InvalidArgument("--bits-from must be positive".into()));
    }
    if args.bits_to < args.bits_from {
        return Err(Error::InvalidArgument(
            "--bits-to must be at least --bits-from".into(),
        ));
    }
    if args.bits_factor < 2 {
        return Err(Error::InvalidArgument(
            "--bits-factor must be at least 2".into(),
        ));
    }
    let mut sizes = Vec::new();
    let mut n = args.bits_from as u64;
    while n <= args.bits_to as u64 {
        sizes.push(n as u32);
        n *= args.bits_factor as u64;
    }
    Ok(sizes)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let config = load_config(&args.model)?;
    let budget = effective_budget(&config, &args.model);
    let platforms = resolve_platforms(&args.platform, &config)?;
    let bits = resolve_bits(&args)?;
    let mut algorithms: Vec<AlgoArg> = Vec::new();
    for algo in &args.algo {
        if !algorithms.contains(algo) {
            algorithms.push(*algo);
        }
    }
    if algorithms.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one algorithm is required".into(),
        ));
    }

    // Tallies depend only on (algorithm, n, mode, constant), so each is
    // computed once and shared across platforms. The grid cells are
    // independent; building them in parallel cannot perturb the output
    // because rows are collected and sorted before writing.
    let mut jobs: Vec<(MultiplySpec, Option<BigUint>)> = Vec::new();
    for &algo in &algorithms {
        for &n in &bits {
            let spec = build_spec(algo, n, &args.circuit);
            let c = resolve_constant(&args.circuit, n)?;
            jobs.push((spec, c));
        }
    }
    let tallies: Vec<Result<CircuitTally>> = jobs
        .par_iter()
        .map(|(spec, c)| tally_multiplier(spec, c.as_ref()))
        .collect();

    let mut rows: Vec<Row> = Vec::with_capacity(jobs.len() * platforms.len());
    for ((spec, _), tally) in jobs.iter().zip(&tallies) {
        for params in &platforms {
            let kind = scheme_for(params, args.model.code);
            let row = match tally {
                Ok(tally) => match make_row(spec, tally, params, kind, &config, &budget) {
                    Ok(row) => row,
                    Err((row, _)) => row,
                },
                Err(e) => placeholder_row(spec, params, kind, e),
            };
            rows.push(row);
        }
    }
    sort_rows(&mut rows);
    emit(&rows, &args.out)?;
    if !rows.is_empty() && rows.iter().all(|r| r.error.is_some()) {
        return Err(Error::ModelInfeasible(
            "every sweep cell failed; see the error column".into(),
        ));
    }
    Ok(0)
}

// --------------------------------------------------------------- verify

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let circuit = CircuitFlags {
        mode: args.mode,
        window: args.window,
        threshold: args.threshold,
        c_value: None,
    };
    let spec = build_spec(args.algo, args.bits, &circuit);
    let strategy = if args.exhaustive {
        VerifyStrategy::Exhaustive
    } else {
        VerifyStrategy::Random {
            samples: args.samples,
            seed: args.seed,
        }
    };
    let report = verify_multiplier(&spec, strategy)?;
    println!(
        "algorithm={} n={} mode={} strategy={}",
        spec.algorithm.name(),
        spec.n,
        spec.mode.name(),
        if args.exhaustive {
            "exhaustive".to_string()
        } else {
            format!("random(samples={}, seed={})", args.samples, args.seed)
        }
    );
    println!(
        "cases={} failures={} ancilla_violations={}",
        report.cases,
        report.failures.len(),
        report.ancilla_violations.len()
    );
    for f in &report.failures {
        println!(
            "counterexample: a0={} b={} c={} got={} expected={}",
            f.a0, f.b, f.c, f.got, f.expected
        );
    }
    for v in &report.ancilla_violations {
        println!(
            "dirty workspace: a0={} b={} c={} ({})",
            v.a0, v.b, v.c, v.description
        );
    }
    if report.is_ok() {
        println!("PASS");
        Ok(0)
    } else {
        println!("FAIL");
        Ok(1)
    }
}

// -------------------------------------------------------------- presets

#[derive(serde::Serialize)]
struct PresetJson {
    name: String,
    platform: &'static str,
    family: &'static str,
    t_one_qubit: f64,
    t_two_qubit: f64,
    t_meas: f64,
    e_one_qubit: f64,
    e_two_qubit: f64,
    e_meas: f64,
    t_inject_error: f64,
    schemes: Vec<&'static str>,
}

fn cmd_presets(args: PresetsArgs) -> Result<i32> {
    let presets = platform::list_presets();
    let text = match args.out.format {
        FormatArg::Csv => {
            let mut text = String::from(
                "name,platform,family,t_one_qubit,t_two_qubit,t_meas,\
                 e_one_qubit,e_two_qubit,e_meas,t_inject_error,schemes\n",
            );
            for p in &presets {
                let schemes: Vec<&str> = p
                    .compatible_schemes()
                    .iter()
                    .map(|k| k.name())
                    .collect();
                text.push_str(&format!(
                    "{},{},{},{},{},{},{:e},{:e},{:e},{:e},{}\n",
                    p.name,
                    p.platform_label(),
                    p.family.name(),
                    output::format_time(p.t_one_qubit),
                    output::format_time(p.t_two_qubit),
                    output::format_time(p.t_meas),
                    p.e_one_qubit,
                    p.e_two_qubit,
                    p.e_meas,
                    p.t_inject_error,
                    schemes.join("+"),
                ));
            }
            text
        }
        FormatArg::Json => {
            let rows: Vec<PresetJson> = presets
                .iter()
                .map(|p| PresetJson {
                    name: p.name.clone(),
                    platform: p.platform_label(),
                    family: p.family.name(),
                    t_one_qubit: p.t_one_qubit,
                    t_two_qubit: p.t_two_qubit,
                    t_meas: p.t_meas,
                    e_one_qubit: p.e_one_qubit,
                    e_two_qubit: p.e_two_qubit,
                    e_meas: p.e_meas,
                    t_inject_error: p.t_inject_error,
                    schemes: p.compatible_schemes().iter().map(|k| k.name()).collect(),
                })
                .collect();
            let mut text =
                serde_json::to_string_pretty(&rows).expect("presets serialize infallibly");
            text.push('\n');
            text
        }
    };
    write_text(&text, &args.out)?;
    Ok(0)
}
