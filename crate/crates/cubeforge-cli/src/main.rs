//! Command-line surface. Exit codes: 0 success, 1 a verification-style
//! check failed (cube fails verify, growth verdict is a violation, a
//! 4-term progression turned up, a sweep row missed its bound), 2 usage
//! error, 3 resource budget exceeded. Data goes to stdout as canonical
//! JSON (or CSV/plain text where flagged); diagnostics go to stderr.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubeforge::bounds::evaluate_bounds;
use cubeforge::cube::HilbertCube;
use cubeforge::growth::certify_growth;
use cubeforge::oracle::{OracleError, OracleKind, SetOracle};
use cubeforge::progression::scan_squares_4ap;
use cubeforge::rational::Rational;
use cubeforge::report::{persist_report, sweep_to_csv, to_canonical_json, ExperimentRecord};
use cubeforge::search::{
    search_max_cubes, verify_cube_in_window, SearchConfig, SearchError, SearchMode,
};
use cubeforge::sieve::SieveError;
use cubeforge::sumset::{squares_sumset_sweep, SumsetError};
use cubeforge::transform::{transform_cube, QuadraticForm};

#[derive(Parser)]
#[command(
    name = "cubeforge",
    version,
    about = "Hilbert cubes in structured integer sets: search, verify, certify, measure"
)]
struct Cli {
    /// Write an experiment record (command line, config, outputs, content
    /// hash; timing excluded from the hash) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    record: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a cube's expansion lies inside the oracle and [1, N].
    Verify(VerifyArgs),
    /// Expand a cube: elements, layer sizes, multiset size.
    Expand(ExpandArgs),
    /// Exhaustive maximal-cube search over an oracle window.
    Search(SearchArgs),
    /// Certify layer growth or extract the violating progression.
    CertifyGrowth(CertifyArgs),
    /// Scan the squares for a 4-term arithmetic progression.
    #[command(name = "check-4ap")]
    Check4ap(CheckApArgs),
    /// Measure min(|C|,|D|) against 8·ln n over all two-element C.
    SumsetSweep(SweepArgs),
    /// Transport a cube through a quadratic form into the squares.
    Transform(TransformArgs),
    /// Evaluate the closed-form reference bounds.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Cube JSON file: {"a0": …, "generators": […]}.
    #[arg(long, value_name = "FILE")]
    cube: PathBuf,
    /// squares | quadratic:a,b,c | explicit:v1,v2,… | greedy_apfree:k | @kind.json
    #[arg(long)]
    oracle: String,
    #[arg(long, value_name = "N")]
    max_n: u64,
    /// Accept a cube based at 0 (the subset-sum case, outside [1, N]).
    #[arg(long)]
    allow_zero_base: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, value_name = "FILE")]
    cube: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    oracle: String,
    #[arg(long, value_name = "N")]
    max_n: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Distinct)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    min_dim: usize,
    /// Cap on reported cubes; 0 = unlimited.
    #[arg(long, default_value_t = 0)]
    max_results: usize,
    /// Worker threads; 0 lets the pool decide. Reports are byte-identical
    /// either way.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Also search cubes based at 0 when the oracle contains 0.
    #[arg(long)]
    zero_base: bool,
    /// Reject candidates whose layer would carry a 4-term progression.
    #[arg(long)]
    prune_4ap: bool,
    /// Multiset-mode multiplicity cap (default: oracle-specific).
    #[arg(long, value_name = "M")]
    max_multiplicity: Option<u32>,
    /// One stderr line per completed base branch.
    #[arg(long)]
    progress: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Distinct,
    Multiset,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_name = "FILE")]
    cube: PathBuf,
    /// Progression length the growth factor must defeat (k >= 3).
    #[arg(long)]
    k: u32,
    /// Exact growth factor as p/q, in (1, k/(k−1)].
    #[arg(long, value_name = "P/Q")]
    c: String,
}

#[derive(Args)]
struct CheckApArgs {
    #[arg(long, value_name = "N")]
    max_n: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// C ranges over pairs {c1 < c2} ⊆ [0, c_max].
    #[arg(long, value_name = "C")]
    c_max: u64,
    #[arg(long, value_name = "N")]
    max_n: u64,
    /// Emit CSV instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_name = "FILE")]
    cube: PathBuf,
    /// Quadratic form coefficients "a,b,c" for a·x² + b·x + c.
    #[arg(long, value_name = "A,B,C")]
    quad: String,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: Option<u32>,
    /// Exact rational p/q.
    #[arg(long, value_name = "P/Q")]
    c: Option<String>,
}

/// Outcome of one command: what to print, whether the check it ran failed,
/// and what to stash in an experiment record.
struct Outcome {
    stdout: String,
    check_failed: bool,
    oracle_spec: String,
    config: Value,
    outputs: Value,
}

enum CliError {
    Usage(String),
    Resource(String),
}

impl CliError {
    fn usage(e: impl Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn parse_oracle_kind(spec: &str) -> Result<OracleKind, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")));
    }
    let (head, tail) = match spec.split_once(':') {
        Some((head, tail)) => (head, Some(tail)),
        None => (spec, None),
    };
    match (head, tail) {
        ("squares", None) => Ok(OracleKind::Squares),
        ("quadratic", Some(coeffs)) => {
            let form = parse_form(coeffs)?;
            Ok(OracleKind::Quadratic {
                form,
                from_zero: false,
            })
        }
        ("explicit", Some(list)) => {
            let elements = list
                .split(',')
                .map(|v| v.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("explicit oracle: {e}")))?;
            Ok(OracleKind::Explicit { elements })
        }
        ("greedy_apfree", Some(k)) => {
            let k = k
                .trim()
                .parse::<u32>()
                .map_err(|e| CliError::Usage(format!("greedy_apfree oracle: {e}")))?;
            Ok(OracleKind::GreedyApFree { k })
        }
        _ => Err(CliError::Usage(format!(
            "unrecognized oracle spec {spec:?}; expected squares | quadratic:a,b,c | \
             explicit:v1,v2,… | greedy_apfree:k | @kind.json"
        ))),
    }
}

fn parse_form(coeffs: &str) -> Result<QuadraticForm, CliError> {
    let parts: Vec<&str> = coeffs.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(CliError::Usage(format!(
            "quadratic form needs exactly a,b,c; got {coeffs:?}"
        )));
    };
    let a: u64 = a.parse().map_err(CliError::usage)?;
    let b: i64 = b.parse().map_err(CliError::usage)?;
    let c: i64 = c.parse().map_err(CliError::usage)?;
    QuadraticForm::new(a, b, c).map_err(CliError::usage)
}

fn build_oracle(spec: &str, limit: u64) -> Result<SetOracle, CliError> {
    let kind = parse_oracle_kind(spec)?;
    SetOracle::new(kind, limit).map_err(|e| match e {
        OracleError::Sieve(SieveError::BudgetExceeded { .. }) => CliError::Resource(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })
}

fn load_cube(path: &Path) -> Result<HilbertCube, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    Rational::from_str(text).map_err(CliError::usage)
}

fn canonical<T: serde::Serialize>(value: &T) -> (String, Value) {
    let text = to_canonical_json(value).expect("report values are finite");
    let json = serde_json::to_value(value).expect("report values are finite");
    (text, json)
}

fn run_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let cube = load_cube(&args.cube)?;
    let oracle = build_oracle(&args.oracle, args.max_n)?;
    let verdict = verify_cube_in_window(&cube, &oracle, args.max_n, args.allow_zero_base);
    let (stdout, outputs) = canonical(&verdict);
    Ok(Outcome {
        stdout,
        check_failed: !verdict.ok,
        oracle_spec: args.oracle.clone(),
        config: json!({
            "cube": serde_json::to_value(&cube).unwrap(),
            "max_n": args.max_n,
            "allow_zero_base": args.allow_zero_base,
        }),
        outputs,
    })
}

fn run_expand(args: &ExpandArgs) -> Result<Outcome, CliError> {
    let cube = load_cube(&args.cube)?;
    let expansion = cube.expand().map_err(CliError::usage)?;
    let payload = json!({
        "a0": cube.base(),
        "generators": cube.generators(),
        "dimension": cube.dimension(),
        "distinct_elements": expansion.distinct_elements(),
        "distinct_count": expansion.distinct_count(),
        // 2^d outgrows u64 by dimension 64; decimal string keeps it exact.
        "multiset_size": expansion.multiset_size().to_string(),
        "layer_sizes": expansion.layer_sizes(),
    });
    let (stdout, outputs) = canonical(&payload);
    Ok(Outcome {
        stdout,
        check_failed: false,
        oracle_spec: String::new(),
        config: json!({"cube": serde_json::to_value(&cube).unwrap()}),
        outputs,
    })
}

fn run_search(args: &SearchArgs) -> Result<Outcome, CliError> {
    let oracle = build_oracle(&args.oracle, args.max_n)?;
    let config = SearchConfig {
        oracle,
        n: args.max_n,
        mode: match args.mode {
            ModeArg::Distinct => SearchMode::Distinct,
            ModeArg::Multiset => SearchMode::Multiset,
        },
        min_dim: args.min_dim,
        max_results: args.max_results,
        threads: args.threads,
        include_zero_base: args.zero_base,
        prune_layer_4ap: args.prune_4ap,
        max_multiplicity: args.max_multiplicity,
        progress: args.progress,
    };
    let config_json = json!({
        "oracle": serde_json::to_value(config.oracle.kind()).unwrap(),
        "max_n": args.max_n,
        "mode": match args.mode { ModeArg::Distinct => "distinct", ModeArg::Multiset => "multiset" },
        "min_dim": args.min_dim,
        "max_results": args.max_results,
        "zero_base": args.zero_base,
        "prune_4ap": args.prune_4ap,
        "max_multiplicity": args.max_multiplicity,
    });
    let report = match search_max_cubes(&config) {
        Ok(report) => report,
        Err(SearchError::Resource { source, partial }) => {
            // Print what is known, then fail with the resource code.
            emit(&to_canonical_json(&*partial).expect("report is finite"));
            return Err(CliError::Resource(source.to_string()));
        }
        Err(SearchError::Oracle(OracleError::Sieve(e @ SieveError::BudgetExceeded { .. }))) => {
            return Err(CliError::Resource(e.to_string()));
        }
        Err(other) => return Err(CliError::usage(other)),
    };
    let (stdout, outputs) = canonical(&report);
    Ok(Outcome {
        stdout,
        check_failed: false,
        oracle_spec: args.oracle.clone(),
        config: config_json,
        outputs,
    })
}

fn run_certify(args: &CertifyArgs) -> Result<Outcome, CliError> {
    let cube = load_cube(&args.cube)?;
    let c = parse_rational(&args.c)?;
    let cert = certify_growth(&cube, args.k, c).map_err(CliError::usage)?;
    let (stdout, outputs) = canonical(&cert);
    Ok(Outcome {
        stdout,
        check_failed: !cert.is_certified(),
        oracle_spec: String::new(),
        config: json!({
            "cube": serde_json::to_value(&cube).unwrap(),
            "k": args.k,
            "c": args.c,
        }),
        outputs,
    })
}

fn run_check_4ap(args: &CheckApArgs) -> Result<Outcome, CliError> {
    let hit = scan_squares_4ap(args.max_n).map_err(|e| CliError::Resource(e.to_string()))?;
    let (stdout, check_failed, outputs) = match &hit {
        None => ("none found".to_string(), false, Value::Null),
        Some(witness) => {
            let (text, json) = canonical(witness);
            (text, true, json)
        }
    };
    Ok(Outcome {
        stdout,
        check_failed,
        oracle_spec: "squares".to_string(),
        config: json!({"max_n": args.max_n}),
        outputs,
    })
}

fn run_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let rows = squares_sumset_sweep(args.c_max, args.max_n).map_err(|e| match &e {
        SumsetError::Oracle(OracleError::Sieve(SieveError::BudgetExceeded { .. })) => {
            CliError::Resource(e.to_string())
        }
        _ => CliError::usage(&e),
    })?;
    let unsatisfied = rows.iter().filter(|r| !r.satisfied).count();
    let (stdout, outputs) = if args.csv {
        let csv = sweep_to_csv(&rows);
        let json = serde_json::to_value(&rows).expect("rows are finite");
        (csv.trim_end().to_string(), json)
    } else {
        canonical(&rows)
    };
    Ok(Outcome {
        stdout,
        check_failed: unsatisfied > 0,
        oracle_spec: "squares".to_string(),
        config: json!({"c_max": args.c_max, "max_n": args.max_n, "csv": args.csv}),
        outputs,
    })
}

fn run_transform(args: &TransformArgs) -> Result<Outcome, CliError> {
    let cube = load_cube(&args.cube)?;
    let form = parse_form(&args.quad)?;
    let image = transform_cube(&cube, &form).map_err(CliError::usage)?;
    let payload = json!({
        "input": serde_json::to_value(&cube).unwrap(),
        "form": serde_json::to_value(form).unwrap(),
        "scale": form.scale(),
        "offset": form.shift().to_string(),
        "image": serde_json::to_value(&image).unwrap(),
    });
    let (stdout, outputs) = canonical(&payload);
    Ok(Outcome {
        stdout,
        check_failed: false,
        oracle_spec: String::new(),
        config: json!({
            "cube": serde_json::to_value(&cube).unwrap(),
            "quad": args.quad,
        }),
        outputs,
    })
}

fn run_bounds(args: &BoundsArgs) -> Result<Outcome, CliError> {
    let c = args.c.as_deref().map(parse_rational).transpose()?;
    let report = evaluate_bounds(args.n, args.k, c).map_err(CliError::usage)?;
    let (stdout, outputs) = canonical(&report);
    Ok(Outcome {
        stdout,
        check_failed: false,
        oracle_spec: String::new(),
        config: json!({"n": args.n, "k": args.k, "c": args.c}),
        outputs,
    })
}

/// Write one line to stdout, ignoring a closed pipe (e.g. `cubeforge ... | head`).
fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify(args) => run_verify(args),
        Command::Expand(args) => run_expand(args),
        Command::Search(args) => run_search(args),
        Command::CertifyGrowth(args) => run_certify(args),
        Command::Check4ap(args) => run_check_4ap(args),
        Command::SumsetSweep(args) => run_sweep(args),
        Command::Transform(args) => run_transform(args),
        Command::Bounds(args) => run_bounds(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match dispatch(&cli.command) {
        Ok(outcome) => {
            emit(&outcome.stdout);
            if let Some(path) = &cli.record {
                let record = ExperimentRecord::new(
                    std::env::args().collect(),
                    outcome.oracle_spec,
                    outcome.config,
                    outcome.outputs,
                    started.elapsed().as_millis() as u64,
                );
                if let Err(e) = persist_report(path, &record) {
                    eprintln!("cubeforge: failed to write record: {e}");
                    return ExitCode::from(2);
                }
            }
            if outcome.check_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(message)) => {
            eprintln!("cubeforge: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Resource(message)) => {
            eprintln!("cubeforge: resource budget exceeded: {message}");
            ExitCode::from(3)
        }
    }
}
