//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 property failure.
//! Data goes to `--out` (or standard output), diagnostics to standard error.

mod bench;
mod selftest;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use crate::algo::{naive_trimmed_eval, trimmed_eval, trimmed_interp, EvalTable, Grid};
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::io::{EvalTableDoc, GridDoc, SparsePolyDoc};
use crate::poly::TrimmedPoly;

pub use bench::{parse_algos, Algo, BenchRecord, Sweep, TotalSpec};
pub use selftest::{run_suite, SUITE_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "trimmed-mpe",
    version,
    about = "Trimmed multipoint evaluation and interpolation over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a polynomial at every trimmed grid point.
    Eval(EvalArgs),
    /// Interpolate a polynomial from its values on the trimmed grid.
    Interp(InterpArgs),
    /// Check interp(eval(P)) = P and eval = naive oracle on random instances.
    Roundtrip(RoundtripArgs),
    /// Count operations and time the evaluators over a parameter sweep (CSV).
    Bench(BenchArgs),
    /// Run the embedded invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridGen {
    /// z[i][j] = j mod p
    Seq,
    /// distinct residues drawn from --seed
    Rand,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GridSource {
    /// Grid JSON file
    #[arg(long, value_name = "FILE")]
    grid: Option<PathBuf>,
    /// Generate the grid instead of reading it
    #[arg(long, value_name = "MODE")]
    grid_gen: Option<GridGen>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// SparsePoly JSON file
    #[arg(long, value_name = "FILE")]
    poly: PathBuf,
    #[command(flatten)]
    grid: GridSource,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (standard output if omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InterpArgs {
    /// EvalTable JSON file
    #[arg(long, value_name = "FILE")]
    evals: PathBuf,
    #[command(flatten)]
    grid: GridSource,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RoundtripArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Total degree bound
    #[arg(long = "D", allow_negative_numbers = true)]
    total: i64,
    #[arg(long, default_value_t = 65537)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, value_name = "MODE", default_value = "rand")]
    grid_gen: GridGen,
    /// Perturb one evaluation before checking (tests the failure path)
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// e.g. "n=2..10;d=1..3;D=nd/4,nd/2,nd"
    #[arg(long)]
    sweep: String,
    /// Comma-separated subset of trimmed,naive,yates
    #[arg(long, default_value = "trimmed,naive")]
    algos: String,
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 65537)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest N for which the naive oracle is run
    #[arg(long, default_value_t = 5000)]
    naive_limit: u64,
    /// Largest N for which any evaluator is run
    #[arg(long, default_value_t = 1 << 24)]
    max_size: u64,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Print a JSON pass/fail map instead of text
    #[arg(long)]
    json: bool,
    /// Run only the named suite (repeatable)
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
}

enum Failure {
    Usage(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Interp(a) => cmd_interp(a, out),
        Command::Roundtrip(a) => cmd_roundtrip(a, out, err),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Selftest(a) => cmd_selftest(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Property(msg)) => {
            let _ = writeln!(err, "failure: {msg}");
            EXIT_PROPERTY
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

fn to_json<T: serde::Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn load_grid(
    src: &GridSource,
    n: usize,
    d: usize,
    modulus: PrimeModulus,
    seed: u64,
) -> Result<Grid, Failure> {
    let grid = match (&src.grid, src.grid_gen) {
        (Some(path), _) => {
            let doc: GridDoc = read_json(path)?;
            doc.to_grid()
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(GridGen::Seq)) => Grid::sequential(n, d, modulus)?,
        (None, Some(GridGen::Rand)) => Grid::random(n, d, modulus, seed)?,
        (None, None) => unreachable!("clap enforces one grid source"),
    };
    Ok(grid)
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> CmdResult {
    let doc: SparsePolyDoc = read_json(&a.poly)?;
    let poly = doc
        .to_poly()
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.poly.display())))?;
    let grid = load_grid(&a.grid, poly.n(), poly.d(), poly.modulus(), a.seed)?;
    let table = trimmed_eval(&poly, &grid)?;
    emit(
        &to_json(&EvalTableDoc::from_table(&table)),
        a.out.as_deref(),
        out,
    )
}

fn cmd_interp(a: InterpArgs, out: &mut dyn Write) -> CmdResult {
    let doc: EvalTableDoc = read_json(&a.evals)?;
    let table = doc
        .to_table()
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.evals.display())))?;
    let grid = load_grid(&a.grid, table.n(), table.d(), table.modulus(), a.seed)?;
    let poly = trimmed_interp(&table, &grid)?;
    emit(
        &to_json(&SparsePolyDoc::from_sparse(&poly.to_sparse())),
        a.out.as_deref(),
        out,
    )
}

/// Seed of the polynomial in a roundtrip trial, decorrelated from the grid seed.
fn poly_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

fn roundtrip_trial(
    a: &RoundtripArgs,
    modulus: PrimeModulus,
    seed: u64,
) -> Result<Option<String>, Failure> {
    let grid = match a.grid_gen {
        GridGen::Seq => Grid::sequential(a.n, a.d, modulus)?,
        GridGen::Rand => Grid::random(a.n, a.d, modulus, seed)?,
    };
    let poly = TrimmedPoly::random(a.n, a.d, a.total, modulus, poly_seed(seed))?;
    let mut table = trimmed_eval(&poly, &grid)?;
    if a.corrupt && !table.is_empty() {
        let mut values = table.into_values();
        values[0] = values[0] + modulus.one();
        table = EvalTable::new(poly.n(), poly.d(), poly.total(), modulus, values)?;
    }
    let oracle = naive_trimmed_eval(&poly, &grid)?;
    if let Some(i) = table
        .values()
        .iter()
        .zip(oracle.values())
        .position(|(x, y)| x != y)
    {
        return Ok(Some(format!(
            "trimmed_eval disagrees with the naive oracle at position {i} ({} vs {})",
            table.values()[i],
            oracle.values()[i]
        )));
    }
    let back = trimmed_interp(&table, &grid)?;
    if back != poly {
        let i = back
            .coeffs()
            .iter()
            .zip(poly.coeffs())
            .position(|(x, y)| x != y)
            .unwrap_or(0);
        return Ok(Some(format!(
            "interp(eval(P)) differs from P at coefficient {i}"
        )));
    }
    Ok(None)
}

fn cmd_roundtrip(a: RoundtripArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let modulus = PrimeModulus::new(a.prime)?;
    if a.d == 0 {
        return Err(Failure::Usage("--d must be at least 1".into()));
    }
    if a.prime < a.d as u64 + 1 {
        return Err(Error::FieldTooSmall {
            p: a.prime,
            needed: a.d + 1,
        }
        .into());
    }
    let io_err = |e: std::io::Error| Failure::Usage(format!("cannot write output: {e}"));
    let mut failed = Vec::new();
    for t in 0..a.trials {
        let seed = a.seed.wrapping_add(t);
        match roundtrip_trial(&a, modulus, seed)? {
            None => writeln!(out, "trial {t} seed {seed}: ok").map_err(io_err)?,
            Some(reason) => {
                writeln!(out, "trial {t} seed {seed}: FAIL").map_err(io_err)?;
                let _ = writeln!(
                    err,
                    "trial {t} seed {seed}: {reason}; reproduce with --seed {seed} --trials 1"
                );
                failed.push(seed);
            }
        }
    }
    writeln!(
        out,
        "{} of {} trials passed",
        a.trials - failed.len() as u64,
        a.trials
    )
    .map_err(io_err)?;
    if failed.is_empty() {
        Ok(())
    } else {
        let seeds: Vec<String> = failed.iter().map(u64::to_string).collect();
        Err(Failure::Property(format!(
            "roundtrip failed for seed(s) {}",
            seeds.join(", ")
        )))
    }
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let algos = parse_algos(&a.algos).map_err(Failure::Usage)?;
    let sweep: Sweep = a.sweep.parse().map_err(Failure::Usage)?;
    let modulus = PrimeModulus::new(a.prime)?;
    let config = bench::Config {
        modulus,
        seed: a.seed,
        naive_limit: a.naive_limit,
        max_size: a.max_size,
    };
    let records = bench::run_sweep(&sweep, &algos, &config, err)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &records {
        w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    emit(
        &String::from_utf8(bytes).expect("csv output is utf-8"),
        a.out.as_deref(),
        out,
    )
}

fn cmd_selftest(a: SelftestArgs, out: &mut dyn Write) -> CmdResult {
    let names: Vec<&str> = if a.suites.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        for s in &a.suites {
            if !SUITE_NAMES.contains(&s.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown suite {s:?}; available: {}",
                    SUITE_NAMES.join(", ")
                )));
            }
        }
        a.suites.iter().map(String::as_str).collect()
    };
    let results: Vec<(&str, Result<(), String>)> =
        names.iter().map(|&s| (s, run_suite(s))).collect();
    let text = if a.json {
        let map: serde_json::Map<String, serde_json::Value> = results
            .iter()
            .map(|(name, r)| (name.to_string(), serde_json::Value::Bool(r.is_ok())))
            .collect();
        to_json(&map)
    } else {
        let mut s = String::new();
        for (name, r) in &results {
            match r {
                Ok(()) => s.push_str(&format!("{name}: pass\n")),
                Err(why) => s.push_str(&format!("{name}: FAIL ({why})\n")),
            }
        }
        s
    };
    emit(&text, None, out)?;
    let failed: Vec<&str> = results
        .iter()
        .filter(|(_, r)| r.is_err())
        .map(|(n, _)| *n)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(format!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}
