//! Command implementations behind the `truematch` binary.
//!
//! Every stochastic command takes `--seed` (default [`DEFAULT_SEED`]) and
//! echoes it in its output. Identical invocations produce byte-identical
//! output. JSON numbers are rounded to six significant digits.
//!
//! Exit codes: 0 success, 2 input error, 3 internal invariant violation.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::agreement::{adjusted_rand, cohen_kappa, diagonal_fraction, rand_index};
use crate::crosstab::{crosstab, residuals};
use crate::error::Error;
use crate::labels::{canonical_pair, parse_labels, LabelMapping, LabelVector};
use crate::matching::{match_table, MatchMethod};
use crate::mmcc::{mmcc_run, LloydClusterer, MmccConfig};
use crate::seeded_rng;
use crate::simulate::{grid_sweep_with, outlier_scenario, SimulationConfig, GRID_HEADER};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_070_101;

#[derive(Debug, Parser)]
#[command(name = "truematch", version, about = "Chance-neutral cluster label matching")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Match the labels of B to the labels of A.
    Match(MatchArgs),
    /// Agreement indices of two labelings.
    Agree(AgreeArgs),
    /// Bag a k-means base clusterer over numeric data.
    Mmcc(MmccArgs),
    /// Run the skew/reliability grid or the outlier scenario.
    Simulate(SimulateArgs),
}

#[derive(Debug, clap::Args)]
pub struct MatchArgs {
    /// Reference labels, one per line.
    pub labels_a: PathBuf,
    /// Labels to align, one per line.
    pub labels_b: PathBuf,
    #[arg(long, value_enum, default_value_t = MatchMethod::Truematch)]
    pub method: MatchMethod,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write JSON here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct AgreeArgs {
    pub labels_a: PathBuf,
    pub labels_b: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct MmccArgs {
    /// CSV of numeric feature columns, optional header row.
    pub data: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub rounds: usize,
    #[arg(long, value_enum, default_value_t = MatchMethod::Truematch)]
    pub matcher: MatchMethod,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Lloyd iterations per fit.
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    /// Stop early once probabilities move less than 1e-3 over 50 rounds.
    #[arg(long)]
    pub early_stop: bool,
    /// Directory receiving `probs.csv` and `stats.json`.
    #[arg(long, short = 'o')]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Grid,
    Outlier,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Scenario::Grid)]
    pub scenario: Scenario,
    /// Comma-separated values or `start:end:step`.
    #[arg(long, default_value = "0.01:0.99:0.01")]
    pub p_grid: String,
    #[arg(long, default_value = "0:1:0.01")]
    pub kappa_grid: String,
    #[arg(long, default_value_t = 1000)]
    pub rounds: usize,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Enforce exact cluster sizes in every fictitious clustering.
    #[arg(long)]
    pub fixed: bool,
    #[arg(long, value_enum, default_value_t = MatchMethod::Truematch)]
    pub matcher: MatchMethod,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Runs of the outlier scenario.
    #[arg(long, default_value_t = 10_000)]
    pub runs: usize,
    /// Report finished grid rows on standard error.
    #[arg(long)]
    pub progress: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input files or arguments.
    Input(String),
    /// A computation broke one of its own invariants.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Internal(_) => 3,
        }
    }

    fn internal(e: impl fmt::Display) -> Self {
        Self::Internal(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) | Self::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Match(args) => run_match(args),
        Command::Agree(args) => run_agree(args),
        Command::Mmcc(args) => run_mmcc(args),
        Command::Simulate(args) => run_simulate(args),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_labels(path: &Path) -> CliResult<(LabelVector, LabelMapping)> {
    parse_labels(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_pair(a: &Path, b: &Path) -> CliResult<(LabelVector, LabelVector, LabelMapping, LabelMapping)> {
    let (la, ma) = read_labels(a)?;
    let (lb, mb) = read_labels(b)?;
    let (la, lb, _) = canonical_pair(&la, &lb)
        .map_err(|e| CliError::Input(format!("{} vs {}: {e}", a.display(), b.display())))?;
    Ok((la, lb, ma, mb))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

/// Rounds every float in `v` to six significant digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked is_f64");
            let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
            *v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut v = serde_json::to_value(value).map_err(CliError::internal)?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(CliError::internal)?;
    s.push('\n');
    Ok(s)
}

pub fn run_match(args: &MatchArgs) -> CliResult<()> {
    let (a, b, map_a, map_b) = read_pair(&args.labels_a, &args.labels_b)?;
    let t = crosstab(&a, &b).map_err(CliError::internal)?;
    let result = match_table(&t, args.method, &mut seeded_rng(args.seed));
    let r = residuals(&t);
    let pairs: Vec<Value> = result
        .pairs
        .iter()
        .map(|p| json!({"row": p.row + 1, "col": p.col + 1, "residual": p.residual, "count": p.count}))
        .collect();
    let doc = json!({
        "method": args.method,
        "seed": args.seed,
        "n": a.len(),
        "k": t.k(),
        "perm": result.perm.to_one_based(),
        "pairs": pairs,
        "table_before": t.counts(),
        "table_after": result.matched_table.counts(),
        "row_order": result.row_order.iter().map(|r| r + 1).collect::<Vec<_>>(),
        "presented_table": result.presented_table().counts(),
        "signed_residuals": r.signed,
        "chi2": r.chi2,
        "residuals_computed": result.residuals_computed,
        "categories_a": map_a.originals,
        "categories_b": map_b.originals,
    });
    emit(args.out.as_deref(), &to_json(&doc)?)
}

pub fn run_agree(args: &AgreeArgs) -> CliResult<()> {
    let (a, b, _, _) = read_pair(&args.labels_a, &args.labels_b)?;
    let t = crosstab(&a, &b).map_err(CliError::internal)?;
    let input = |e: Error| CliError::Input(format!("{e}"));
    let doc = json!({
        "diagonal": diagonal_fraction(&t).map_err(input)?,
        "kappa": cohen_kappa(&t).map_err(input)?,
        "rand": rand_index(&t).map_err(input)?,
        "crand": adjusted_rand(&t).map_err(input)?,
        "N": t.total(),
        "K": t.k(),
    });
    emit(args.out.as_deref(), &to_json(&doc)?)
}

/// Reads numeric rows from CSV text. A first row that does not parse as
/// numbers is taken as a header.
pub fn parse_numeric_csv(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 1;
        let record = record.map_err(|e| format!("line {line}: {e}"))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(format!("line {line}: non-finite value"));
                }
                if let Some(first) = rows.first() {
                    if first.len() != values.len() {
                        return Err(format!("line {line}: expected {} columns, got {}", first.len(), values.len()));
                    }
                }
                rows.push(values);
            }
            Err(_) if line == 1 => {}
            Err(e) => return Err(format!("line {line}: {e}")),
        }
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    Ok(rows)
}

pub fn run_mmcc(args: &MmccArgs) -> CliResult<()> {
    let data = parse_numeric_csv(&read_text(&args.data)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.data.display())))?;
    let mut cfg = MmccConfig::new(args.k, args.rounds, args.matcher);
    if args.early_stop {
        cfg.early_stop = Some(Default::default());
    }
    let base = LloydClusterer::new(args.iterations);
    let out = mmcc_run(&data, &base, &cfg, &mut seeded_rng(args.seed)).map_err(|e| match e {
        Error::InvalidArgument(_) | Error::Clusterer(_) => CliError::Input(e.to_string()),
        other => CliError::internal(other),
    })?;
    let stats = out.stats();
    let doc = json!({
        "H": stats.h,
        "RMC": stats.rmc,
        "I": stats.i,
        "CIC": stats.cic,
        "n": data.len(),
        "k": args.k,
        "rounds": args.rounds,
        "rounds_run": out.rounds_run,
        "matcher": args.matcher,
        "seed": args.seed,
    });
    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::Input(format!("{}: {e}", args.out_dir.display())))?;
    emit(Some(&args.out_dir.join("probs.csv")), &out.probs.to_csv())?;
    emit(Some(&args.out_dir.join("stats.json")), &to_json(&doc)?)
}

/// Parses `a,b,c` or an inclusive `start:end:step` range.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, end, step] = parts[..] else {
            return Err(format!("range {spec:?} must be start:end:step"));
        };
        let (start, end, step) = (num(start)?, num(end)?, num(step)?);
        if step <= 0.0 || end < start {
            return Err(format!("empty range {spec:?}"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("empty grid".into());
    }
    Ok(values)
}

pub fn run_simulate(args: &SimulateArgs) -> CliResult<()> {
    match args.scenario {
        Scenario::Outlier => {
            let summary = outlier_scenario(args.runs, args.matcher, &mut seeded_rng(args.seed))
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut doc = serde_json::to_value(&summary).map_err(CliError::internal)?;
            doc["seed"] = Value::from(args.seed);
            emit(args.out.as_deref(), &to_json(&doc)?)
        }
        Scenario::Grid => {
            let ps = parse_grid(&args.p_grid).map_err(|e| CliError::Input(format!("--p-grid: {e}")))?;
            let ks = parse_grid(&args.kappa_grid).map_err(|e| CliError::Input(format!("--kappa-grid: {e}")))?;
            let defaults = SimulationConfig {
                n: args.n,
                rounds: args.rounds,
                fixed: args.fixed,
                matcher: args.matcher,
                seed: args.seed,
                ..Default::default()
            };
            for &p in &ps {
                SimulationConfig { p, ..defaults }
                    .validate()
                    .map_err(|e| CliError::Input(e.to_string()))?;
            }
            for &kappa in &ks {
                SimulationConfig { kappa, ..defaults }
                    .validate()
                    .map_err(|e| CliError::Input(e.to_string()))?;
            }

            let mut sink: Box<dyn Write> = match &args.out {
                Some(path) => Box::new(io::BufWriter::new(
                    fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
                )),
                None => Box::new(io::stdout().lock()),
            };
            let io_err = |e: io::Error| Error::InvalidArgument(format!("write failed: {e}"));
            writeln!(sink, "{GRID_HEADER}").map_err(CliError::internal)?;
            let total_rows = ps.len();
            let mut done = 0;
            grid_sweep_with(&ps, &ks, &defaults, |row| {
                for cell in row {
                    writeln!(sink, "{}", cell.csv_record()).map_err(io_err)?;
                }
                sink.flush().map_err(io_err)?;
                done += 1;
                if args.progress {
                    eprintln!("p = {} done ({done}/{total_rows})", row[0].p);
                }
                Ok(())
            })
            .map_err(CliError::internal)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("0.5,0.7,0.9").unwrap(), vec![0.5, 0.7, 0.9]);
        let full = parse_grid("0.01:0.99:0.01").unwrap();
        assert_eq!(full.len(), 99);
        assert_eq!(full[6], 0.07);
        assert_eq!(full[98], 0.99);
        assert_eq!(parse_grid("0:1:0.01").unwrap().len(), 101);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn json_rounding() {
        let mut v = json!({"x": 0.010101010101, "y": [98.0100000001, 3], "z": -1.0203040506e-6});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"x":0.0101010,"y":[98.01,3],"z":-1.0203e-6}"#.replace("0.0101010", "0.010101"));
    }

    #[test]
    fn numeric_csv() {
        assert_eq!(parse_numeric_csv("x,y\n1,2\n3,4\n").unwrap(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(parse_numeric_csv("1\n2\n").unwrap(), vec![vec![1.0], vec![2.0]]);
        let err = parse_numeric_csv("x\n1\nfoo\n").unwrap_err();
        assert!(err.starts_with("line 3"), "{err}");
        assert!(parse_numeric_csv("x\n").is_err());
    }
}
