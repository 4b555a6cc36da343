//! The `sqpart` command line.
//!
//! Subcommands: `members`, `count`, `estimate`, `compare`, `constant`,
//! `landau`, `saddle`. Every command is deterministic (no RNG, no
//! environment dependence): identical flags produce byte-identical
//! output. Numeric output is plain C-locale decimal.
//!
//! Exit codes: 0 success, 2 usage error, 3 resource cap exceeded,
//! 4 numeric failure.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcount::{
    difference_exact, log_biguint, partition_counts_capped, PartSet, DEFAULT_NMAX_CAP,
};
use crate::saddle::{EstimateMethod, LogEstimate, SaddleContext};
use crate::twosquares::{
    count_members_up_to, landau_ramanujan_constant, landau_reference, sieve_membership_capped,
    MembershipTable, DEFAULT_SIEVE_CAP,
};

/// Parsed and validated run configuration. Fully deterministic: there is
/// no seed and no hidden state.
#[derive(Debug, Parser)]
#[command(
    name = "sqpart",
    version,
    about = "Exact and asymptotic counts of partitions into sums of two squares"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the members of S up to --limit, one per line
    Members {
        #[arg(long)]
        limit: u64,
        /// Also write the raw bitset form (8-byte LE limit header + bits)
        #[arg(long)]
        bitset_out: Option<PathBuf>,
        /// Override the sieve memory cap
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Exact partition count for the chosen part set, printed in decimal
    Count {
        #[arg(long)]
        n: u64,
        /// Part set: twosquares | all | file:PATH | bitset:PATH
        #[arg(long, default_value = "twosquares")]
        set: String,
        /// Override the DP size cap
        #[arg(long)]
        cap: Option<u64>,
        /// Reuse a table written by --table-out instead of recomputing
        #[arg(long, conflicts_with_all = ["set", "table_out", "table_csv"])]
        table_in: Option<PathBuf>,
        /// Also write the full table in the compact binary form
        #[arg(long)]
        table_out: Option<PathBuf>,
        /// Also write the full table as CSV (columns n,count)
        #[arg(long)]
        table_csv: Option<PathBuf>,
    },
    /// Saddle-point estimate of log p_S(n) as a JSON record
    Estimate {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Extend the series truncation length by this much
        #[arg(long, default_value_t = 0.0)]
        extra_truncation: f64,
    },
    /// Exact-vs-asymptotic comparison table over a list or range of n
    Compare {
        /// Comma-separated list of n values
        #[arg(long, conflicts_with_all = ["range", "factor"])]
        ns: Option<String>,
        /// Geometric range START:END (also accepts START..END)
        #[arg(long)]
        range: Option<String>,
        /// Geometric step for --range
        #[arg(long, default_value_t = 2.0)]
        factor: f64,
        /// Part set: twosquares | all | file:PATH | bitset:PATH
        #[arg(long, default_value = "twosquares")]
        set: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        out: OutputFormat,
        /// Override the DP size cap
        #[arg(long)]
        cap: Option<u64>,
        /// Extend the series truncation length by this much
        #[arg(long, default_value_t = 0.0)]
        extra_truncation: f64,
    },
    /// Landau-Ramanujan constant truncated to --digits decimals
    Constant {
        #[arg(long)]
        digits: u32,
    },
    /// Sieve count S(x) against the reference K x / sqrt(log x)
    Landau {
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        out: OutputFormat,
        /// Override the sieve memory cap
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Solve the saddle-point equation x = rho Phi'(rho), JSON output
    Saddle {
        #[arg(long)]
        x: f64,
        /// Extend the series truncation length by this much
        #[arg(long, default_value_t = 0.0)]
        extra_truncation: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Main,
    Simple,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One line of `estimate` output. Keys are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub n: u64,
    pub method: EstimateMethod,
    pub log_value: f64,
    pub rho: f64,
    #[serde(rename = "X")]
    pub scale: f64,
    pub residual: f64,
}

impl From<LogEstimate> for EstimateRecord {
    fn from(estimate: LogEstimate) -> Self {
        EstimateRecord {
            n: estimate.n,
            method: estimate.method,
            log_value: estimate.log_value,
            rho: estimate.saddle.rho,
            scale: estimate.saddle.scale,
            residual: estimate.saddle.residual,
        }
    }
}

/// One row of the comparison table. All logs are natural logs of exact
/// or estimated counts; ratio_main = exp(exact_log - main_log).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u64,
    pub exact_log: f64,
    pub main_log: f64,
    pub simple_log: f64,
    pub diff_exact_log: f64,
    pub diff_est_log: f64,
    pub ratio_main: f64,
}

/// Scalar report of `landau`: the sieve count, the reference, and
/// ratio = count / reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauRecord {
    pub x: u64,
    pub count: u64,
    pub reference: f64,
    pub ratio: f64,
}

/// Executes a parsed command, writing its stdout payload to `out`.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    match cli.command {
        Command::Members {
            limit,
            bitset_out,
            cap,
        } => cmd_members(limit, bitset_out, cap, out),
        Command::Count {
            n,
            set,
            cap,
            table_in,
            table_out,
            table_csv,
        } => cmd_count(n, &set, cap, table_in, table_out, table_csv, out),
        Command::Estimate {
            n,
            method,
            extra_truncation,
        } => cmd_estimate(n, method, extra_truncation, out),
        Command::Compare {
            ns,
            range,
            factor,
            set,
            out: format,
            cap,
            extra_truncation,
        } => cmd_compare(
            ns.as_deref(),
            range.as_deref(),
            factor,
            &set,
            format,
            cap,
            extra_truncation,
            out,
        ),
        Command::Constant { digits } => cmd_constant(digits, out),
        Command::Landau {
            x,
            out: format,
            cap,
        } => cmd_landau(x, format, cap, out),
        Command::Saddle {
            x,
            extra_truncation,
        } => cmd_saddle(x, extra_truncation, out),
    }
}

fn cmd_members<W: Write>(
    limit: u64,
    bitset_out: Option<PathBuf>,
    cap: Option<u64>,
    out: &mut W,
) -> Result<()> {
    let table = sieve_membership_capped(limit, cap.unwrap_or(DEFAULT_SIEVE_CAP))?;
    table.write_members(out)?;
    if let Some(path) = bitset_out {
        let mut file = File::create(path)?;
        table.write_bitset(&mut file)?;
    }
    Ok(())
}

fn cmd_count<W: Write>(
    n: u64,
    set: &str,
    cap: Option<u64>,
    table_in: Option<PathBuf>,
    table_out: Option<PathBuf>,
    table_csv: Option<PathBuf>,
    out: &mut W,
) -> Result<()> {
    let table = if let Some(path) = table_in {
        let mut file = File::open(path)?;
        crate::exactcount::PartitionTable::read_binary(&mut file)?
    } else {
        let cap = cap.unwrap_or(DEFAULT_NMAX_CAP);
        let parts = parse_part_set(set, n)?;
        partition_counts_capped(n, &parts, cap)?
    };
    writeln!(out, "{}", table.count(n)?)?;
    if let Some(path) = table_out {
        let mut file = File::create(path)?;
        table.write_binary(&mut file)?;
    }
    if let Some(path) = table_csv {
        let mut file = File::create(path)?;
        table.write_csv(&mut file)?;
    }
    Ok(())
}

fn cmd_estimate<W: Write>(n: u64, method: MethodArg, extra: f64, out: &mut W) -> Result<()> {
    require_asymptotic_n(n)?;
    let ctx = SaddleContext::for_max_target(n as f64)?;
    let estimate = match method {
        MethodArg::Main => ctx.main_estimate_log_with_truncation(n, extra)?,
        MethodArg::Simple => ctx.simple_estimate_log(n)?,
        MethodArg::Difference => ctx.difference_estimate_log_with_truncation(n, extra)?,
    };
    let record: EstimateRecord = estimate.into();
    writeln!(
        out,
        "{}",
        serde_json::to_string(&record).expect("serializable")
    )?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare<W: Write>(
    ns: Option<&str>,
    range: Option<&str>,
    factor: f64,
    set: &str,
    format: OutputFormat,
    cap: Option<u64>,
    extra: f64,
    out: &mut W,
) -> Result<()> {
    let grid = match (ns, range) {
        (Some(list), None) => parse_n_list(list)?,
        (None, Some(span)) => parse_geometric_range(span, factor)?,
        _ => {
            return Err(Error::InvalidInput(
                "compare needs exactly one of --ns or --range".into(),
            ))
        }
    };
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty comparison grid".into()));
    }
    if let Some(&low) = grid.iter().find(|&&n| n < 100) {
        return Err(Error::InvalidInput(format!(
            "n below asymptotic regime: comparison rows require n >= 100, got {low}"
        )));
    }
    let cap = cap.unwrap_or(DEFAULT_NMAX_CAP);
    let max_n = *grid.last().expect("nonempty");
    if max_n > cap {
        return Err(Error::ResourceLimit(format!(
            "comparison max n = {max_n} exceeds DP cap {cap}"
        )));
    }
    let parts = parse_part_set(set, max_n + 1)?;
    if parts.parts_up_to(1)? != [1] {
        return Err(Error::InvalidInput(
            "comparison requires a part set containing 1 (counts must stay positive)".into(),
        ));
    }
    let table = partition_counts_capped(max_n + 1, &parts, cap + 1)?;
    let ctx = SaddleContext::for_max_target(max_n as f64)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &n in &grid {
        let exact_log = log_biguint(table.count(n)?);
        let main = ctx.main_estimate_log_with_truncation(n, extra)?;
        let simple = ctx.simple_estimate_log(n)?;
        let difference = ctx.difference_estimate_log_with_truncation(n, extra)?;
        let diff_exact = difference_exact(n, &table)?
            .to_biguint()
            .ok_or_else(|| Error::NumericFailure(format!("count decreased at n = {n}")))?;
        rows.push(ComparisonRow {
            n,
            exact_log,
            main_log: main.log_value,
            simple_log: simple.log_value,
            diff_exact_log: log_biguint(&diff_exact),
            diff_est_log: difference.log_value,
            ratio_main: (exact_log - main.log_value).exp(),
        });
    }
    match format {
        OutputFormat::Csv => {
            writeln!(
                out,
                "n,exact_log,main_log,simple_log,diff_exact_log,diff_est_log,ratio_main"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.exact_log,
                    r.main_log,
                    r.simple_log,
                    r.diff_exact_log,
                    r.diff_est_log,
                    r.ratio_main
                )?;
            }
        }
        OutputFormat::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string(&rows).expect("serializable")
            )?;
        }
    }
    Ok(())
}

fn cmd_constant<W: Write>(digits: u32, out: &mut W) -> Result<()> {
    if digits == 0 || digits > 15 {
        return Err(Error::InvalidInput(format!(
            "digits must lie in 1..=15 (double-precision ceiling), got {digits}"
        )));
    }
    // A twentieth of the last requested digit, floored at the f64 noise
    // level, keeps the truncated decimal stable.
    let target = (0.05 * 10f64.powi(-(digits as i32))).max(5e-16);
    let approx = landau_ramanujan_constant(target)?;
    writeln!(out, "{}", truncate_decimals(approx.value, digits as usize))?;
    Ok(())
}

fn cmd_landau<W: Write>(x: u64, format: OutputFormat, cap: Option<u64>, out: &mut W) -> Result<()> {
    let k = landau_ramanujan_constant(1e-12)?.value;
    let reference = landau_reference(x as f64, k)?;
    let table = sieve_membership_capped(x, cap.unwrap_or(DEFAULT_SIEVE_CAP))?;
    let count = count_members_up_to(&table, x)?;
    let record = LandauRecord {
        x,
        count,
        reference,
        ratio: count as f64 / reference,
    };
    match format {
        OutputFormat::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string(&record).expect("serializable")
            )?;
        }
        OutputFormat::Csv => {
            writeln!(out, "x,count,reference,ratio")?;
            writeln!(
                out,
                "{},{},{},{}",
                record.x, record.count, record.reference, record.ratio
            )?;
        }
    }
    Ok(())
}

fn cmd_saddle<W: Write>(x: f64, extra: f64, out: &mut W) -> Result<()> {
    let ctx = SaddleContext::for_max_target(x)?;
    let point = ctx.solve_saddle_with_truncation(x, extra)?;
    writeln!(
        out,
        "{}",
        serde_json::to_string(&point).expect("serializable")
    )?;
    Ok(())
}

fn require_asymptotic_n(n: u64) -> Result<()> {
    if n < 100 {
        return Err(Error::InvalidInput(format!(
            "n below asymptotic regime: estimates require n >= 100, got {n}"
        )));
    }
    Ok(())
}

/// Resolves --set into a part set. `needed_limit` is how far the set must
/// reach (builtin sets are materialized up to it).
fn parse_part_set(source: &str, needed_limit: u64) -> Result<PartSet> {
    if source == "twosquares" {
        let table = sieve_membership_capped(needed_limit.max(1), DEFAULT_SIEVE_CAP)?;
        Ok(PartSet::from_membership(table, "twosquares"))
    } else if source == "all" {
        Ok(PartSet::all())
    } else if let Some(path) = source.strip_prefix("file:") {
        let file = File::open(path)?;
        PartSet::from_list_reader(file, source)
    } else if let Some(path) = source.strip_prefix("bitset:") {
        let mut file = File::open(path)?;
        let table = MembershipTable::read_bitset(&mut file)?;
        if table.limit() < needed_limit {
            return Err(Error::TableTooSmall {
                needed: needed_limit,
                available: table.limit(),
            });
        }
        Ok(PartSet::from_membership(table, source))
    } else {
        Err(Error::InvalidInput(format!(
            "unknown part set {source:?}; expected twosquares, all, file:PATH, or bitset:PATH"
        )))
    }
}

fn parse_n_list(list: &str) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    for piece in list.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        values.push(
            piece
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad n value in --ns: {piece:?}")))?,
        );
    }
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

fn parse_geometric_range(span: &str, factor: f64) -> Result<Vec<u64>> {
    if !factor.is_finite() || factor <= 1.0 {
        return Err(Error::InvalidInput(format!(
            "geometric factor must exceed 1, got {factor}"
        )));
    }
    let (start, end) = span
        .split_once(':')
        .or_else(|| span.split_once(".."))
        .ok_or_else(|| Error::InvalidInput(format!("bad --range {span:?}; expected START:END")))?;
    let start: u64 = start
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad range start {start:?}")))?;
    let end: u64 = end
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad range end {end:?}")))?;
    if start == 0 || end < start {
        return Err(Error::InvalidInput(format!(
            "bad range {start}:{end}; need 1 <= START <= END"
        )));
    }
    let mut values = Vec::new();
    let mut current = start as f64;
    while current.round() as u64 <= end {
        values.push(current.round() as u64);
        current *= factor;
    }
    values.dedup();
    Ok(values)
}

/// Decimal expansion truncated (not rounded) to `digits` places. Sixty
/// places is past the exact binary expansion of any f64 of this size, so
/// the formatter never rounds before the cut.
fn truncate_decimals(value: f64, digits: usize) -> String {
    let expanded = format!("{value:.60}");
    let dot = expanded.find('.').expect("fixed-point format");
    expanded[..dot + 1 + digits].to_string()
}
