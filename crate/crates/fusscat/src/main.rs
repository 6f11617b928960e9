//! Command-line front end: exact counts, the level/outdegree table, the
//! main bijection in both directions, and the verification sweeps.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 resource cap exceeded.

use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fusscat::bijections::{decode_marked, encode_marked, MarkedTree, SiblingSeq};
use fusscat::counting::{count_atleast, count_exact, count_refined, Count};
use fusscat::generate::DEFAULT_CAP;
use fusscat::table::CountTable;
use fusscat::tree::{TupletTree, VertexAddr};
use fusscat::verify::{run_verification, Suite};
use fusscat::{Error, LatticePath};

#[derive(Parser)]
#[command(
    name = "fusscat",
    version,
    about = "Exact enumeration of rooted d-tuplet trees and Fuss-Catalan paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form vertex count.
    Count(CountArgs),
    /// Print the (level x outdegree) count table with margins.
    Table(TableArgs),
    /// Apply the main bijection to a marked tree, or invert it.
    Map(MapArgs),
    /// Run verification sweeps over a range of instances.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMode {
    /// outdegree >= k at level >= l
    Atleast,
    /// outdegree exactly k at level exactly l
    Exact,
    /// sibling-constrained: >= i elders, >= j youngers, >= k children
    Refined,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long = "d")]
    d: u64,
    #[arg(long = "n")]
    n: u64,
    #[arg(long = "k")]
    k: u64,
    #[arg(long = "level")]
    level: u64,
    #[arg(long = "i")]
    i: Option<u64>,
    #[arg(long = "j")]
    j: Option<u64>,
    #[arg(long = "mode", value_enum, default_value = "atleast")]
    mode: CountMode,
    #[arg(long = "json")]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Formula,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Pretty,
    Csv,
    Json,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long = "d")]
    d: usize,
    #[arg(long = "n")]
    n: usize,
    #[arg(long = "source", value_enum, default_value = "formula")]
    source: SourceArg,
    #[arg(long = "format", value_enum, default_value = "pretty")]
    format: FormatArg,
    #[arg(long = "cap")]
    cap: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long = "direction", value_enum)]
    direction: Direction,
    /// Canonical tree text, e.g. `d=2;1,0,0` (forward).
    #[arg(long = "tree")]
    tree: Option<String>,
    /// Vertex address, e.g. `root` or `0.1/1.0` (forward).
    #[arg(long = "vertex")]
    vertex: Option<String>,
    /// Digit sequence, e.g. `(0,1)` (inverse).
    #[arg(long = "p")]
    p: Option<String>,
    /// Canonical path text, e.g. `d=2;start=0;UDDD` (inverse).
    #[arg(long = "path")]
    path: Option<String>,
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long = "k")]
    k: usize,
    #[arg(long = "level")]
    level: usize,
    #[arg(long = "json")]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Inclusive range of arities, e.g. `1..3` or `2`.
    #[arg(long = "d", default_value = "1..3")]
    d: String,
    /// Inclusive range of sizes, e.g. `1..4` or `3`.
    #[arg(long = "n", default_value = "0..4")]
    n: String,
    /// Comma-separated subset of formulas,bijections,sieve,telescoping.
    #[arg(long = "suites")]
    suites: Option<String>,
    #[arg(long = "cap")]
    cap: Option<u64>,
    #[arg(long = "workers", default_value = "4")]
    workers: usize,
    #[arg(long = "json")]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Table(args) => cmd_table(args),
        Command::Map(args) => cmd_map(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InstanceTooLarge(..) => 3,
        Error::Arithmetic(..) => 1,
        _ => 2,
    }
}

fn require_positive_d(d: u64) -> Result<(), Error> {
    if d == 0 {
        return Err(Error::Parse("tuplet arity --d must be >= 1".into()));
    }
    Ok(())
}

/// Cap resolution: explicit flag, then FUSSCAT_CAP, then the default.
fn resolve_cap(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("FUSSCAT_CAP") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("FUSSCAT_CAP=`{text}` is not an integer"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn cmd_count(args: CountArgs) -> Result<ExitCode, Error> {
    require_positive_d(args.d)?;
    let value: Count = match args.mode {
        CountMode::Atleast => {
            reject_ij(&args)?;
            count_atleast(args.d, args.n, args.k, args.level)
        }
        CountMode::Exact => {
            reject_ij(&args)?;
            count_exact(args.d, args.n, args.k, args.level)?
        }
        CountMode::Refined => {
            let i = args
                .i
                .ok_or_else(|| Error::Parse("--mode refined requires --i".into()))?;
            let j = args
                .j
                .ok_or_else(|| Error::Parse("--mode refined requires --j".into()))?;
            count_refined(args.d, args.n, i, j, args.k, args.level)?
        }
    };
    if args.json {
        let mode = match args.mode {
            CountMode::Atleast => "atleast",
            CountMode::Exact => "exact",
            CountMode::Refined => "refined",
        };
        let mut params = serde_json::json!({
            "d": args.d, "n": args.n, "k": args.k, "level": args.level, "mode": mode,
        });
        if let Some(i) = args.i {
            params["i"] = i.into();
        }
        if let Some(j) = args.j {
            params["j"] = j.into();
        }
        println!(
            "{}",
            serde_json::json!({ "params": params, "value": value.to_string() })
        );
    } else {
        println!("{value}");
    }
    Ok(ExitCode::SUCCESS)
}

fn reject_ij(args: &CountArgs) -> Result<(), Error> {
    if args.i.is_some() || args.j.is_some() {
        return Err(Error::Parse(
            "--i and --j only apply to --mode refined".into(),
        ));
    }
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, Error> {
    require_positive_d(args.d as u64)?;
    let cap = resolve_cap(args.cap)?;
    let table = match args.source {
        SourceArg::Formula => CountTable::from_formula(args.d, args.n)?,
        SourceArg::Oracle => CountTable::from_oracle(args.d, args.n, cap)?,
    };
    match args.format {
        FormatArg::Pretty => print!("{}", table.render_pretty()),
        FormatArg::Csv => print!("{}", table.render_csv()),
        FormatArg::Json => println!("{}", table.to_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_map(args: MapArgs) -> Result<ExitCode, Error> {
    match args.direction {
        Direction::Forward => {
            let tree_text = args
                .tree
                .ok_or_else(|| Error::Parse("--direction forward requires --tree".into()))?;
            let vertex_text = args
                .vertex
                .ok_or_else(|| Error::Parse("--direction forward requires --vertex".into()))?;
            let tree = TupletTree::parse(&tree_text)?;
            let violations = tree.validate();
            if !violations.is_empty() {
                return Err(Error::Parse(format!("invalid tree: {}", violations[0])));
            }
            if let Some(n) = args.n {
                if tree.tuplet_count() != n {
                    return Err(Error::Parse(format!(
                        "tree has {} tuplets but --n {n} was given",
                        tree.tuplet_count()
                    )));
                }
            }
            let vertex = VertexAddr::parse(&vertex_text)?;
            let marked = MarkedTree::new(tree, vertex)?;
            let image = encode_marked(&marked, args.k, args.level)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "p": image.digits.to_string(),
                        "path": image.path.to_text(),
                    })
                );
            } else {
                println!("p = {}", image.digits);
                println!("path = {}", image.path.to_text());
            }
        }
        Direction::Inverse => {
            let p_text = args
                .p
                .ok_or_else(|| Error::Parse("--direction inverse requires --p".into()))?;
            let path_text = args
                .path
                .ok_or_else(|| Error::Parse("--direction inverse requires --path".into()))?;
            let p = SiblingSeq::parse(&p_text)?;
            let path = LatticePath::parse(&path_text)?;
            let d = path.d();
            let n = match args.n {
                Some(n) => n,
                None => {
                    // |path| = (d+1)n - k
                    let total = path.len() + args.k;
                    if !total.is_multiple_of(d + 1) {
                        return Err(Error::Parse(
                            "path length is inconsistent with k and d; pass --n explicitly".into(),
                        ));
                    }
                    total / (d + 1)
                }
            };
            let marked = decode_marked(&p, &path, d, n, args.k, args.level)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "tree": marked.tree().to_text(),
                        "vertex": marked.vertex().to_string(),
                    })
                );
            } else {
                println!("tree = {}", marked.tree().to_text());
                println!("vertex = {}", marked.vertex());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parse `a..b` (inclusive) or a single number.
fn parse_range(text: &str) -> Result<RangeInclusive<usize>, Error> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad range bound `{lo}`")))?;
        let hi = hi
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad range bound `{hi}`")))?;
        Ok(lo..=hi)
    } else {
        let v = text
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad range `{text}`")))?;
        Ok(v..=v)
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let cap = resolve_cap(args.cap)?;
    let d_range = parse_range(&args.d)?;
    let n_range = parse_range(&args.n)?;
    if !d_range.is_empty() {
        require_positive_d(*d_range.start() as u64)?;
    }
    let suites: Vec<Suite> = match &args.suites {
        None => Suite::ALL.to_vec(),
        Some(text) => {
            let mut suites = Vec::new();
            for part in text.split(',') {
                suites.push(Suite::parse(part)?);
            }
            suites
        }
    };
    let report = run_verification(d_range, n_range, &suites, cap, args.workers);
    if args.json {
        println!("{}", report.to_json());
    } else {
        for cell in &report.cells {
            if cell.passed() {
                println!(
                    "d={} n={} {}: PASS ({} checks)",
                    cell.d,
                    cell.n,
                    cell.suite.as_str(),
                    cell.checks
                );
            } else {
                println!(
                    "d={} n={} {}: FAIL ({} checks, {} failures)",
                    cell.d,
                    cell.n,
                    cell.suite.as_str(),
                    cell.checks,
                    cell.failures.len()
                );
                for failure in &cell.failures {
                    println!("  {failure}");
                }
            }
        }
        println!(
            "{}: {} cells, {} checks",
            if report.passed() { "PASS" } else { "FAIL" },
            report.cells.len(),
            report.total_checks()
        );
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
