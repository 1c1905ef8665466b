//! Command-line front end: bounds, redundancy maps, the two-probability
//! conjecture sweep, V2V bounds, and exhaustive-vs-pruned comparisons.
//!
//! Single queries print JSON on stdout; grids are written as CSV files.
//! Exit codes: 0 success, 2 usage or domain error, 3 internal invariant
//! violation.

mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use huffbound::conjecture::check_grid;
use huffbound::enumerate::trajectory_count;
use huffbound::exactnum::{parse_rational, Rational};
use huffbound::map::{sweep, to_csv, MapGrid};
use huffbound::optimize::{r_min_n, r_min_upto, threshold};
use huffbound::prune::{dump_psi, r_min_star_with, PruneOptions};
use huffbound::source::parse_probability_list;
use huffbound::v2v::{v2v_code, v2v_prune_bound_for, Dictionary, Word};
use huffbound::{Error, Exec, Source, SubSource};

use report::{
    BoundReport, Codeword, ConjectureSummary, MapSummary, OracleReport, TrajectoryCount, V2vReport, Value,
};

#[derive(Parser, Debug)]
#[command(name = "huffbound", version, about = "Exact lower bounds on Huffman code redundancy")]
struct Cli {
    /// Decimal digits in reported values
    #[arg(long, global = true, default_value_t = 6)]
    digits: usize,

    /// Run on a single thread
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Least redundancy over sources containing the known probabilities
    Bound(BoundArgs),
    /// Write a CSV grid of bounds over one or two swept probabilities
    Map(MapArgs),
    /// Compare the two-probability closed form against the engine on a grid
    Conjecture(ConjectureArgs),
    /// Redundancy of a V2V dictionary, or a bound for dictionaries containing known words
    V2v(V2vArgs),
    /// Compare the exhaustive and pruned bounds
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
#[group(id = "size", multiple = false)]
struct SizeArgs {
    /// Alphabets of exactly N symbols
    #[arg(long, group = "size")]
    n: Option<usize>,

    /// Alphabets of 2 up to N symbols
    #[arg(long, group = "size")]
    upto: Option<usize>,

    /// Alphabets of any size (default)
    #[arg(long, group = "size")]
    general: bool,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Known probabilities, e.g. 49/100,1/2
    #[arg(long, allow_hyphen_values = true)]
    known: String,

    #[command(flatten)]
    size: SizeArgs,

    /// Print one line per harvested code to stderr (general bound only)
    #[arg(long)]
    dump_psi: bool,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Number of swept probabilities (1 or 2)
    #[arg(long, default_value_t = 1)]
    axes: usize,

    /// Grid step, e.g. 1/100
    #[arg(long)]
    step: String,

    /// First grid value (default: the step)
    #[arg(long)]
    lo: Option<String>,

    /// Last grid value (default: 1)
    #[arg(long)]
    hi: Option<String>,

    /// Further known probabilities held fixed
    #[arg(long, default_value = "")]
    fixed: String,

    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    /// Grid step over both probabilities
    #[arg(long, default_value = "1/50")]
    step: String,

    /// Sweep at step 1/1000 (long running)
    #[arg(long)]
    full: bool,

    /// CSV file for mismatching points
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct V2vArgs {
    /// Base source probabilities, e.g. 9/10,1/10
    #[arg(long)]
    base: String,

    /// Exhaustive dictionary, e.g. a1a1,a1a2,a2
    #[arg(long, conflicts_with_all = ["known_words", "max_len"])]
    dict: Option<String>,

    /// Words known to be in the dictionary
    #[arg(long, requires = "max_len")]
    known_words: Option<String>,

    /// Maximum word length of candidate dictionaries
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Known probabilities
    #[arg(long)]
    known: String,

    /// Largest alphabet enumerated exhaustively
    #[arg(long)]
    upto: usize,
}

/// Thresholds above this trigger a warning before general-bound runs.
const LONG_RUN_THRESHOLD: usize = 40;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Invariant(_)) { 3 } else { 2 })
        }
    }
}

fn print_json(value: &impl Serialize) -> huffbound::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(())
}

fn run(cli: &Cli) -> huffbound::Result<()> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let digits = cli.digits;
    match &cli.command {
        Command::Bound(args) => bound(args, exec, digits),
        Command::Map(args) => map(args, exec, digits),
        Command::Conjecture(args) => conjecture(args, exec, digits),
        Command::V2v(args) => v2v(args, digits),
        Command::Oracle(args) => oracle(args, exec, digits),
    }
}

fn known_labels(x: &SubSource) -> Vec<String> {
    x.probabilities().map(ToString::to_string).collect()
}

fn bound(args: &BoundArgs, exec: Exec, digits: usize) -> huffbound::Result<()> {
    let x = SubSource::parse_known(&args.known)?;
    let report = if let Some(n) = args.size.n {
        BoundReport::new("fixed-n", known_labels(&x), &r_min_n(&x, n)?, digits)
    } else if let Some(n) = args.size.upto {
        BoundReport::new("upto-n", known_labels(&x), &r_min_upto(&x, n)?, digits)
    } else {
        let t = if x.is_empty() { None } else { Some(threshold(&x)?) };
        if let Some(t) = t.filter(|&t| t > LONG_RUN_THRESHOLD) {
            eprintln!("note: threshold T(X) = {t}; the search may take a while");
        }
        let (r, run) = r_min_star_with(&x, PruneOptions { dedup: true, exec })?;
        if args.dump_psi {
            eprint!("{}", dump_psi(&run, &x, digits)?);
        }
        let mut report = BoundReport::new("general", known_labels(&x), &r, digits);
        report.psi_size = Some(run.psi.len());
        report.psi_raw = Some(run.stats.psi_raw);
        report.threshold = t;
        report
    };
    print_json(&report)
}

fn map(args: &MapArgs, exec: Exec, digits: usize) -> huffbound::Result<()> {
    let step = parse_rational(&args.step)?;
    let mut grid = MapGrid::new(args.axes, step, parse_probability_list(&args.fixed)?);
    if let Some(lo) = &args.lo {
        grid.lo = parse_rational(lo)?;
    }
    if let Some(hi) = &args.hi {
        grid.hi = parse_rational(hi)?;
    }
    let rows = sweep(&grid, exec)?;
    fs::write(&args.out, to_csv(&rows, args.axes, digits))
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", args.out.display())))?;
    let distinct_codes = rows.iter().map(|r| r.code_id).max().map_or(0, |m| m + 1);
    print_json(&MapSummary { rows: rows.len(), distinct_codes, out: args.out.display().to_string() })
}

fn conjecture(args: &ConjectureArgs, exec: Exec, digits: usize) -> huffbound::Result<()> {
    let step = if args.full { Rational::new(1.into(), 1000.into()) } else { parse_rational(&args.step)? };
    let hi = Rational::from_integer(1.into()) - &step;
    let report = check_grid(&step, &step, &hi, exec)?;
    if let Some(out) = &args.out {
        fs::write(out, report.to_csv(digits))
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", out.display())))?;
    }
    print_json(&ConjectureSummary {
        step: step.to_string(),
        points: report.points,
        mismatches: report.mismatches.len(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn v2v(args: &V2vArgs, digits: usize) -> huffbound::Result<()> {
    let base = Source::from_probs(&parse_probability_list(&args.base)?)?;
    if let Some(dict) = &args.dict {
        let w: Dictionary = dict.parse()?;
        let (code, r) = v2v_code(&w, &base)?;
        let codewords = code
            .codewords()
            .into_iter()
            .map(|(word, codeword)| Codeword { word: word.to_string(), codeword })
            .collect();
        return print_json(&V2vReport {
            mode: "dictionary",
            value: Value::new(&r, digits),
            code: Some(code.to_string()),
            codewords,
            threshold: None,
        });
    }
    let (Some(words), Some(max_len)) = (&args.known_words, args.max_len) else {
        return Err(Error::Precondition("give either --dict or --known-words with --max-len".into()));
    };
    let words: Vec<Word> = words.split(',').map(str::parse).collect::<huffbound::Result<_>>()?;
    let probs = words.iter().map(|w| w.probability(&base)).collect::<huffbound::Result<Vec<_>>>()?;
    let t = threshold(&SubSource::known(&probs)?)?;
    if t > LONG_RUN_THRESHOLD {
        eprintln!("note: threshold T(X) = {t}; the search may take a while");
    }
    let r = v2v_prune_bound_for(&words, &base, max_len)?;
    print_json(&V2vReport {
        mode: "known-words",
        value: Value::new(&r, digits),
        code: None,
        codewords: Vec::new(),
        threshold: Some(t),
    })
}

fn oracle(args: &OracleArgs, exec: Exec, digits: usize) -> huffbound::Result<()> {
    let x = SubSource::parse_known(&args.known)?;
    let t = threshold(&x)?;
    let exhaustive = r_min_upto(&x, args.upto)?;
    let (pruned, run) = r_min_star_with(&x, PruneOptions { dedup: true, exec })?;
    let comparison = match exhaustive.value.cmp(&pruned.value) {
        std::cmp::Ordering::Equal => "Equal",
        std::cmp::Ordering::Less => "ExhaustiveLower",
        std::cmp::Ordering::Greater => "PrunedLower",
    };
    print_json(&OracleReport {
        known: known_labels(&x),
        upto: args.upto,
        threshold: t,
        exhaustive: Value::new(&exhaustive.value, digits),
        pruned: Value::new(&pruned.value, digits),
        comparison,
        exhaustive_code: exhaustive.best_code.to_string(),
        pruned_code: pruned.best_code.to_string(),
        psi: run.psi.iter().filter_map(|st| st.code()).map(ToString::to_string).collect(),
        trajectory_counts: (2..=args.upto)
            .map(|n| TrajectoryCount { n, count: trajectory_count(n).to_string() })
            .collect(),
    })
}
