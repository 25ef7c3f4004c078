use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use boolscramble::boolrank::RankBudget;
use boolscramble::characterize::{match_extremal, quotient};
use boolscramble::families::{parse_block_list, FamilyName};
use boolscramble::harness::{
    exhaustive_verify, family_roundtrip_campaign, random_factor_pair_campaign, CampaignReport,
    CheckSelection, LONG_EXHAUSTIVE_MAX, SHORT_EXHAUSTIVE_MAX,
};
use boolscramble::report::{analyze, AnalysisOptions};
use boolscramble::{parse_matrix, BoolMatrix, Error};
use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

const EXIT_NO_MATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SHAPE: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "boolscramble", version, about = "Scrambling index, exponent and Boolean rank of 0/1 matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants and bound checks for a square matrix file.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Skip the Boolean rank and the checks that depend on it.
        #[arg(long)]
        no_rank: bool,
        /// Boolean rank time limit in seconds.
        #[arg(long, value_name = "S", default_value_t = 10.0)]
        rank_timeout: f64,
    },
    /// Write a member of a named family in the matrix text format.
    Generate {
        /// wielandt:N, jn:N, m1, m2, m3, t2:I or t3:I
        family: String,
        #[arg(long = "b", value_name = "B")]
        b: Option<usize>,
        /// Comma-separated block sizes.
        #[arg(long, value_name = "LIST")]
        blocks: Option<String>,
        /// Output file; stdout when absent.
        #[arg(short = 'o', long = "output", value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Run a verification campaign; exits 0 iff there are no violations.
    #[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random", "families"])))]
    Verify {
        /// Matrix order for --exhaustive; largest factor dimension for --random (default 8).
        #[arg(long, value_name = "N")]
        order: Option<usize>,
        /// Sweep every matrix of the given order.
        #[arg(long)]
        exhaustive: bool,
        /// Random factor-pair campaign with T trials.
        #[arg(long, value_name = "T")]
        random: Option<u64>,
        /// Family round-trip campaign with T random specs.
        #[arg(long, value_name = "T")]
        families: Option<u64>,
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// Allow the long-running order-5 sweep.
        #[arg(long)]
        long: bool,
        #[arg(long)]
        json: bool,
        /// Write counterexamples to this file.
        #[arg(long, value_name = "PATH")]
        dump: Option<PathBuf>,
    },
    /// Recognize a square matrix as a relabeled extremal family member.
    Match {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSquare { .. } => EXIT_SHAPE,
            Error::GuardExceeded(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            path,
            json,
            no_rank,
            rank_timeout,
        } => cmd_analyze(&path, json, no_rank, rank_timeout),
        Command::Generate {
            family,
            b,
            blocks,
            output,
        } => cmd_generate(&family, b, blocks.as_deref(), output.as_deref()),
        Command::Verify {
            order,
            exhaustive,
            random,
            families,
            seed,
            long,
            json,
            dump,
        } => {
            let mode = if exhaustive {
                Mode::Exhaustive
            } else if let Some(t) = random {
                Mode::Random(t)
            } else {
                Mode::Families(families.expect("mode group is required"))
            };
            cmd_verify(mode, order, seed, long, json, dump.as_deref())
        }
        Command::Match { path, json } => cmd_match(&path, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_square(path: &Path) -> Result<BoolMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let m = parse_matrix(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    m.order("input")?;
    Ok(m)
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn cmd_analyze(path: &Path, json: bool, no_rank: bool, rank_timeout: f64) -> CmdResult {
    if !(rank_timeout.is_finite() && rank_timeout > 0.0) {
        return Err(Failure::usage("--rank-timeout must be a positive number of seconds"));
    }
    let m = read_square(path)?;
    let opts = AnalysisOptions {
        rank_budget: (!no_rank).then(|| RankBudget {
            timeout: Some(Duration::from_secs_f64(rank_timeout)),
            ..RankBudget::default()
        }),
    };
    let report = analyze(&m, &opts)?;
    if json {
        print_json(&report);
    } else {
        print!("{report}");
    }
    Ok(if report.has_violation() { EXIT_VIOLATION } else { 0 })
}

fn cmd_generate(family: &str, b: Option<usize>, blocks: Option<&str>, output: Option<&Path>) -> CmdResult {
    let name: FamilyName = family.parse()?;
    let blocks = blocks.map(parse_block_list).transpose()?;
    let m = name.into_spec(b, blocks)?.generate()?;
    match output {
        Some(p) => fs::write(p, m.to_text())
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{}", m.to_text()),
    }
    Ok(0)
}

enum Mode {
    Exhaustive,
    Random(u64),
    Families(u64),
}

fn cmd_verify(mode: Mode, order: Option<usize>, seed: Option<u64>, long: bool, json: bool, dump: Option<&Path>) -> CmdResult {
    let needs_seed = !matches!(mode, Mode::Exhaustive);
    if needs_seed && json && seed.is_none() {
        return Err(Failure::usage("--seed is required for randomized campaigns with --json"));
    }
    let seed = seed.unwrap_or(0);
    let report = match mode {
        Mode::Exhaustive => {
            let n = order.ok_or_else(|| Failure::usage("--exhaustive needs --order N"))?;
            let max = if long { LONG_EXHAUSTIVE_MAX } else { SHORT_EXHAUSTIVE_MAX };
            if !(1..=max).contains(&n) {
                let hint = if n == LONG_EXHAUSTIVE_MAX { " (order 5 needs --long)" } else { "" };
                return Err(Failure::usage(format!("exhaustive order must be in 1..={max}{hint}")));
            }
            exhaustive_verify(n, &CheckSelection::all(), long)?
        }
        Mode::Random(trials) => {
            let max = order.unwrap_or(8);
            random_factor_pair_campaign(trials, 2..=max, 2..=max, seed)?
        }
        Mode::Families(specs) => family_roundtrip_campaign(specs, seed)?,
    };
    if let Some(p) = dump {
        fs::write(p, report.dump_violations())
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))?;
    }
    if json {
        print_json(&report);
    } else {
        print_campaign(&report, needs_seed.then_some(seed));
    }
    Ok(if report.passed() { 0 } else { EXIT_VIOLATION })
}

fn print_campaign(r: &CampaignReport, seed: Option<u64>) {
    println!("{}", if r.passed() { "PASS" } else { "FAIL" });
    if let Some(s) = seed {
        println!("seed             {s}");
    }
    println!("examined         {}", r.total_examined);
    println!("primitive        {}", r.primitive_count);
    println!("violations       {}", r.violations.len());
    for (k, v) in &r.attained_counts {
        println!("attained {k:<24} {v}");
    }
    println!("elapsed          {:.3}s", r.elapsed.as_secs_f64());
    print!("{}", r.dump_violations());
}

#[derive(Serialize)]
struct MatchReport {
    matched: bool,
    #[serde(flatten)]
    spec: Option<boolscramble::families::FamilySpec>,
    class_sizes: Vec<usize>,
}

fn cmd_match(path: &Path, json: bool) -> CmdResult {
    let m = read_square(path)?;
    let found = match_extremal(&m);
    let class_sizes = quotient(&m)?.class_sizes();
    if json {
        print_json(&MatchReport {
            matched: found.is_some(),
            spec: found.clone(),
            class_sizes,
        });
    } else {
        match &found {
            Some(spec) => {
                println!("{spec}");
                println!("classes {class_sizes:?}");
            }
            None => println!("no match"),
        }
    }
    Ok(if found.is_some() { 0 } else { EXIT_NO_MATCH })
}
