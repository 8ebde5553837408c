//! `nonoverlap` command-line tool.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 recipe
//! infeasible, 4 capacity or time budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use nonoverlap::bounds;
use nonoverlap::constructions::{
    construct_c2, select_params_best, select_params_lemma2, select_params_thm6,
    ConstructionParams, ConstructionResult,
};
use nonoverlap::oracle::{check_conjecture1, check_conjecture2, exact_search, SearchLimits};
use nonoverlap::sfree::{count_sfree, sfree_lower_bound, PatternSet};
use nonoverlap::sync_sim::{run_trials, StreamConfig};
use nonoverlap::words::verify_code;
use nonoverlap::{Code, Error, Verification};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

#[derive(Parser)]
#[command(name = "nonoverlap", version, about = "Non-overlapping (cross-bifix-free) codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    C1,
    C2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Auto {
    Lemma2,
    Thm6,
    Best,
}

#[derive(Subcommand)]
enum Command {
    /// Build a prefix-anchored code and report its size.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "c2")]
        scheme: Scheme,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<u32>,
        /// |S|; lexicographic-first selection. Defaults to l^k.
        #[arg(long)]
        s: Option<u64>,
        /// Recipe used for parameters not given explicitly.
        #[arg(long, value_enum)]
        auto: Option<Auto>,
        /// Alphabet sizes up to this are swept exhaustively by `--auto best`.
        #[arg(long, default_value_t = 64)]
        budget: u32,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a code file is non-overlapping.
    Verify { file: PathBuf },
    /// Upper and lower bounds on C(n, q).
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    /// Count words of length r avoiding the lexicographic-first s words of {0..l-1}^k.
    Count {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        r: usize,
    },
    /// Exact C(n, q) by maximum-clique search.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = nonoverlap::oracle::DEFAULT_VERTEX_CAP)]
        cap: usize,
        #[arg(long)]
        time_ms: Option<u64>,
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare exact values with the k = n-1 family and the conjectured limit.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q_min: u32,
        #[arg(long)]
        q_max: u32,
        #[arg(long)]
        time_ms: Option<u64>,
    },
    /// Embed codewords as sync markers in random streams and detect them.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        length: usize,
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, env = "NONOVERLAP_SEED", default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Exit(u8, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter(_) | Error::Parse { .. } => EXIT_USAGE,
            Error::RecipeInfeasible(_) => EXIT_INFEASIBLE,
            Error::Capacity(_) => EXIT_CAPACITY,
        };
        Failure::Exit(code, e.to_string())
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Exit(EXIT_USAGE, format!("{}: {e}", path.display()))
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_code(path: &PathBuf) -> Result<Code, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(Code::parse_file(&text)?)
}

#[allow(clippy::too_many_arguments)]
fn resolve_params(
    n: usize,
    q: u32,
    scheme: Scheme,
    k: Option<usize>,
    l: Option<u32>,
    s: Option<u64>,
    auto: Option<Auto>,
    budget: u32,
) -> Result<ConstructionResult, Failure> {
    let explicit = |k: usize, l: u32| -> Result<ConstructionParams, Error> {
        match s {
            Some(s) => ConstructionParams::lex_first(n, q, k, l, s),
            None => ConstructionParams::all_of_i(n, q, k, l),
        }
    };
    let params = match (scheme, auto, k, l) {
        (Scheme::C1, _, Some(k), _) => ConstructionParams::zero_run(n, q, k)?,
        (Scheme::C1, Some(Auto::Lemma2) | None, None, _) => select_params_lemma2(n, q)?,
        (Scheme::C1, Some(_), None, _) => {
            return Err(Failure::Exit(
                EXIT_USAGE,
                "scheme c1 only supports --auto lemma2".into(),
            ))
        }
        (Scheme::C2, _, Some(k), Some(l)) => explicit(k, l)?,
        (Scheme::C2, Some(Auto::Lemma2), _, _) => select_params_lemma2(n, q)?,
        (Scheme::C2, Some(Auto::Thm6), _, _) => select_params_thm6(n, q)?,
        (Scheme::C2, Some(Auto::Best), _, _) => return Ok(select_params_best(n, q, budget)?),
        (Scheme::C2, None, _, _) => {
            return Err(Failure::Exit(
                EXIT_USAGE,
                "scheme c2 needs --k and --l, or --auto".into(),
            ))
        }
    };
    Ok(construct_c2(&params, false)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct {
            n,
            q,
            scheme,
            k,
            l,
            s,
            auto,
            budget,
            enumerate,
            out,
        } => {
            let mut result = resolve_params(n, q, scheme, k, l, s, auto, budget)?;
            if enumerate {
                result = construct_c2(&result.params, true)?;
            }
            let p = &result.params;
            let summary = format!("size={} k={} l={} s={}", result.size, p.k, p.l, p.s);
            match (&result.code, out) {
                (Some(code), Some(path)) => {
                    fs::write(&path, code.to_file_string(&[p.to_string()]))
                        .map_err(|e| io_failure(&path, e))?;
                    println!("{summary}");
                }
                (Some(code), None) => {
                    print!("{}", code.to_file_string(&[p.to_string(), summary]));
                }
                (None, _) => println!("{summary}"),
            }
            Ok(())
        }
        Command::Verify { file } => {
            let code = read_code(&file)?;
            match verify_code(&code)? {
                Verification::Pass => {
                    println!("PASS size={} n={} q={}", code.len(), code.n(), code.q());
                    Ok(())
                }
                Verification::Fail {
                    prefix_word,
                    suffix_word,
                    overlap,
                } => {
                    println!("FAIL prefix_word={prefix_word} suffix_word={suffix_word} overlap={overlap}");
                    Err(Failure::Exit(EXIT_VERIFY_FAIL, String::new()))
                }
            }
        }
        Command::Bound { n, q } => {
            let headline = bounds::headline_bound(n, q)?;
            let refined = bounds::upper_bound(n, q)?;
            let lemma2 = bounds::lower_bound_lemma2(n, q)?;
            println!("n={n} q={q}");
            println!("headline_upper={headline} headline_upper_decimal={}", bounds::decimal(&headline, 3));
            println!("refined_upper={refined}");
            println!("lemma2_lower={} lemma2_regime={}", lemma2.value, lemma2.in_regime);
            match bounds::exact_value(n, q)? {
                Some(v) => println!("exact={v}"),
                None => println!("exact=unknown"),
            }
            println!("refined_{}", bounds::ratio_report(n, q, &refined)?.render());
            Ok(())
        }
        Command::Count { q, k, l, s, r } => {
            let patterns = match s {
                Some(s) => PatternSet::lex_first(q, l, k, s)?,
                None => PatternSet::full(q, l, k)?,
            };
            let count = count_sfree(&patterns, r)?;
            let lower = match sfree_lower_bound(&patterns, r) {
                Ok(b) => b.to_string(),
                Err(_) => "vacuous".to_string(),
            };
            println!("count={count} lower_bound={lower} s={}", patterns.size());
            Ok(())
        }
        Command::Search {
            n,
            q,
            cap,
            time_ms,
            symmetry,
            out,
        } => {
            let limits = SearchLimits {
                vertex_cap: cap,
                time_budget: time_ms.map(Duration::from_millis),
                symmetry,
                ..SearchLimits::default()
            };
            let r = exact_search(n, q, &limits)?;
            write_or_print(out.as_ref(), &r.witness.to_file_string(&[format!("search n={n} q={q}")]))?;
            println!("{}", r.summary_line());
            if r.complete {
                Ok(())
            } else {
                Err(Failure::Exit(EXIT_CAPACITY, "time budget exhausted".into()))
            }
        }
        Command::Conjecture {
            n,
            q_min,
            q_max,
            time_ms,
        } => {
            let limits = SearchLimits {
                time_budget: time_ms.map(Duration::from_millis),
                ..SearchLimits::default()
            };
            for row in check_conjecture2(n, q_min..=q_max, &limits)? {
                println!("conjecture2 {}", row.render());
            }
            for row in check_conjecture1(n, q_min..=q_max, &limits)? {
                println!("conjecture1 {}", row.render());
            }
            Ok(())
        }
        Command::Simulate {
            code,
            length,
            rate,
            trials,
            seed,
        } => {
            let code = read_code(&code)?;
            let expected = code.len() as f64 / (code.q() as f64).powi(code.n() as i32);
            let cfg = StreamConfig {
                code,
                stream_length: length,
                marker_rate: rate,
                seed,
            };
            let summary = run_trials(&cfg, trials)?;
            println!("trial,delay,chance_hits,min_gap");
            for r in &summary.records {
                println!("{}", r.csv_line());
            }
            println!("{}", summary.summary_line(expected));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Exit(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
