//! The `convex` command line: count, list, gen, rate, bench, verify, solve.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or parse error, 3 listing
//! truncated by `--limit`.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::apps::SolveInstance;
use crate::bench::{run_bench, BenchRecord, Clock, Family, MonotonicClock, SimulatedClock};
use crate::count::{count_gk, rate_table};
use crate::enumerate::list_gk;
use crate::error::Error;
use crate::extremal::{caterpillar, gen_fully_loaded, gen_random};
use crate::tree::Tree;
use crate::verify::{run_verify, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TRUNCATED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "convex", version, about = "Count and list convex characters with a minimum block size")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Count g_k characters of every tree in a file (one Newick tree per line)
    Count {
        /// Tree file, or - for standard input
        file: String,
        #[arg(short, long)]
        k: usize,
    },
    /// List g_k characters, one per line
    List {
        file: String,
        #[arg(short, long)]
        k: usize,
        /// Stop after this many characters per tree
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Generate a tree in canonical Newick
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        n: usize,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Growth-rate table: k, min_rate, max_rate
    Rate {
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// Largest n whose full listing fits in each time budget
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [GenFamily::Caterpillar, GenFamily::Random])]
        family: Vec<GenFamily>,
        #[arg(short, long, value_delimiter = ',', default_values_t = [1, 2, 3, 4, 5, 6])]
        k: Vec<usize>,
        /// Budgets in seconds
        #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
        budget: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        /// Use the deterministic clock (1 microsecond per taxon per character)
        #[arg(long)]
        simulated: bool,
    },
    /// Run the randomized property suite against the brute-force oracle
    Verify {
        #[arg(long, default_value_t = 9)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Solve a JSON instance
    Solve {
        /// Instance file, or - for standard input
        instance: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenFamily {
    Caterpillar,
    Random,
    #[value(name = "fully_loaded")]
    FullyLoaded,
}

impl From<GenFamily> for Family {
    fn from(f: GenFamily) -> Family {
        match f {
            GenFamily::Caterpillar => Family::Caterpillar,
            GenFamily::Random => Family::Random,
            GenFamily::FullyLoaded => Family::FullyLoaded,
        }
    }
}

/// Failure with its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::Syntax { .. }
            | Error::InvalidLabel(_)
            | Error::DuplicateLabel(_)
            | Error::NonBinary { .. }
            | Error::NotATree => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Fail(code, e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Fail {
        Fail(EXIT_DOMAIN, e.to_string())
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, Fail> {
    let mut s = String::new();
    if path == "-" {
        stdin.read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Fail(EXIT_USAGE, format!("{path}: {e}")))?;
    }
    Ok(s)
}

/// Non-empty lines parsed as trees, with 1-based line numbers.
fn read_trees(path: &str, stdin: &mut dyn Read) -> Result<Vec<(usize, Tree)>, Fail> {
    let text = read_input(path, stdin)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let t = Tree::from_newick(line).map_err(|e| {
            let Fail(code, msg) = Fail::from(e);
            Fail(code, format!("line {}: {msg}", i + 1))
        })?;
        out.push((i + 1, t));
    }
    if out.is_empty() {
        return Err(Fail(EXIT_USAGE, format!("{path}: no trees")));
    }
    Ok(out)
}

fn check_k(k: usize) -> Result<(), Fail> {
    if k == 0 {
        return Err(Fail(EXIT_USAGE, "k must be at least 1".into()));
    }
    Ok(())
}

fn execute(cmd: Cmd, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, Fail> {
    match cmd {
        Cmd::Count { file, k } => {
            check_k(k)?;
            writeln!(out, "line\tn\tk\tcount")?;
            for (line, t) in read_trees(&file, stdin)? {
                writeln!(out, "{line}\t{}\t{k}\t{}", t.n(), count_gk(&t, k))?;
            }
        }
        Cmd::List { file, k, limit, format } => {
            check_k(k)?;
            let trees = read_trees(&file, stdin)?;
            let prefix = trees.len() > 1;
            let mut truncated = false;
            for (line, t) in &trees {
                let mut listed = 0u64;
                for f in list_gk(t, k) {
                    if limit.is_some_and(|l| listed >= l) {
                        truncated = true;
                        break;
                    }
                    listed += 1;
                    if prefix {
                        write!(out, "{line}\t")?;
                    }
                    match format {
                        ListFormat::Text => writeln!(out, "{f}")?,
                        ListFormat::Json => writeln!(out, "{}", f.to_json())?,
                    }
                }
            }
            if truncated {
                return Ok(EXIT_TRUNCATED);
            }
        }
        Cmd::Gen { family, n, k, seed } => {
            if n == 0 {
                return Err(Fail(EXIT_USAGE, "n must be at least 1".into()));
            }
            let t = match family {
                GenFamily::Caterpillar => caterpillar(n),
                GenFamily::Random => gen_random(n, seed),
                GenFamily::FullyLoaded => {
                    let k = k.ok_or_else(|| Fail(EXIT_USAGE, "fully_loaded needs --k".into()))?;
                    gen_fully_loaded(n, k, None)?
                }
            };
            writeln!(out, "{}", t.to_newick())?;
        }
        Cmd::Rate { kmax } => {
            check_k(kmax)?;
            writeln!(out, "k\tmin_rate\tmax_rate")?;
            for row in rate_table(kmax) {
                writeln!(out, "{}\t{:.3}\t{:.3}", row.k, row.min_rate, row.max_rate)?;
            }
        }
        Cmd::Bench { family, k, budget, seed, max_n, simulated } => {
            if budget.iter().any(|&b| !b.is_finite() || b <= 0.0) {
                return Err(Fail(EXIT_USAGE, "budgets must be positive".into()));
            }
            let families: Vec<Family> = family.into_iter().map(Family::from).collect();
            let budgets: Vec<Duration> = budget.into_iter().map(Duration::from_secs_f64).collect();
            let mut clock: Box<dyn Clock> =
                if simulated { Box::new(SimulatedClock::default()) } else { Box::new(MonotonicClock::default()) };
            writeln!(out, "{}", BenchRecord::TSV_HEADER)?;
            for rec in run_bench(&families, &k, &budgets, seed, max_n, clock.as_mut())? {
                writeln!(out, "{}", rec.to_tsv())?;
            }
        }
        Cmd::Verify { nmax, kmax, samples, seed } => {
            let report = run_verify(&VerifyConfig { nmax, kmax, samples, seed })?;
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Ok(EXIT_DOMAIN);
            }
        }
        Cmd::Solve { instance } => {
            let text = read_input(&instance, stdin)?;
            let inst = SolveInstance::from_json(&text).map_err(|e| Fail(EXIT_USAGE, e.to_string()))?;
            let res = inst.solve()?;
            writeln!(out, "{}", res.to_json(inst.mode))?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.cmd, stdin, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("convex").chain(args.iter().copied());
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const FIG1: &str = "(((a,b),c),(e,(f,g)),d);\n";

    #[test]
    fn count_figure_one() {
        let (code, out, _) = run_with(&["count", "-", "-k", "2"], FIG1);
        assert_eq!(code, 0);
        assert_eq!(out, "line\tn\tk\tcount\n1\t7\t2\t8\n");
        let (_, out, _) = run_with(&["count", "-", "-k", "99"], FIG1);
        assert!(out.ends_with("\t0\n"));
    }

    #[test]
    fn list_and_truncate() {
        let (code, out, _) = run_with(&["list", "-", "-k", "3"], FIG1);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        let (code, out, _) = run_with(&["list", "-", "-k", "3", "--limit", "1"], FIG1);
        assert_eq!(code, EXIT_TRUNCATED);
        assert_eq!(out.lines().count(), 1);
        let (_, out, _) = run_with(&["list", "-", "-k", "4", "--format", "json"], FIG1);
        assert_eq!(out, "[[\"a\",\"b\",\"c\",\"d\",\"e\",\"f\",\"g\"]]\n");
    }

    #[test]
    fn parse_error_has_line_number() {
        let (code, _, err) = run_with(&["count", "-", "-k", "2"], "((a,b),(c,d));\n\n((a,b),c\n");
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("line 3"), "{err}");
        let (code, _, _) = run_with(&["count"], "");
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn gen_and_rate() {
        let (_, a, _) = run_with(&["gen", "random", "10", "--seed", "7"], "");
        let (_, b, _) = run_with(&["gen", "random", "10", "--seed", "7"], "");
        assert_eq!(a, b);
        let (code, _, _) = run_with(&["gen", "fully_loaded", "7"], "");
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_with(&["gen", "fully_loaded", "3", "-k", "4"], "");
        assert_eq!(code, EXIT_DOMAIN);
        let (_, out, _) = run_with(&["rate", "--kmax", "3"], "");
        assert_eq!(out, "k\tmin_rate\tmax_rate\n1\t2.618\t2.618\n2\t1.618\t1.618\n3\t1.272\t1.466\n");
    }

    #[test]
    fn solve_and_verify_guard() {
        let inst = r#"{"trees": ["((a,b),(c,d),e);"], "k": 2, "mode": "objective_optimize"}"#;
        let (code, out, _) = run_with(&["solve", "-"], inst);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["objective_value"], "0");
        let (code, _, err) = run_with(&["verify", "--nmax", "15"], "");
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("limit"));
    }
}
