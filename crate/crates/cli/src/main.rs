use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hashcount::baselines::{approxmc2_dnf_count, klm_count};
use hashcount::bench::{run_bench, BenchConfig, BenchSuite};
use hashcount::decimal::to_decimal;
use hashcount::formula::{exact_count_with_limit, gen_random, DEFAULT_EXACT_LIMIT};
use hashcount::verify::{run_suite, Suite};
use hashcount::{approx_count, par, parse_dnf, serialize_dnf, CounterParams, DnfFormula, Error};
use num_rational::BigRational;
use serde::Serialize;

/// Approximate and exact model counting for DNF formulas.
#[derive(Debug, Parser)]
#[command(name = "hashcount", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the models of a DNF file.
    Count(CountArgs),
    /// Write a random DNF formula.
    Gen(GenArgs),
    /// Run a self-check suite.
    Verify(VerifyArgs),
    /// Run a scaling benchmark.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Symbolic,
    Klm,
    Approxmc2,
    Exact,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Symbolic => "symbolic",
            Algo::Klm => "klm",
            Algo::Approxmc2 => "approxmc2",
            Algo::Exact => "exact",
        }
    }
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
struct CountArgs {
    /// DNF file (`p dnf <n> <m>` header, one 0-terminated cube per line).
    file: PathBuf,
    #[arg(long, value_enum, default_value = "symbolic")]
    algo: Algo,
    #[arg(long, default_value_t = 0.8)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, env = "HASHCOUNT_SEED", default_value_t = 0)]
    seed: u64,
    /// Print a JSON report instead of a table.
    #[arg(long)]
    json: bool,
    /// Worker threads for independent rounds; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Largest variable count the exact counter will enumerate.
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    wmin: usize,
    #[arg(long)]
    wmax: usize,
    #[arg(long, env = "HASHCOUNT_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, env = "HASHCOUNT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
struct BenchArgs {
    #[arg(long, value_parser = parse_bench_suite)]
    suite: BenchSuite,
    #[arg(long, env = "HASHCOUNT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.8)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bench_suite(s: &str) -> std::result::Result<BenchSuite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of `count`, printed only on success.
#[derive(Debug, Serialize)]
struct RunReport {
    algo: &'static str,
    n: usize,
    m: usize,
    epsilon: Option<f64>,
    delta: Option<f64>,
    seed: Option<u64>,
    estimate_rational: String,
    estimate_decimal: String,
    rounds: usize,
    failed_rounds: usize,
    trials: u64,
    probes: usize,
    wall_ms: f64,
}

/// Failure that maps to a specific exit status.
#[derive(Debug)]
struct Exit(u8);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit status {}", self.0)
    }
}

impl std::error::Error for Exit {}

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(Exit(code)) = e.downcast_ref::<Exit>() {
                return ExitCode::from(*code);
            }
            eprintln!("error: {e:#}");
            let failed = matches!(e.downcast_ref::<Error>(), Some(Error::AllRoundsFailed { .. }));
            ExitCode::from(if failed { EXIT_FAILED } else { EXIT_USAGE })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_formula(path: &PathBuf) -> Result<DnfFormula> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dnf(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_count(args: CountArgs) -> Result<()> {
    let phi = read_formula(&args.file)?;
    let start = Instant::now();
    let stochastic = args.algo != Algo::Exact;
    let (value, rounds, failed_rounds, trials, probes) = par::with_threads(args.threads, || -> Result<_> {
        Ok(match args.algo {
            Algo::Exact => {
                let c = exact_count_with_limit(&phi, args.exact_limit)?;
                (BigRational::from_integer(c.into()), 0, 0, 0, 0)
            }
            Algo::Klm => {
                let e = klm_count(&phi, args.epsilon, args.delta, args.seed)?;
                let rounds = usize::from(e.samples > 0);
                (e.value, rounds, 0, e.trial_sum, 0)
            }
            Algo::Symbolic | Algo::Approxmc2 => {
                let params = CounterParams::new(args.epsilon, args.delta, args.seed)?;
                let e = if args.algo == Algo::Symbolic {
                    approx_count(&phi, &params)?
                } else {
                    approxmc2_dnf_count(&phi, &params)?
                };
                let (trials, probes) = (e.total_trials(), e.total_probes());
                (e.value, e.rounds.len(), e.failed_rounds, trials, probes)
            }
        })
    })?;
    let report = RunReport {
        algo: args.algo.name(),
        n: phi.num_vars(),
        m: phi.num_cubes(),
        epsilon: stochastic.then_some(args.epsilon),
        delta: stochastic.then_some(args.delta),
        seed: stochastic.then_some(args.seed),
        estimate_rational: value.to_string(),
        estimate_decimal: to_decimal(&value),
        rounds,
        failed_rounds,
        trials,
        probes,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        print_table(&report);
    }
    Ok(())
}

fn print_table(r: &RunReport) {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let rows = [
        ("algo", r.algo.to_string()),
        ("n", r.n.to_string()),
        ("m", r.m.to_string()),
        ("epsilon", opt(r.epsilon.map(|v| v.to_string()))),
        ("delta", opt(r.delta.map(|v| v.to_string()))),
        ("seed", opt(r.seed.map(|v| v.to_string()))),
        ("estimate", r.estimate_rational.clone()),
        ("decimal", r.estimate_decimal.clone()),
        ("rounds", r.rounds.to_string()),
        ("failed_rounds", r.failed_rounds.to_string()),
        ("trials", r.trials.to_string()),
        ("probes", r.probes.to_string()),
        ("wall_ms", format!("{:.3}", r.wall_ms)),
    ];
    for (k, v) in rows {
        println!("{k:<14} {v}");
    }
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let phi = gen_random(args.n, args.m, args.wmin, args.wmax, args.seed)?;
    let text = serialize_dnf(&phi);
    match args.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let report = run_suite(args.suite, args.seed)?;
    if args.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        print!("{report}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Exit(EXIT_FAILED).into())
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let cfg = BenchConfig {
        epsilon: args.epsilon,
        delta: args.delta,
        seed: args.seed,
    };
    let rows = par::with_threads(args.threads, || run_bench(args.suite, &cfg))?;
    if args.json {
        println!("{}", serde_json::to_string(&rows)?);
    } else {
        for row in &rows {
            println!("{row}");
        }
    }
    let violations: Vec<_> = rows.iter().filter(|r| !r.within_bound()).collect();
    if violations.is_empty() {
        Ok(())
    } else {
        for r in violations {
            eprintln!(
                "trial bound violated: n={} m={} max cell {} > {}",
                r.n, r.m, r.max_bsat_trials, r.trial_bound
            );
        }
        Err(Exit(EXIT_FAILED).into())
    }
}
