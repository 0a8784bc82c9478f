//! Command-line front end: `solve`, `gen` and `race`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::instance::{emit_instance, parse_instance};
use crate::lifting::{default_guard_bound, Strategy};
use crate::matrix::{normalize_nonnegative, verify_solution, TropMatrix};
use crate::outcome::{SolveOutcome, Verdict};
use crate::report::RunReport;
use crate::solve::{resolve_method, solve, Method, SolveOptions};

pub const EXIT_FEASIBLE: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "troplin",
    version,
    about = "Solve tropical (min-plus) linear systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance file. Exit code 0 = feasible, 1 = infeasible, 2 = error.
    Solve(SolveArgs),
    /// Generate seeded random instances.
    Gen(GenArgs),
    /// Run several lifting strategies on instances and emit CSV.
    Race(RaceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Auto,
    Lifting,
    Exact,
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    /// Instance file (`-` for stdin).
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    pub algorithm: Algorithm,
    /// Lifting strategy used with `--algorithm lifting`.
    #[arg(long, default_value = "combined-max")]
    pub lifting: Strategy,
    /// Cross-check the verdict with the other solver family and re-verify
    /// the solution against the input.
    #[arg(long)]
    pub verify: bool,
    /// Append a one-line JSON run report.
    #[arg(long)]
    pub stats: bool,
    /// Guard bound on cumulative column additions for lifting.
    #[arg(long, env = "TROPLIN_GUARD")]
    pub guard: Option<i64>,
    /// Disable memoization in the exact solver.
    #[arg(long)]
    pub no_memo: bool,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    /// Entries are uniform in `0..=max`.
    #[arg(long)]
    pub max: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Write `<prefix>NNNN.txt` files here instead of printing to stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, default_value = "inst")]
    pub prefix: String,
}

#[derive(Debug, clap::Args)]
pub struct RaceArgs {
    /// Instance files.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Comma-separated strategies; defaults to all five.
    #[arg(long, value_delimiter = ',')]
    pub strategies: Vec<Strategy>,
    /// Do not cross-check verdicts against the exact solver.
    #[arg(long)]
    pub skip_exact: bool,
    #[arg(long, env = "TROPLIN_GUARD")]
    pub guard: Option<i64>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Gen(args) => cmd_gen(&args, out).map(|()| 0),
        Command::Race(args) => cmd_race(&args, out).map(|()| 0),
    }
}

fn read_instance(path: &Path) -> anyhow::Result<TropMatrix> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn solver_label(a: &TropMatrix, method: Method) -> String {
    resolve_method(a, method).to_string()
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let a = read_instance(&args.path)?;
    let method = match args.algorithm {
        Algorithm::Auto => Method::Auto,
        Algorithm::Exact => Method::Exact,
        Algorithm::Lifting => Method::Lifting(args.lifting),
    };
    let opts = SolveOptions {
        method,
        guard_bound: args.guard,
        memoize: !args.no_memo,
    };
    if let Some(g) = args.guard {
        let safe = default_guard_bound(&normalize_nonnegative(&a)?.matrix);
        if g < safe && matches!(resolve_method(&a, method), Method::Lifting(_)) {
            eprintln!("warning: guard {g} is below {safe}; INFEASIBLE may be spurious");
        }
    }
    let outcome = solve(&a, &opts)?;

    if args.verify {
        if let Some(x) = outcome.solution() {
            if !verify_solution(&a, x)? {
                bail!("solution {x:?} fails verification");
            }
        }
        let other = match resolve_method(&a, method) {
            Method::Exact => Method::Lifting(Strategy::CombinedMax),
            _ => Method::Exact,
        };
        let check = solve(
            &a,
            &SolveOptions {
                method: other,
                ..opts
            },
        )?;
        if check.is_feasible() != outcome.is_feasible() {
            bail!(
                "verdict disagreement: {} says {}, {} says {}",
                solver_label(&a, method),
                verdict_word(&outcome.verdict),
                other,
                verdict_word(&check.verdict)
            );
        }
    }

    match &outcome.verdict {
        Verdict::Feasible(x) => writeln!(out, "FEASIBLE\n{x}")?,
        Verdict::Infeasible => writeln!(out, "INFEASIBLE")?,
    }
    if args.stats {
        writeln!(
            out,
            "{}",
            RunReport::new(solver_label(&a, method), &outcome).to_line()
        )?;
    }
    Ok(if outcome.is_feasible() {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    })
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Feasible(_) => "FEASIBLE",
        Verdict::Infeasible => "INFEASIBLE",
    }
}

/// Deterministic random instance with entries uniform in `0..=max`.
pub fn random_instance(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max: i64) -> TropMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.random_range(0..=max))
        .collect();
    TropMatrix::new(rows, cols, data).expect("generator parameters validated")
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    if args.rows == 0 || args.cols == 0 {
        bail!("--rows and --cols must be at least 1");
    }
    if args.max < 0 || args.max > crate::matrix::MAX_ENTRY {
        bail!("--max must lie in 0..={}", crate::matrix::MAX_ENTRY);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for k in 0..args.count {
        let text = emit_instance(&random_instance(&mut rng, args.rows, args.cols, args.max));
        match &args.out_dir {
            Some(dir) => {
                let path = dir.join(format!("{}{k:04}.txt", args.prefix));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                writeln!(out, "{}", path.display())?;
            }
            None => {
                if k > 0 {
                    writeln!(out)?;
                }
                write!(out, "{text}")?;
            }
        }
    }
    Ok(())
}

/// One CSV line of `race` output.
#[derive(Clone, Debug, Serialize)]
pub struct RaceRow {
    pub instance: String,
    pub strategy: String,
    pub verdict: &'static str,
    pub lifts: u64,
    pub touched: usize,
    pub guard_trips: u64,
    pub nodes: u64,
    pub micros: u64,
    pub solution: String,
}

fn race_row(instance: &str, strategy: &str, o: &SolveOutcome, micros: u64) -> RaceRow {
    RaceRow {
        instance: instance.to_string(),
        strategy: strategy.to_string(),
        verdict: verdict_word(&o.verdict),
        lifts: o.stats.lifts,
        touched: o.stats.touched_columns,
        guard_trips: o.stats.guard_trips,
        nodes: o.stats.recursion_nodes,
        micros,
        solution: o.solution().map(|x| x.to_string()).unwrap_or_default(),
    }
}

pub fn cmd_race(args: &RaceArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let strategies = if args.strategies.is_empty() {
        Strategy::ALL.to_vec()
    } else {
        args.strategies.clone()
    };
    let instances = args
        .paths
        .iter()
        .map(|p| Ok((p.display().to_string(), read_instance(p)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;

    let mut methods: Vec<(String, Method)> = strategies
        .iter()
        .map(|&s| (s.name().to_string(), Method::Lifting(s)))
        .collect();
    if !args.skip_exact {
        methods.push(("exact".to_string(), Method::Exact));
    }
    let cells: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..methods.len()).map(move |k| (i, k)))
        .collect();

    let results = cells
        .par_iter()
        .map(|&(i, k)| {
            let (name, a) = &instances[i];
            let (label, method) = &methods[k];
            let opts = SolveOptions {
                method: *method,
                guard_bound: args.guard,
                memoize: true,
            };
            let t = Instant::now();
            let o = solve(a, &opts).with_context(|| format!("{label} on {name}"))?;
            Ok((o, t.elapsed().as_micros() as u64))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    for (i, (name, _)) in instances.iter().enumerate() {
        let row = &results[i * methods.len()..(i + 1) * methods.len()];
        let first = &row[0].0;
        for ((label, method), (o, _)) in methods.iter().zip(row) {
            if o.is_feasible() != first.is_feasible() {
                bail!(
                    "{name}: verdict disagreement: {} says {}, {label} says {}",
                    methods[0].0,
                    verdict_word(&first.verdict),
                    verdict_word(&o.verdict)
                );
            }
            // Every lifting strategy must land on the same smallest solution.
            if matches!(method, Method::Lifting(_))
                && matches!(methods[0].1, Method::Lifting(_))
                && o.solution() != first.solution()
            {
                bail!(
                    "{name}: solution disagreement: {} gives {:?}, {label} gives {:?}",
                    methods[0].0,
                    first.solution(),
                    o.solution()
                );
            }
        }
    }

    let mut sink: Box<dyn Write + '_> = match &args.output {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(&mut sink);
    for (idx, &(i, k)) in cells.iter().enumerate() {
        let (o, micros) = &results[idx];
        w.serialize(race_row(&instances[i].0, &methods[k].0, o, *micros))?;
    }
    w.flush()?;
    Ok(())
}
