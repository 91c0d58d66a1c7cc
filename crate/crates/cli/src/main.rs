//! `foidx` command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use foidx::analysis::require;
use foidx::{analyze, report, verify, Analysis, Automorphism, Candidate, Error, Options};

#[derive(Parser)]
#[command(name = "foidx", version, about = "FO-index and singularity graphs of positive primitive automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate positivity, the inverse and primitivity.
    Check { file: PathBuf },
    /// Print the FO-index.
    Index {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a JSON and/or DOT report and print a summary.
    Report {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Highest level swept (default 4N-4).
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u32).range(1..))]
    max_k: Option<u32>,
    /// Stop after the level at which the index reaches N-1.
    #[arg(long)]
    early_exit: bool,
    /// Letter budget for the sweep.
    #[arg(long, value_name = "LETTERS", default_value_t = foidx::DEFAULT_BUDGET,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(10_000..))]
    budget: usize,
}

impl RunArgs {
    fn options(&self) -> Options {
        Options { max_k: self.max_k, early_exit: self.early_exit, budget: self.budget }
    }
}

const OK: u8 = 0;
const INVALID: u8 = 1;
const TRUNCATED: u8 = 2;
const INVARIANT: u8 = 3;

fn load(file: &Path) -> anyhow::Result<Candidate> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    Ok(foidx::automorphism::parse_candidate(&text)?)
}

fn load_valid(file: &Path) -> Result<Automorphism, u8> {
    let cand = load(file).map_err(|e| {
        eprintln!("error: {e:#}");
        INVALID
    })?;
    cand.validate().map_err(|e| {
        eprintln!("error: {e}");
        INVALID
    })
}

fn run(phi: &Automorphism, args: &RunArgs) -> Result<Analysis, u8> {
    let start = std::time::Instant::now();
    let a = analyze(phi, &args.options()).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            Error::BudgetExceeded { .. } => TRUNCATED,
            _ => INVARIANT,
        }
    })?;
    log::info!(
        "sweep reached k={} of {} using {} letters in {:.3?}",
        a.sweep.k_reached,
        a.sweep.max_k,
        a.sweep.work,
        start.elapsed()
    );
    Ok(a)
}

fn banner(a: &Analysis) -> u8 {
    if a.complete() {
        OK
    } else {
        println!("INCOMPLETE (k reached {} of {})", a.sweep.k_reached, a.sweep.max_k);
        TRUNCATED
    }
}

fn summary(a: &Analysis) {
    let phi = &a.phi;
    println!("FO-index {} (doubled {})", a.index_text(), a.index_times_2);
    println!("complete {}", a.complete());
    for s in a.singularities() {
        println!(
            "S{}: label ({}, {}), {} points, fixing power {} (phi^{}), H/~ {}",
            s.id,
            phi.fmt_compact(&s.label.w),
            s.label.k,
            s.points.len(),
            s.fixing_power,
            s.phi_power,
            s.h_classes()
        );
    }
    for e in &a.graph.finite_edges {
        println!("edge S{} -> S{} [{}]", e.from, e.to, phi.fmt_compact(&e.label));
    }
    for (i, c) in a.components.iter().enumerate() {
        let nodes: Vec<String> = c.nodes.iter().map(|n| format!("S{n}")).collect();
        println!(
            "component {i}: {{{}}}, rank {}, infinite edges {}, index/2 {}",
            nodes.join(", "),
            c.rank,
            c.infinite_edges,
            c.index_times_2
        );
        for b in &c.basis {
            println!("  basis {}", phi.fmt_word(b));
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), u8> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("error: writing {}: {e}", path.display());
        INVALID
    })
}

fn execute(cli: Cli) -> Result<u8, u8> {
    match cli.command {
        Command::Check { file } => {
            let cand = load(&file).map_err(|e| {
                eprintln!("error: {e:#}");
                INVALID
            })?;
            match cand.validate() {
                Ok(phi) => {
                    println!("positive: ok");
                    println!("inverse: ok");
                    println!("primitive: ok");
                    println!("OK rank {}", phi.rank());
                    Ok(OK)
                }
                Err(e) => {
                    println!("FAILED: {e}");
                    Ok(INVALID)
                }
            }
        }
        Command::Index { file, run: args } => {
            let phi = load_valid(&file)?;
            let a = run(&phi, &args)?;
            println!("{}", a.index_text());
            println!("complete {}", a.complete());
            Ok(banner(&a))
        }
        Command::Report { file, run: args, json, dot } => {
            let phi = load_valid(&file)?;
            let a = run(&phi, &args)?;
            if let Some(p) = json {
                let text = report::json(&a).map_err(|e| {
                    eprintln!("error: {e}");
                    INVARIANT
                })?;
                write(&p, &text)?;
            }
            if let Some(p) = dot {
                write(&p, &report::dot(&a))?;
            }
            summary(&a);
            Ok(banner(&a))
        }
        Command::Verify { file, run: args } => {
            let phi = load_valid(&file)?;
            let a = run(&phi, &args)?;
            let checks = verify(&a);
            for c in &checks {
                let status = if c.ok { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    println!("{status} {}", c.name);
                } else {
                    println!("{status} {} ({})", c.name, c.detail);
                }
            }
            if require(&checks).is_err() {
                return Ok(INVARIANT);
            }
            Ok(banner(&a))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { OK });
        }
    };
    match execute(cli) {
        Ok(code) | Err(code) => ExitCode::from(code),
    }
}
