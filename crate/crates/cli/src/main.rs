//! `chaintool`: verify chain groups of PL homeomorphisms of the line.

mod commands;
mod files;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use chaintool_core::chain::Target;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use commands::{Inputs, Outcome};

#[derive(Parser)]
#[command(
    name = "chaintool",
    version,
    about = "Exact verification of chain groups of PL homeomorphisms"
)]
struct Cli {
    /// Print a structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Chain,
    #[value(alias = "higman_thompson", alias = "ht")]
    HigmanThompson,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Chain => Target::Chain,
            TargetArg::HigmanThompson => Target::HigmanThompson,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a system file and run every certificate.
    Verify {
        path: PathBuf,
        /// Also require the F_n criterion and its relators.
        #[arg(long)]
        require_fn: bool,
        /// Index bound j for the F_n relator check.
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Find the smallest power N at which the system certifies.
    Stabilize {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "higman-thompson")]
        target: TargetArg,
        #[arg(long, default_value_t = 64)]
        max_n: u64,
        /// Where to write the powered system (default: next to the input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite an n-chain as an (n+1)-chain generating the same group.
    Extend {
        path: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_m: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed compactly supported maps into a chain group.
    Embed {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The blown-up standard 3-chain.
    Blowup {
        /// Check the three claims about the blown-up group.
        #[arg(long)]
        claims: bool,
        #[arg(long, default_value = "1")]
        marked_point: String,
    },
    /// Breadth-first orbit of a point, as CSV.
    Orbit {
        path: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Report the largest gap inside this closed window, written lo,hi.
        #[arg(long)]
        window: Option<String>,
    },
    /// Search for dynamical witnesses.
    Witness {
        #[command(subcommand)]
        kind: WitnessCommand,
    },
    /// Check a relator family exactly.
    Relators {
        #[command(subcommand)]
        family: RelatorCommand,
    },
    /// Draw the supports (and optionally graphs) as SVG.
    Plot {
        path: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        graphs: bool,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// u with u(A) ⊆ B.
    CoTrans {
        path: PathBuf,
        /// A closed interval lo,hi of A (repeatable).
        #[arg(long = "a", required = true)]
        a: Vec<String>,
        /// The open interval B, written lo,hi (±inf allowed).
        #[arg(long = "b")]
        b: String,
        #[arg(long, default_value_t = 32)]
        depth: u64,
    },
    /// u with S ∩ u⁻¹tu(S) = ∅ for S = supp r ∪ supp s.
    Higman {
        path: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 32)]
        depth: u64,
    },
    /// A commutator-subgroup word agreeing with g on A.
    Agree {
        path: PathBuf,
        #[arg(long)]
        g: String,
        #[arg(long = "a")]
        a: String,
        #[arg(long, default_value_t = 32)]
        depth: u64,
    },
}

#[derive(Subcommand)]
enum RelatorCommand {
    /// The two F relators on (a, b), by default the standard pair.
    F { path: Option<PathBuf> },
    /// The F_n relators on the witness elements of a system.
    Fn {
        path: PathBuf,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Lamplighter commutators on a file holding (x, y).
    Lamplighter {
        path: PathBuf,
        #[arg(long = "n")]
        n: i64,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// [f, (gf)^k g (gf)^-k] on every consecutive pair.
    TwoChain {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    inputs_digest: String,
    passed: bool,
    result: &'a Value,
    timing_ms: f64,
}

fn denom_limit() -> Result<Option<u64>> {
    match std::env::var("CHAINTOOL_DENOM_LIMIT") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| {
            format!("CHAINTOOL_DENOM_LIMIT={v:?} is not a bit count")
        })?)),
        Err(_) => Ok(None),
    }
}

fn run(command: Command, inputs: &mut Inputs) -> Result<(&'static str, Outcome)> {
    let limit = denom_limit()?;
    Ok(match command {
        Command::Verify {
            path,
            require_fn,
            bound,
        } => (
            "verify",
            commands::verify(inputs, &path, require_fn, bound)?,
        ),
        Command::Stabilize {
            path,
            target,
            max_n,
            out,
        } => (
            "stabilize",
            commands::stabilize(inputs, &path, target.into(), max_n, out, limit)?,
        ),
        Command::Extend { path, max_m, out } => (
            "extend",
            commands::extend(inputs, &path, max_m, out, limit)?,
        ),
        Command::Embed { paths, out } => ("embed", commands::embed(inputs, &paths, out)?),
        Command::Blowup {
            claims,
            marked_point,
        } => ("blowup", commands::blowup(&marked_point, claims)?),
        Command::Orbit {
            path,
            point,
            budget,
            csv,
            window,
        } => (
            "orbit",
            commands::orbit_cmd(inputs, &path, &point, budget, csv, window)?,
        ),
        Command::Witness { kind } => match kind {
            WitnessCommand::CoTrans { path, a, b, depth } => (
                "witness co-trans",
                commands::co_trans(inputs, &path, &a, &b, depth)?,
            ),
            WitnessCommand::Higman {
                path,
                r,
                s,
                t,
                depth,
            } => (
                "witness higman",
                commands::higman(inputs, &path, &r, &s, &t, depth)?,
            ),
            WitnessCommand::Agree { path, g, a, depth } => (
                "witness agree",
                commands::agree(inputs, &path, &g, &a, depth)?,
            ),
        },
        Command::Relators { family } => match family {
            RelatorCommand::F { path } => {
                ("relators f", commands::relators_f(inputs, path.as_deref())?)
            }
            RelatorCommand::Fn { path, bound } => {
                ("relators fn", commands::relators_fn(inputs, &path, bound)?)
            }
            RelatorCommand::Lamplighter { path, n, kmax } => (
                "relators lamplighter",
                commands::relators_lamplighter(inputs, &path, n, kmax)?,
            ),
            RelatorCommand::TwoChain { path, kmax } => (
                "relators two-chain",
                commands::relators_two_chain(inputs, &path, kmax)?,
            ),
        },
        Command::Plot { path, svg, graphs } => {
            ("plot", commands::plot(inputs, &path, &svg, graphs)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).filter(|a| a != "--json").collect();
    let mut inputs = Inputs::default();
    let start = Instant::now();
    let (name, outcome) = match run(cli.command, &mut inputs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    if cli.json {
        let mut hasher = Sha256::new();
        for a in &args {
            hasher.update(a.as_bytes());
            hasher.update([0]);
        }
        for bytes in &inputs.0 {
            hasher.update(bytes);
        }
        let report = RunReport {
            command: name,
            inputs_digest: format!("{:x}", hasher.finalize()),
            passed: outcome.passed,
            result: &outcome.result,
            timing_ms: elapsed.as_secs_f64() * 1000.0,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", outcome.text);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
