use std::path::PathBuf;
use std::process::ExitCode;

use adt::capacity::two_way_region;
use adt::decomposition::{decompose, plan_with, Target};
use adt::schemes::{build, SchemeError, CATALOG};
use adt::simulator::{run, verify, Sources};
use adt::{ChannelConfig, Rational, Region};
use adt_cli::suite;
use adt_cli::sweep::{render, sweep, Format};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "adt", version, about = "Two-way modulo-2 sum computation: regions, plans and schemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Capacity region of a channel given as m,n/m~,n~
    Region { config: ChannelConfig },
    /// Gain class over an (alpha, alpha~) grid at fixed gamma = n~/n
    Sweep {
        #[arg(long, default_value = "1")]
        gamma: Rational,
        #[arg(long, default_value = "1/6")]
        step: Rational,
        /// Largest alpha and alpha~ on the grid
        #[arg(long, default_value = "3")]
        max: Rational,
        #[arg(long, default_value_t = 1)]
        n_scale: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// Build, run and verify a cataloged scheme
    Simulate {
        #[arg(required_unless_present = "plan")]
        id: Option<String>,
        /// Compose and simulate a plan file written by `adt plan`
        #[arg(long, conflicts_with = "id")]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the transcript of one random run to this file
        #[arg(long)]
        dump_transcript: Option<PathBuf>,
    },
    /// Elementary decomposition of one (m, n) direction
    Decompose { m: usize, n: usize },
    /// Scheme plan for a channel and target corner
    Plan {
        config: ChannelConfig,
        target: Target,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Run every acceptance criterion
    VerifyAll,
}

fn simulate(id: &str, seed: u64, dump: Option<PathBuf>) -> Result<bool> {
    let scheme = match build(id) {
        Ok(s) => s,
        Err(SchemeError::UnknownId(_)) => {
            bail!("unknown scheme id {id:?}; known forms:\n  {}", CATALOG.join("\n  "))
        }
        Err(e) => bail!("{id}: {e}"),
    };
    let report = verify(&scheme, seed);
    println!("{report}");
    if let Some(path) = dump {
        let p = scheme.program();
        let src = Sources::random(p.k, p.kt, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = run(&scheme, &src).with_context(|| format!("running {id}"))?;
        std::fs::write(&path, t.dump()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ok = match cli.cmd {
        Cmd::Region { config } => {
            let r: Region = two_way_region(&config);
            print!("{}", r.serialize());
            Ok(true)
        }
        Cmd::Sweep { gamma, step, max, n_scale, format } => {
            if step <= Rational::from(0) || n_scale == 0 {
                Err(anyhow::anyhow!("--step and --n-scale must be positive"))
            } else {
                let fmt = match format {
                    OutFormat::Text => Format::Text,
                    OutFormat::Csv => Format::Csv,
                };
                print!("{}", render(&sweep(gamma, step, max, n_scale), fmt));
                Ok(true)
            }
        }
        Cmd::Simulate { id, plan, seed, dump_transcript } => {
            let id = match plan {
                Some(path) => format!("compose:{}", path.display()),
                None => id.unwrap_or_default(),
            };
            simulate(&id, seed, dump_transcript)
        }
        Cmd::Decompose { m, n } => {
            println!("{}", decompose(m, n));
            Ok(true)
        }
        Cmd::Plan { config, target, l, m } => {
            print!("{}", plan_with(config, target, l, m).serialize());
            Ok(true)
        }
        Cmd::VerifyAll => {
            let outcomes = suite::run_all();
            for o in &outcomes {
                println!("{o}");
            }
            Ok(outcomes.iter().all(|o| o.pass))
        }
    };
    match ok {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
