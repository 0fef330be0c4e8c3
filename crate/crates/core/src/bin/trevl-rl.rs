//! Trains a Q-learning query-expansion agent on a synthetic collection and
//! prints its reward curve as TSV.

use std::fs::File;
use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use trevl::gym::{random_baseline, synthesize_world, train, AgentConfig};
use trevl::synth::SynthConfig;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Policy {
    /// Epsilon-greedy Q-learning.
    Qlearning,
    /// Uniformly random actions, for reference.
    Random,
}

#[derive(Debug, Parser)]
#[command(name = "trevl-rl", version, about)]
struct Args {
    /// Synthetic collection config (`key = value` lines); desk-scale defaults
    /// when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 20_000)]
    episodes: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.95)]
    gamma: f64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Agent seed. The collection uses the config's own seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Policy::Qlearning)]
    policy: Policy,
}

fn run(args: Args) -> Result<(), Box<dyn std::error::Error>> {
    let synth = match &args.config {
        Some(path) => SynthConfig::parse(BufReader::new(File::open(path)?))?,
        None => SynthConfig::default(),
    };
    let (index, queries) = synthesize_world(&synth)?;
    let curve = match args.policy {
        Policy::Qlearning => {
            let agent = AgentConfig {
                alpha: args.alpha,
                gamma: args.gamma,
                epsilon: args.epsilon,
                episodes: args.episodes,
                seed: args.seed,
            };
            train(&index, &queries, &agent)?.0
        }
        Policy::Random => random_baseline(&index, &queries, args.episodes, args.seed)?,
    };
    curve.write_tsv(io::stdout().lock())?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trevl-rl: {e}");
            ExitCode::from(2)
        }
    }
}
