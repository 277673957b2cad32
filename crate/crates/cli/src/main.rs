mod commands;
mod config;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_measures, Command, Failure, Format, RunConfig};

/// Entanglement measures on two-qubit states and searches for pairs they rank differently.
#[derive(Parser, Debug)]
#[command(name = "entorder", version, about, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Evaluate measures on one state.
    Measure,
    /// Evaluate measures along a one-parameter family.
    Scan,
    /// Sample states and compare the orders two measures induce.
    Search,
    /// Look for a pure state that the two measures rank against the input state.
    Witness,
    /// Run the built-in invariant checks.
    Selftest,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Measure => Command::Measure,
            Cmd::Scan => Command::Scan,
            Cmd::Search => Command::Search,
            Cmd::Witness => Command::Witness,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// State spec, e.g. `werner:0.75` or `ginibre:k=4,seed=7`.
    #[arg(long, global = true)]
    state: Option<String>,
    /// State in JSON form.
    #[arg(long, global = true)]
    state_file: Option<PathBuf>,
    /// Family to scan (werner, schmidt).
    #[arg(long, global = true)]
    family: Option<String>,
    /// Scan grid `start:stop:step`.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Sampler spec for `search`.
    #[arg(long, global = true)]
    sampler: Option<String>,
    /// Comma-separated measures: entropy, eof, eof_search, rel_ent.
    #[arg(long, global = true)]
    measures: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Ordering margin.
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Compare a random subset of this many pairs when there are more.
    #[arg(long, global = true)]
    pair_cap: Option<usize>,
    /// Optimizer restarts per evaluation.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Optimizer iteration budget per restart.
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Selftest: full sample counts.
    #[arg(long, global = true)]
    strict: bool,
}

impl Flags {
    fn into_config(self, command: Option<Command>) -> Result<RunConfig, Failure> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let mut cfg = base.overlay(RunConfig {
            command,
            state: self.state,
            state_file: self.state_file,
            family: self.family,
            grid: self.grid,
            sampler: self.sampler,
            measures: self.measures.as_deref().map(parse_measures).transpose().map_err(Failure::Config)?,
            optimizer: None,
            seed: self.seed,
            samples: self.samples,
            delta: self.delta,
            pair_cap: self.pair_cap,
            format: self.format,
            out: self.out,
            threads: self.threads,
            strict: self.strict.then_some(true),
        });
        if self.restarts.is_some() || self.max_iterations.is_some() {
            let mut opt = cfg.optimizer.unwrap_or_default();
            opt.restarts = self.restarts.unwrap_or(opt.restarts);
            opt.max_iterations = self.max_iterations.unwrap_or(opt.max_iterations);
            cfg.optimizer = Some(opt);
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.flags.into_config(cli.command.map(Command::from))?;
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    let command = cfg
        .command
        .ok_or_else(|| Failure::Config("no command given (measure, scan, search, witness, selftest)".into()))?;
    match command {
        Command::Measure => commands::measure(&cfg),
        Command::Scan => commands::scan(&cfg),
        Command::Search => commands::search(&cfg),
        Command::Witness => commands::witness(&cfg),
        Command::Selftest => selftest::run(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entorder: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
