use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use permlab::estimators::{Claim, Event, Statistic};
use permlab::experiment::{output_path, run, write_records, Command, ExperimentConfig, Format};

/// Zero-permanent and singularity experiments for random matrices over finite fields.
#[derive(Parser, Debug)]
#[command(name = "permlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// alpha_q and the finite-n singularity ladder
    Alpha(Flags),
    /// Exact distribution of per or det over all matrices
    Enumerate(Flags),
    /// Monte Carlo estimate of an event or of the value distribution
    Mc(Flags),
    /// Run the nested-set growth process
    Growth(Flags),
    /// Conditional estimates Pr[E(s-1) | E(s)]
    Chain(Flags),
    /// Check the known probability bounds at a finite n
    Bounds(Flags),
    /// Re-execute logged records or growth traces
    Replay(Flags),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatArg {
    Per,
    Det,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Read the experiment from a JSON config; flags given here override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    /// Entry distribution, e.g. 0.6,0.3,0.1
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Number of Monte Carlo samples
    #[arg(long = "N")]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    stat: Option<StatArg>,
    /// Value z for the event per = z or det = z
    #[arg(long)]
    value: Option<u32>,
    /// Event as JSON, e.g. '{"kind":"rank-h-at-least","r":3}'
    #[arg(long)]
    event: Option<String>,
    /// Conditioning event as JSON
    #[arg(long)]
    condition: Option<String>,
    /// Claim to check (repeatable)
    #[arg(long = "claim", value_delimiter = ',')]
    claims: Vec<String>,
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    runs: Option<u64>,
    /// Target set J, 1-based
    #[arg(long, value_delimiter = ',')]
    target: Option<Vec<usize>>,
    #[arg(long)]
    tol: Option<f64>,
    /// Where growth traces are written
    #[arg(long)]
    traces: Option<PathBuf>,
    /// Record log or trace file to re-execute
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn parse_event(s: &str) -> Result<Event> {
    serde_json::from_str(s).with_context(|| format!("invalid event JSON: {s}"))
}

fn build_config(command: Command, f: Flags) -> Result<ExperimentConfig> {
    let mut c = match &f.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let c: ExperimentConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            if c.command != command {
                bail!("config {} is for command {}", path.display(), c.command.name());
            }
            c
        }
        None => ExperimentConfig::new(command),
    };
    macro_rules! set {
        ($($field:ident),*) => { $( if f.$field.is_some() { c.$field = f.$field.clone(); } )* };
    }
    set!(q, weights, n, s, ell, samples, value, t, delta, epsilon, runs, tol, traces, out);
    if let Some(seed) = f.seed {
        c.seed = seed;
    }
    if let Some(w) = f.workers {
        c.workers = w;
    }
    if let Some(s) = f.stat {
        c.stat = Some(match s {
            StatArg::Per => Statistic::Per,
            StatArg::Det => Statistic::Det,
        });
    }
    if let Some(fmt) = f.format {
        c.format = Some(match fmt {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        });
    }
    if let Some(e) = &f.event {
        c.event = Some(parse_event(e)?);
    }
    if let Some(e) = &f.condition {
        c.condition = Some(parse_event(e)?);
    }
    if !f.claims.is_empty() {
        c.claims = Some(f.claims.iter().map(|s| Claim::parse(s)).collect::<Result<_, _>>()?);
    }
    if let Some(t) = &f.target {
        if t.contains(&0) {
            bail!("--target indices are 1-based");
        }
        c.target = Some(t.iter().map(|i| i - 1).collect());
    }
    if let Some(r) = f.replay {
        c.traces = Some(r);
    }
    Ok(c)
}

fn execute(cli: Cli) -> Result<u8> {
    let (command, flags) = match cli.command {
        Cmd::Alpha(f) => (Command::Alpha, f),
        Cmd::Enumerate(f) => (Command::Enumerate, f),
        Cmd::Mc(f) => (Command::Mc, f),
        Cmd::Growth(f) => (Command::Growth, f),
        Cmd::Chain(f) => (Command::Chain, f),
        Cmd::Bounds(f) => (Command::Bounds, f),
        Cmd::Replay(f) => (Command::Replay, f),
    };
    let config = build_config(command, flags)?;
    let outcome = run(&config)?;
    print!("{}", outcome.summary);
    if let Some(path) = output_path(&config) {
        write_records(&outcome.records, &path, config.format.unwrap_or_default())?;
        eprintln!("wrote {} record(s) to {}", outcome.records.len(), path.display());
    }
    Ok(if outcome.failed {
        1
    } else if outcome.violated {
        2
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
