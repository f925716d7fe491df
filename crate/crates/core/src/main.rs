use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mrsqkd::adversary::TpStrategy;
use mrsqkd::engine::{BackendKind, Gate};
use mrsqkd::harness::{self, curves, CampaignConfig};
use mrsqkd::privacy::PaRatio;
use mrsqkd::protocol::{run_protocol, ProtocolConfig, Status};

#[derive(Parser)]
#[command(name = "mrsqkd", version, about = "Mediated semi-quantum key distribution laboratory")]
struct Cli {
    /// Flat key=value file with defaults for the run flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial and print its transcript.
    Simulate(RunArgs),
    /// Monte Carlo campaign with CSV output.
    Campaign(RunArgs),
    /// Compare tableau sampling with exact dense distributions.
    VerifyBackends {
        #[arg(long, default_value_t = 12)]
        max_qubits: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Analytic detection curves, optionally with empirical rates.
    Curves {
        /// Largest t / m value.
        #[arg(long, default_value_t = 16)]
        max: u32,
        /// Trials per empirical point; analytic only when absent.
        #[arg(long)]
        trials: Option<u64>,
        /// Pair count for the modification runs.
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Attack {
    Honest,
    NaiveMeasure,
    ParityMeasure,
    Modify,
}

#[derive(Args, Default)]
struct RunArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, value_enum)]
    attack: Option<Attack>,
    #[arg(long)]
    gate: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    pa_ratio: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), i + 1);
        };
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

/// Flag value, else config-file value, else default.
fn pick<T: FromStr>(flag: Option<T>, file: &HashMap<String, String>, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => raw.parse().map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
        None => Ok(default),
    }
}

struct Resolved {
    n: usize,
    trials: u64,
    strategy: TpStrategy,
    seed: u64,
    backend: BackendKind,
    pa_ratio: PaRatio,
    out: Option<PathBuf>,
}

fn resolve(args: RunArgs, file: &HashMap<String, String>) -> Result<Resolved> {
    let attack = match args.attack {
        Some(a) => a,
        None => match file.get("attack") {
            Some(raw) => Attack::from_str(raw, true).map_err(|e| anyhow::anyhow!("config key `attack`: {e}"))?,
            None => Attack::Honest,
        },
    };
    let gate: Gate = pick(args.gate, file, "gate", "x".to_string())?.parse()?;
    let m = pick(args.m, file, "m", 1)?;
    let strategy = match attack {
        Attack::Honest => TpStrategy::honest(),
        Attack::NaiveMeasure => TpStrategy::naive_measure(),
        Attack::ParityMeasure => TpStrategy::parity_aware_measure(),
        Attack::Modify => TpStrategy::modification(gate, m),
    };
    Ok(Resolved {
        n: pick(args.n, file, "n", 64)?,
        trials: pick(args.trials, file, "trials", 1000)?,
        strategy,
        seed: pick(args.seed, file, "seed", 0)?,
        backend: pick(args.backend, file, "backend", "tableau".to_string())?.parse()?,
        pa_ratio: pick(args.pa_ratio, file, "pa-ratio", "1/2".to_string())?.parse()?,
        out: args.out.or_else(|| file.get("out").map(PathBuf::from)),
    })
}

fn simulate(r: Resolved) -> Result<()> {
    let config = ProtocolConfig { n: r.n, seed: r.seed, backend: r.backend, pa_ratio: r.pa_ratio };
    let run = run_protocol(&config, &r.strategy)?;
    let text = run.transcript.to_text();
    match &r.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    let s = &run.stats;
    let bits = |v: &[mrsqkd::Bit]| v.iter().map(|b| b.to_string()).collect::<String>();
    eprintln!("status          {}", s.status);
    if let Some(reason) = run.outcome.abort {
        eprintln!("abort           {} component {} ({:?})", reason.stage, reason.component, reason.group);
    }
    eprintln!("case 1 bits     {}", s.case1_bits);
    eprintln!("case 3 bits     {}", s.case3_bits);
    eprintln!("case 4 chains   {} ({} passed)", s.case4_checks, s.case4_passed);
    eprintln!("cycles          {} ({} group 1)", s.cycle_components, s.group1_checks);
    if s.status == Status::Completed {
        eprintln!("raw key alice   {}", bits(&run.outcome.raw_key_alice));
        eprintln!("raw key bob     {}", bits(&run.outcome.raw_key_bob));
        eprintln!("final key       {}", bits(&run.outcome.key_alice));
    }
    Ok(())
}

fn campaign(r: Resolved) -> Result<()> {
    let config = CampaignConfig {
        n: r.n,
        trials: r.trials,
        strategy: r.strategy,
        seed: r.seed,
        backend: r.backend,
        pa_ratio: r.pa_ratio,
        out: r.out.clone(),
    };
    let result = harness::run_campaign(&config)?;
    if r.out.is_none() {
        let stdout = std::io::stdout();
        harness::write_csv(&result.stats, stdout.lock())?;
    }
    eprintln!("{}", result.summary);
    Ok(())
}

fn run_curves(max: u32, trials: Option<u64>, n: usize, seed: u64, out: Option<PathBuf>) -> Result<()> {
    let mut rows = harness::detection_curves(max);
    if let Some(trials) = trials {
        for row in rows.iter_mut().filter(|r| r.k >= 1 && (r.k as usize) <= n) {
            let cfg = CampaignConfig::new(n, trials, TpStrategy::modification(Gate::X, row.k as usize), seed);
            let s = harness::run_campaign(&cfg)?.summary;
            row.modification_empirical = Some((s.detection_rate, s.trials));
        }
        // Naive attack binned by the number of key bits the run would have kept.
        let mut bins: HashMap<usize, (u64, u64)> = HashMap::new();
        for n_small in [2usize, 4, 8, 16, 32] {
            let cfg = CampaignConfig::new(n_small, trials, TpStrategy::naive_measure(), seed);
            for s in harness::run_campaign(&cfg)?.stats {
                let e = bins.entry(s.candidate_key_len()).or_default();
                e.0 += s.aborted() as u64;
                e.1 += 1;
            }
        }
        for row in rows.iter_mut() {
            if let Some(&(hit, total)) = bins.get(&(row.k as usize)) {
                row.measurement_empirical = Some((hit as f64 / total as f64, total));
            }
        }
    }
    match out {
        Some(path) => {
            let file = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
            curves::write_curves(&rows, file)?;
        }
        None => curves::write_curves(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => read_config(path)?,
        None => HashMap::new(),
    };
    match cli.command {
        Command::Simulate(args) => simulate(resolve(args, &file)?),
        Command::Campaign(args) => campaign(resolve(args, &file)?),
        Command::VerifyBackends { max_qubits, samples, seed } => {
            let report = harness::verify_backends(max_qubits, samples, seed)?;
            println!("{report}");
            std::io::stdout().flush()?;
            if !report.passed() {
                bail!("backend verification failed");
            }
            Ok(())
        }
        Command::Curves { max, trials, n, seed, out } => run_curves(max, trials, n, seed, out),
    }
}
