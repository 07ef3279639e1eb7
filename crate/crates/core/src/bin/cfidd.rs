use std::fs::File;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cfidd::detect::flop_count;
use cfidd::{DetectorKind, Error, SelectionMode, Simulator, Strategy, SystemConfig};

#[derive(Parser)]
#[command(version, about = "Cell-free massive MIMO uplink IDD simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BER sweep over the SNR grid, written as CSV.
    Sweep(SimArgs),
    /// Detailed dump of one trial at the first SNR point.
    Trial(SimArgs),
    /// Per-symbol flop counts of the local detectors.
    Flops(SimArgs),
    /// Fast invariant checks.
    Selftest,
}

#[derive(Args)]
struct SimArgs {
    /// TOML scenario file; defaults are used when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    detector: DetectorArg,
    #[arg(long, value_enum, default_value = "all")]
    strategy: StrategyArg,
    #[arg(long)]
    mode: Option<SelectionMode>,
    /// Comma-separated SNR points in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectorArg {
    Rmf,
    Mmse,
    MmsePic,
    All,
}

impl DetectorArg {
    fn kinds(self) -> Vec<DetectorKind> {
        match self {
            DetectorArg::Rmf => vec![DetectorKind::Rmf],
            DetectorArg::Mmse => vec![DetectorKind::Mmse],
            DetectorArg::MmsePic => vec![DetectorKind::MmsePic],
            DetectorArg::All => DetectorKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Standard,
    Censoring,
    Combining,
    All,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Standard => vec![Strategy::Standard],
            StrategyArg::Censoring => vec![Strategy::Censoring],
            StrategyArg::Combining => vec![Strategy::Combining],
            StrategyArg::All => Strategy::ALL.to_vec(),
        }
    }
}

impl SimArgs {
    fn load_config(&self) -> cfidd::Result<SystemConfig> {
        let mut config = match &self.config {
            Some(path) => SystemConfig::load(path)?,
            None => SystemConfig::default(),
        };
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if let Some(snr) = &self.snr {
            config.snr_grid_db = snr.clone();
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        config.validate()?;
        Ok(config)
    }

    fn simulator(&self) -> cfidd::Result<Simulator> {
        Ok(Simulator::new(self.load_config()?)?
            .with_detectors(&self.detector.kinds())
            .with_strategies(&self.strategy.strategies()))
    }
}

fn sweep(args: &SimArgs) -> cfidd::Result<()> {
    let table = args.simulator()?.sweep()?;
    match &args.out {
        Some(path) => table.write_csv(File::create(path)?),
        None => table.write_csv(io::stdout().lock()),
    }
}

fn trial(args: &SimArgs) -> cfidd::Result<()> {
    let sim = args.simulator()?;
    let snr = sim.config().snr_grid_db[0];
    let report = sim.trial_report(snr, sim.trial_seed(0))?;
    print!("{report}");
    Ok(())
}

fn flops(args: &SimArgs) -> cfidd::Result<()> {
    let c = args.load_config()?;
    let mc = u32::try_from(c.bits_per_symbol).map_err(|_| Error::Config("bits per symbol out of range".into()))?;
    println!("K={} N={} L={} M_c={}", c.ues, c.antennas, c.aps, mc);
    for kind in args.detector.kinds() {
        let f = flop_count(kind, c.ues as u64, c.antennas as u64, c.aps as u64, mc);
        println!("{:<9} {f}", kind.as_str());
    }
    Ok(())
}

fn selftest() -> cfidd::Result<bool> {
    let outcomes = cfidd::selftest::run_all();
    for o in &outcomes {
        println!("{o}");
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    let outcome = match &cli.command {
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Trial(a) => trial(a).map(|_| true),
        Command::Flops(a) => flops(a).map(|_| true),
        Command::Selftest => selftest(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
