use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apnc::harness::{emit_results, run_experiment, ExperimentConfig, ResultRow, Scenario};
use apnc::Error;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

#[derive(Parser, Debug)]
#[command(
    name = "apnc",
    version,
    about = "Asynchronous PNC misalignment estimation and decoding simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimator-only experiments (estimator_mse, estimator_pdf).
    Estimate(RunArgs),
    /// Decoding experiments (decoder_ser_awgn, decoder_per_rayleigh, truncation_sweep).
    Decode(RunArgs),
    /// Any scenario; accepts several L values and runs one experiment each.
    Sweep(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_enum::<Scenario>)]
    scenario: Option<Scenario>,
    /// I, II, III, IV or exact_tau.
    #[arg(long, value_parser = parse_enum::<apnc::harness::Solution>)]
    solution: Option<apnc::harness::Solution>,
    /// Force the baud or double decoder regardless of the solution.
    #[arg(long, value_parser = parse_enum::<apnc::harness::DecoderKind>)]
    decoder: Option<apnc::harness::DecoderKind>,
    /// awgn or rayleigh.
    #[arg(long, value_parser = parse_enum::<apnc::channel::ChannelModel>)]
    channel: Option<apnc::channel::ChannelModel>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "Q")]
    q: Option<usize>,
    #[arg(long = "G")]
    g: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Truncation depth; `sweep` takes a comma-separated list.
    #[arg(long = "L", value_delimiter = ',')]
    l: Vec<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    /// Eb/N0 points in dB: a comma-separated list whose items may be
    /// `start:step:stop` ranges.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_points)]
    ebn0: Vec<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    span: Option<usize>,
    /// Stop a point after this many errors (0 runs every trial).
    #[arg(long)]
    min_errors: Option<usize>,
    /// Results CSV; a JSON sidecar (and histograms) are written next to it.
    /// Without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_enum<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_points(s: &str) -> Result<Vec<f64>, String> {
    let bad = |_| format!("invalid Eb/N0 value '{s}'");
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![v.trim().parse().map_err(bad)?]),
        [a, step, b] => {
            let (a, step, b): (f64, f64, f64) = (
                a.parse().map_err(bad)?,
                step.parse().map_err(bad)?,
                b.parse().map_err(bad)?,
            );
            if step.is_nan() || step <= 0.0 || b < a {
                return Err(format!("range '{s}' needs start <= stop and a positive step"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| a + i as f64 * step).collect())
        }
        _ => Err(format!("invalid Eb/N0 item '{s}'")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Estimate,
    Decode,
    Sweep,
}

/// Builds the list of configs to run: one per requested `L`.
fn resolve(args: &RunArgs, mode: Mode) -> Result<Vec<ExperimentConfig>, Error> {
    let mut base = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => ExperimentConfig {
            scenario: match mode {
                Mode::Estimate => Scenario::EstimatorMse,
                _ => Scenario::DecoderSerAwgn,
            },
            ..Default::default()
        },
    };
    macro_rules! apply {
        ($($f:ident),*) => { $( if let Some(v) = args.$f { base.$f = v; } )* };
    }
    apply!(scenario, solution, channel, beta, q, g, d, n, trials, seed, min_errors);
    if args.decoder.is_some() {
        base.decoder = args.decoder;
    }
    if args.span.is_some() {
        base.span = args.span;
    }
    if !args.ebn0.is_empty() {
        base.ebn0_list = args.ebn0.iter().flatten().copied().collect();
    }
    match (mode, base.scenario.decodes()) {
        (Mode::Estimate, true) => {
            return Err(Error::Config(format!(
                "scenario: {} is not an estimator scenario",
                base.scenario.name()
            )))
        }
        (Mode::Decode, false) => {
            return Err(Error::Config(format!(
                "scenario: {} is not a decoding scenario",
                base.scenario.name()
            )))
        }
        _ => {}
    }
    if args.l.len() > 1 && mode != Mode::Sweep {
        return Err(Error::Config("L: only sweep accepts several values".into()));
    }
    let ls = if args.l.is_empty() {
        vec![base.l]
    } else {
        args.l.clone()
    };
    ls.into_iter()
        .map(|l| {
            let cfg = ExperimentConfig { l, ..base.clone() };
            cfg.validate()?;
            Ok(cfg)
        })
        .collect()
}

fn out_path(out: &Path, cfg: &ExperimentConfig, several: bool) -> PathBuf {
    if !several {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    out.with_file_name(format!("{stem}_L{}.csv", cfg.l))
}

fn run(args: &RunArgs, mode: Mode) -> Result<(), Error> {
    let configs = resolve(args, mode)?;
    let several = configs.len() > 1;
    let mut stdout = args.out.is_none().then(|| csv::Writer::from_writer(std::io::stdout()));
    for cfg in &configs {
        let records = run_experiment(cfg)?;
        for r in &records {
            eprintln!(
                "{} {} L={} Eb/N0={} dB: trials={} mse_tau={:.3e} ser={} per={} ({:.1} s)",
                cfg.scenario.name(),
                cfg.solution.name(),
                cfg.l,
                r.ebn0,
                r.trials_run,
                r.mse_tau,
                r.ser.map_or("-".into(), |v| format!("{v:.3e}")),
                r.per.map_or("-".into(), |v| format!("{v:.3e}")),
                r.wall_time
            );
        }
        match (&args.out, stdout.as_mut()) {
            (Some(out), _) => {
                for f in emit_results(cfg, &records, &out_path(out, cfg, several))? {
                    eprintln!("wrote {}", f.display());
                }
            }
            (None, Some(w)) => {
                for r in &records {
                    w.serialize(ResultRow::new(cfg, r))?;
                }
                w.flush()?;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, mode) = match &cli.command {
        Command::Estimate(a) => (a, Mode::Estimate),
        Command::Decode(a) => (a, Mode::Decode),
        Command::Sweep(a) => (a, Mode::Sweep),
    };
    match run(args, mode) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
