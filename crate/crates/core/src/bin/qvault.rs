use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qvault::cli::{self, OutputFile, RunConfig};
use qvault::presets;
use qvault::statekit::NoiseModel;

#[derive(Parser)]
#[command(name = "qvault", version, about = "SWAP-test quantum token experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// c̄_n register history for identical and orthogonal tokens
    Decay,
    /// C̄_N(Θ) sweep and (Q_o, Q_a) fit
    Sweep,
    /// Acceptance threshold τ from identical-token calibration
    Threshold,
    /// Query-attack campaign, p_f and bill table
    Attack,
    /// Bill threshold m and acceptance curves
    Bill,
    /// Quality, τ, p_f and P_f for every hardware preset
    Table1,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    shots: usize,
    #[arg(long, global = true, default_value_t = 400)]
    states: usize,
    /// One of: ideal, kingston-like, fez-like, marrakesh-like
    #[arg(long, global = true, conflicts_with_all = ["p1", "p2", "p_readout", "readout_decay"])]
    noise_preset: Option<String>,
    #[arg(long, global = true)]
    p1: Option<f64>,
    #[arg(long, global = true)]
    p2: Option<f64>,
    #[arg(long = "p-readout", global = true)]
    p_readout: Option<f64>,
    #[arg(long = "readout-decay", global = true)]
    readout_decay: Option<f64>,
    #[arg(long, global = true, default_value_t = 20)]
    repetitions: usize,
    #[arg(long = "pb-target", global = true, default_value_t = 0.99)]
    pb_target: f64,
    #[arg(long = "bill-M", global = true, default_value_t = 20)]
    bill_m: usize,
    #[arg(long = "type2-target", global = true, default_value_t = 1e-4)]
    type2_target: f64,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Θ grid size for sweeps
    #[arg(long, global = true, default_value_t = 21)]
    points: usize,
    /// Longest history for `decay`
    #[arg(long = "n-max", global = true, default_value_t = 60)]
    n_max: usize,
    /// Force the acceptance threshold in `attack`
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Forgery acceptance rate for `bill`
    #[arg(long = "pf", global = true)]
    p_f: Option<f64>,
}

fn config(a: &Common) -> Result<RunConfig, String> {
    let custom = a.p1.is_some() || a.p2.is_some() || a.p_readout.is_some() || a.readout_decay.is_some();
    let (preset, noise) = if custom {
        let noise = NoiseModel::with_readout_decay(
            a.p1.unwrap_or(0.0),
            a.p2.unwrap_or(0.0),
            a.p_readout.unwrap_or(0.0),
            a.readout_decay.unwrap_or(0.0),
        )
        .map_err(|e| e.to_string())?;
        (None, noise)
    } else {
        let name = a.noise_preset.as_deref().unwrap_or(presets::KINGSTON_LIKE.name);
        let p = presets::by_name(name)
            .ok_or_else(|| format!("unknown preset `{name}` (known: {})", presets::names().join(", ")))?;
        (Some(p.name.to_string()), p.noise)
    };
    Ok(RunConfig {
        preset,
        noise,
        repetitions: a.repetitions,
        shots: a.shots,
        states: a.states,
        seed: a.seed,
        pb_target: a.pb_target,
        bill_total: a.bill_m,
        type2_target: a.type2_target,
        out: a.out.clone(),
        points: a.points,
        n_max: a.n_max,
        tau: a.tau,
        p_f: a.p_f,
    })
}

fn run(command: Command, cfg: &RunConfig) -> qvault::Result<Vec<OutputFile>> {
    match command {
        Command::Decay => cli::cmd_decay(cfg),
        Command::Sweep => cli::cmd_sweep(cfg),
        Command::Threshold => cli::cmd_threshold(cfg),
        Command::Attack => cli::cmd_attack(cfg),
        Command::Bill => cli::cmd_bill(cfg),
        Command::Table1 => cli::cmd_table1(cfg),
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let cfg = match config(&args.args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let files = match run(args.command, &cfg).and_then(|f| cli::write_outputs(&cfg.out, &f).map(|_| f)) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    for f in &files {
        println!("{}", cfg.out.join(&f.name).display());
        if f.name.ends_with(".txt") {
            for line in f.contents.lines().skip_while(|l| !l.is_empty()).filter(|l| !l.is_empty()) {
                println!("  {line}");
            }
        }
    }
    ExitCode::SUCCESS
}
