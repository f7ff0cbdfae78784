use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dqd_cluster::harness::commands::replay;
use dqd_cluster::harness::{run_command, write_outputs, Command, ExperimentConfig};
use dqd_cluster::Result;

#[derive(Parser)]
#[command(
    name = "dqd-cluster",
    version,
    about = "Cluster-state preparation in double-quantum-dot qubit chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// E_cc against detuning, and the calibrated detuning pulse.
    Figure2(Overrides),
    /// Fidelity against chain length and against phase-noise strength.
    Figure3(Overrides),
    /// Prepare the cluster state and verify its stabilizers.
    Prepare(Overrides),
    /// Prepare, schedule and run a measurement pattern.
    MeasureDemo(Overrides),
    /// Re-run a command from its run manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Overrides {
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    qubits: Option<usize>,
    /// Noise strength(s) in units of π, comma separated.
    #[arg(long)]
    sigma_over_pi: Option<String>,
    /// Extra `key=value` overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Overrides {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_text(&std::fs::read_to_string(path)?)?,
            None => ExperimentConfig::default(),
        };
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                dqd_cluster::Error::Config(format!("--set expects KEY=VALUE, got {kv:?}"))
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if let Some(n) = self.qubits {
            cfg.n_qubits = n;
        }
        if let Some(s) = &self.sigma_over_pi {
            cfg.set("sigma_over_pi", s)?;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (command, cfg, outcome) = match cli.command {
        Cmd::Replay { manifest, out } => replay(&manifest, out.as_deref())?,
        other => {
            let (command, overrides) = match other {
                Cmd::Figure2(o) => (Command::Figure2, o),
                Cmd::Figure3(o) => (Command::Figure3, o),
                Cmd::Prepare(o) => (Command::Prepare, o),
                Cmd::MeasureDemo(o) => (Command::MeasureDemo, o),
                Cmd::Replay { .. } => unreachable!(),
            };
            let cfg = overrides.load()?;
            let outcome = run_command(command, &cfg)?;
            (command, cfg, outcome)
        }
    };
    write_outputs(command, &cfg, &outcome)?;
    print!("{}", outcome.report);
    println!(
        "wrote {} file(s) to {}",
        outcome.files.len() + 1,
        cfg.out_dir.display()
    );
    Ok(!outcome.threshold_failed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
