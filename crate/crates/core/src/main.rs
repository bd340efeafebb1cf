use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddspin::app::{cmd_schedule, cmd_simulate, cmd_verify, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "ddspin", version, about = "Dynamical-decoupling scheduler and simulator for spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimise interaction durations and write schedule.json
    Schedule(Common),
    /// Run the requested pictures and write one CSV per picture
    Simulate(Common),
    /// Run the oracle checks and write verify.json
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.path)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trajectories: Option<usize>,
}

impl Common {
    fn load(&self) -> ddspin::Result<(Experiment, PathBuf)> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.noise.seed = seed;
        }
        if let Some(n) = self.trajectories {
            cfg.noise.trajectories = n;
        }
        if let Some(out) = &self.out {
            cfg.output.path = out.clone();
        }
        let exp = cfg.resolve()?;
        let out = exp.output.clone();
        Ok((exp, out))
    }
}

fn execute(command: Command) -> ddspin::Result<u8> {
    match command {
        Command::Schedule(c) => {
            let (exp, out) = c.load()?;
            let o = cmd_schedule(&exp, &out)?;
            for step in &o.schedule.steps {
                println!("pair {}-{}  tau = {:.6}", step.pair.0, step.pair.1, step.tau);
            }
            println!("predicted |c00 c11| = {:.6}", o.prediction.bell_metric());
            println!("wrote {}", o.path.display());
            Ok(0)
        }
        Command::Simulate(c) => {
            let (exp, out) = c.load()?;
            let o = cmd_simulate(&exp, &out)?;
            for (path, result) in &o.runs {
                let c_end = result.final_concurrence(exp.target).unwrap_or(0.0);
                println!(
                    "{}: C{:?} = {:.6} at t = {:.4}; wrote {}",
                    result.picture,
                    exp.target,
                    c_end,
                    result.times.last().copied().unwrap_or(0.0),
                    path.display()
                );
            }
            Ok(0)
        }
        Command::Verify(c) => {
            let (exp, out) = c.load()?;
            let report = cmd_verify(&exp, &out)?;
            for check in &report.checks {
                let mark = if check.passed { "ok  " } else { "FAIL" };
                println!("{mark} {:<26} {:.3e} (tolerance {:.1e})", check.name, check.value, check.tolerance);
            }
            let probe = &report.staggered_probe;
            for (n, norm) in &probe.relative_norms {
                println!("staggered ({}, {}) N={n}: |H_avg|/|H0| = {norm:.3e}", probe.n_x, probe.m_x);
            }
            if report.passed {
                Ok(0)
            } else {
                let names: Vec<_> = report.failing().map(|c| c.name).collect();
                eprintln!("verification failed: {}", names.join(", "));
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
