mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use commands::{Failure, EXIT_CONFIG};
use config::RunConfig;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "prtbp", version, about = "Normalization pipeline at the triangular libration points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Numeric, series and epsilon-form triangular points
    Equilibria(Common),
    /// Basic frequencies and the Moser check at one mass ratio
    Frequencies(Common),
    /// Run the pipeline and gate every stage
    Verify(Common),
    /// Moser scan over a mass-ratio range with root refinement
    ResonanceScan(Common),
    /// Pipeline summaries over a mass-ratio range
    Sweep(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Flat key = value config file; flags override its entries
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    q1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    cd: Option<String>,
    /// Drag strength, instead of cd
    #[arg(long)]
    w1: Option<String>,
    /// L4 or L5
    #[arg(long)]
    branch: Option<String>,
    /// Comma-separated subset of equilibria,taylor,b1,b2,h3
    #[arg(long)]
    stages: Option<String>,
    /// Either a value for every stage or stage=value; repeatable
    #[arg(long)]
    tol: Vec<String>,
    /// Output path prefix; stdout when absent
    #[arg(long)]
    out: Option<String>,
    /// csv or report
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    mu_min: Option<String>,
    #[arg(long)]
    mu_max: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    moser_tol: Option<String>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure {
                    code: EXIT_CONFIG,
                    message: format!("{}: {e}", path.display()),
                })?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        let mut over = RunConfig::default();
        let flags = [
            ("mu", &self.mu),
            ("q1", &self.q1),
            ("epsilon", &self.epsilon),
            ("a2", &self.a2),
            ("cd", &self.cd),
            ("w1", &self.w1),
            ("branch", &self.branch),
            ("stages", &self.stages),
            ("out", &self.out),
            ("format", &self.format),
            ("mu_min", &self.mu_min),
            ("mu_max", &self.mu_max),
            ("steps", &self.steps),
            ("moser_tol", &self.moser_tol),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                over.set(k, v)?;
            }
        }
        for t in &self.tol {
            match t.split_once('=') {
                Some((stage, v)) => over.set(&format!("tol.{}", stage.trim()), v.trim())?,
                None => over.set("tol", t)?,
            }
        }
        cfg.merge(&over);
        Ok(cfg)
    }
}

type Handler = fn(&RunConfig) -> Result<(), Failure>;

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, cmd): (&Common, Handler) = match &cli.command {
        Command::Equilibria(c) => (c, commands::equilibria),
        Command::Frequencies(c) => (c, commands::frequencies_cmd),
        Command::Verify(c) => (c, commands::verify),
        Command::ResonanceScan(c) => (c, commands::resonance_scan_cmd),
        Command::Sweep(c) => (c, commands::sweep_cmd),
    };
    let cfg = common.config()?;
    commands::save_config(&cfg)?;
    cmd(&cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
