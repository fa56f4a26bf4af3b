use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hermite_vlasov::config::{PoissonMethod, RunConfig, SpatialMethod};
use hermite_vlasov::poisson::BetaMode;
use hermite_vlasov::run::run;
use hermite_vlasov::scenario::{build_scenario, SCENARIO_NAMES};
use hermite_vlasov::Error;

#[derive(Parser)]
#[command(name = "hermite-vlasov", version, about = "1D-1V Vlasov-Poisson solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write diagnostics, snapshots and a manifest.
    Run(Overrides),
    /// List the built-in scenarios.
    ListScenarios,
    /// Print the effective configuration as TOML.
    PrintConfig(Overrides),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dg,
    Fourier,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoissonArg {
    Ldg,
    Mixed,
    Spectral,
}

#[derive(Clone, Copy, ValueEnum)]
enum BetaArg {
    Constant,
    OverH,
}

#[derive(Args)]
struct Overrides {
    /// TOML file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// Cells (DG) or maximal wavenumber index (Fourier).
    #[arg(long)]
    nx: Option<usize>,
    /// Hermite modes per species.
    #[arg(long)]
    nh: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    max_courant: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    poisson: Option<PoissonArg>,
    #[arg(long, value_enum)]
    beta_mode: Option<BetaArg>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Enable or disable the Hermite filter.
    #[arg(long)]
    filter: Option<bool>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    diag_every: Option<usize>,
    /// Comma-separated output times.
    #[arg(long, value_delimiter = ',')]
    snapshot_times: Option<Vec<f64>>,
}

impl Overrides {
    fn apply(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(s) = &self.scenario {
            c.scenario = s.clone();
        }
        c.n_x = self.nx.or(c.n_x);
        c.n_h = self.nh.or(c.n_h);
        c.degree = self.degree.or(c.degree);
        c.dt = self.dt.or(c.dt);
        c.cfl = self.cfl.unwrap_or(c.cfl);
        c.max_courant = self.max_courant.unwrap_or(c.max_courant);
        c.t_final = self.t_final.or(c.t_final);
        if let Some(m) = self.method {
            c.method = match m {
                MethodArg::Dg => SpatialMethod::Dg,
                MethodArg::Fourier => SpatialMethod::Fourier,
            };
        }
        if let Some(p) = self.poisson {
            c.poisson = Some(match p {
                PoissonArg::Ldg => PoissonMethod::Ldg,
                PoissonArg::Mixed => PoissonMethod::Mixed,
                PoissonArg::Spectral => PoissonMethod::Spectral,
            });
        }
        if let Some(b) = self.beta_mode {
            c.beta_mode = match b {
                BetaArg::Constant => BetaMode::Constant,
                BetaArg::OverH => BetaMode::OverH,
            };
        }
        c.beta = self.beta.unwrap_or(c.beta);
        c.gamma = self.gamma.or(c.gamma);
        c.filter = self.filter.unwrap_or(c.filter);
        if let Some(o) = &self.out_dir {
            c.out_dir = o.clone();
        }
        c.diag_every = self.diag_every.unwrap_or(c.diag_every);
        if let Some(t) = &self.snapshot_times {
            c.snapshot_times = Some(t.clone());
        }
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::ListScenarios => {
            for name in SCENARIO_NAMES {
                let s = build_scenario(name)?;
                let species: Vec<&str> = s.species.iter().map(|sp| sp.name.as_str()).collect();
                println!(
                    "{name:<14} L = {:.6}, T = {}, species: {}",
                    s.length,
                    s.defaults.t_final,
                    species.join(", ")
                );
            }
        }
        Command::PrintConfig(o) => {
            let c = o.apply()?;
            print!("{}", c.explicit()?.to_toml_string());
        }
        Command::Run(o) => {
            let c = o.apply()?;
            let resolved = c.resolve()?;
            let report = run(&resolved, &c.out_dir)?;
            println!(
                "{} steps of {:.6e} to t = {}; diagnostics in {}",
                report.steps,
                report.dt,
                report.final_time,
                report.diagnostics.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
