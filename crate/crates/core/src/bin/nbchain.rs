use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nbchain::scenario::{
    explain_config, load_config, run_sweep, sweep, write_outputs, ConfigError, LoadOptions, RunError,
    Scenario,
};

#[derive(Parser)]
#[command(name = "nbchain", version, about = "NB-IoT + permissioned ledger simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Usecase1,
    Usecase2,
    Baseline,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Fig5,
    Fig6,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario and write CSV results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
        /// Also write the full event trace of every run.
        #[arg(long)]
        trace: bool,
    },
    /// Print every configuration key with its default.
    ExplainConfig,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::ExplainConfig => {
            print!("{}", explain_config());
            ExitCode::SUCCESS
        }
        Cmd::Run {
            config,
            scenario,
            seed,
            out,
            profile,
            trace,
        } => {
            let scenario = match scenario {
                ScenarioArg::Usecase1 => Scenario::Usecase1,
                ScenarioArg::Usecase2 => Scenario::Usecase2,
                ScenarioArg::Baseline => Scenario::Baseline,
            };
            let opts = LoadOptions {
                profile: profile.map(|p| match p {
                    ProfileArg::Fig5 => "fig5".to_string(),
                    ProfileArg::Fig6 => "fig6".to_string(),
                }),
                default_profile: Some(scenario.default_profile().to_string()),
                base_dir: None,
            };
            let mut cfg = match load_config(&config, &opts) {
                Ok(c) => c,
                Err(e @ (ConfigError::Io { .. } | ConfigError::Invalid(_))) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            cfg.seed = seed;
            let runs = match run_sweep(&sweep(scenario, &cfg)) {
                Ok(r) => r,
                Err(e @ (RunError::Invariant(_) | RunError::Chain(_))) => {
                    eprintln!("invariant breach: {e}");
                    return ExitCode::from(EXIT_INVARIANT);
                }
                Err(e) => {
                    eprintln!("runtime error: {e}");
                    return ExitCode::from(EXIT_INVARIANT);
                }
            };
            if let Err(e) = std::fs::create_dir_all(&out)
                .map_err(Into::into)
                .and_then(|()| write_outputs(&out, scenario, &runs, trace))
            {
                eprintln!("cannot write results to {}: {e}", out.display());
                return ExitCode::FAILURE;
            }
            for (label, r) in &runs {
                let s = &r.summary;
                println!(
                    "{label:<14} ratio={} e2e_mean_s={} committed={}/{}",
                    s.ratio_mean.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into()),
                    s.e2e_mean_s.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into()),
                    s.committed,
                    s.generated
                );
            }
            println!("results written to {}", out.display());
            ExitCode::SUCCESS
        }
    }
}
