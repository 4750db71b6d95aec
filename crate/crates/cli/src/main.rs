use std::path::PathBuf;
use std::process::ExitCode;

use chiralcav_cli::{convergence_sweep, oracle_check, parse_config, run_grid, run_scenario, CliError, ScenarioArgs};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chiralcav", version, about = "Entanglement dynamics of two chirally coupled cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write its observables as CSV
    Run(ScenarioArgs),
    /// Compare log-negativity series across truncations
    Converge {
        #[command(flatten)]
        args: ScenarioArgs,
        #[arg(long, value_delimiter = ',', default_value = "15,20,25,30")]
        dims: Vec<usize>,
    },
    /// Check the integrator against exact propagation
    OracleCheck(ScenarioArgs),
    /// Run every scenario at r = 0.5, 1, 2
    Grid {
        #[command(flatten)]
        args: ScenarioArgs,
        #[arg(long, default_value = "grid")]
        out_dir: PathBuf,
    },
}

fn execute(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Run(args) => {
            let cfg = parse_config(&args)?;
            run_scenario(&cfg, std::io::stdout().lock())?;
            Ok(true)
        }
        Command::Converge { args, dims } => {
            let report = convergence_sweep(&parse_config(&args)?, &dims)?;
            print!("{}", report.render());
            Ok(report.passed())
        }
        Command::OracleCheck(args) => {
            let report = oracle_check(&parse_config(&args)?)?;
            print!("{}", report.render());
            Ok(report.passed())
        }
        Command::Grid { args, out_dir } => {
            for path in run_grid(&parse_config(&args)?, &out_dir)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        // A failed check is a numerical failure.
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
