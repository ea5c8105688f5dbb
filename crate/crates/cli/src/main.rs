use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use goursat_cli::{commands, ConvertTarget, EXIT_CONFIG, OUTPUT_DIR_ENV};

#[derive(Parser)]
#[command(
    name = "goursat",
    version,
    about = "Goursat problem solver for D1^2 D2^4 u + sum a_ij D1^i D2^j u = Z_24"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Classical,
    Nonclassical,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a run config.
    Solve { config: PathBuf },
    /// Convert a boundary-data file between treatments.
    Convert {
        #[arg(long = "to", value_enum)]
        to: Target,
        input: PathBuf,
        output: PathBuf,
    },
    /// Print the eight corner agreement residuals of a boundary-data file.
    CheckAgreement {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Manufactured-solution error report.
    Mms { config: PathBuf },
    /// Grid-refinement convergence study.
    Convergence { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(PathBuf::from);
    let mut out = std::io::stdout().lock();
    let code = match cli.command {
        Command::Solve { config } => commands::cmd_solve(&config, dir.as_deref(), &mut out),
        Command::Convert { to, input, output } => {
            let target = match to {
                Target::Classical => ConvertTarget::Classical,
                Target::Nonclassical => ConvertTarget::Nonclassical,
            };
            commands::cmd_convert(target, &input, &output, &mut out)
        }
        Command::CheckAgreement { input, tol } => {
            commands::cmd_check_agreement(&input, tol, &mut out)
        }
        Command::Mms { config } => commands::cmd_mms(&config, dir.as_deref(), &mut out),
        Command::Convergence { config } => {
            commands::cmd_convergence(&config, dir.as_deref(), &mut out)
        }
    };
    ExitCode::from(code)
}
