use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use qspectra::verify::{cmd_decompose, cmd_example, cmd_selftest, cmd_transform, exit_code, VerificationReport};
use qspectra::{Quat, SpectraError};

/// Verifies the multiplication-form spectral theorem for quaternionic
/// normal matrices and writes JSON reports.
#[derive(Parser, Debug)]
#[command(name = "qspectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every invariant suite on seeded random data.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Overrides the default tolerance of every check.
        #[arg(long)]
        tol: Option<f64>,
        /// Slice unit m as "w,x,y,z".
        #[arg(long, default_value = "0,1,0,0", allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the worked example phi(t) = (i - j - k)t on a uniform grid.
    Example {
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiplication form of a normal matrix file {"n", "entries"}.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value = "0,1,0,0", allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded transform Z = A(I + A*A)^(-1/2) of a matrix file.
    Transform {
        file: PathBuf,
        /// Treat the file as Z and recover A = Z(I - Z*Z)^(-1/2).
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, SpectraError> {
    std::fs::read_to_string(path)
        .map_err(|e| SpectraError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn run(command: Command) -> Result<(VerificationReport, Option<PathBuf>), SpectraError> {
    Ok(match command {
        Command::Selftest { seed, n, tol, m, out } => (cmd_selftest(seed, n, tol, &m.parse::<Quat>()?)?, out),
        Command::Example { grid, out } => (cmd_example(grid)?, out),
        Command::Decompose { file, m, tol, out } => (cmd_decompose(&read(&file)?, &m.parse::<Quat>()?, tol)?, out),
        Command::Transform { file, inverse, tol, out } => (cmd_transform(&read(&file)?, inverse, tol)?, out),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let (report, out) = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let json = match report.to_json() {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
    }
    if let Some(msg) = &report.error {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for c in report.checks.iter().filter(|c| !c.pass) {
            eprintln!("failed: {} (residual {:e} > tol {:e})", c.name, c.residual, c.tol);
        }
        ExitCode::from(1)
    }
}
