use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tpsa::cli::{cmd_check_grid, cmd_run, exit_code, RunOptions};

/// Two-point stress approximation finite volume solver.
#[derive(Parser)]
#[command(name = "tpsa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report admissibility and face-orthogonality defect of a grid
    /// (`gt1:8`, `gt4:8:<seed>`, `file:<path>`).
    CheckGrid { spec: String },
    /// Run the experiment described by a configuration file and write CSV.
    Run {
        config: PathBuf,
        /// Also write one legacy VTK file per level.
        #[arg(long)]
        vtk: bool,
        /// Output directory (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the wall_ms column. Off by default to keep output reproducible.
        #[arg(long)]
        timing: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.command {
        Command::CheckGrid { spec } => {
            let (text, code) = cmd_check_grid(&spec);
            if code == 0 || text.starts_with("admissible") {
                println!("{text}");
            } else {
                eprintln!("{text}");
            }
            ExitCode::from(code as u8)
        }
        Command::Run { config, vtk, out, timing } => match cmd_run(&config, &RunOptions { vtk, out, timing }) {
            Ok(path) => {
                println!("wrote {}", path.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code(&e) as u8)
            }
        },
    }
}
