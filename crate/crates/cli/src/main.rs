use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dodecatile::solver::{DEFAULT_GRID, NEWTON_TOL};
use dodecatile::type5::DEFAULT_SEED;
use dodecatile_cli::commands::{cmd_build, cmd_curves, cmd_solve, cmd_verify, BuildArgs, Outcome};
use dodecatile_cli::CliError;

#[derive(Parser)]
#[command(name = "dodecatile", version, about = "Tilings of the sphere by twelve congruent pentagons")]
struct Cli {
    /// Seed for the random overlap sweep.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roots of the type 2/3 systems, or the rigidity scan of types 1/4.
    Solve {
        #[arg(long = "type")]
        type_id: u8,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = NEWTON_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a type 5 tiling from beta and gamma.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// Read beta and gamma in degrees.
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an OBJ mesh.
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        mesh_subdiv: u32,
    },
    /// Check a tiling document.
    Verify { path: PathBuf },
    /// Zero curves and labelled roots of the type 2/3 systems.
    Curves {
        #[arg(long = "type")]
        type_id: u8,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Solve { type_id, grid, tol, out } => cmd_solve(type_id, grid, tol, out.as_deref()),
        Command::Build { beta, gamma, degrees, out, mesh, mesh_subdiv } => {
            let (beta, gamma) = if degrees { (beta.to_radians(), gamma.to_radians()) } else { (beta, gamma) };
            cmd_build(&BuildArgs { beta, gamma, out: out.as_deref(), mesh: mesh.as_deref(), mesh_subdiv, seed: cli.seed })
        }
        Command::Verify { path } => cmd_verify(&path, cli.seed),
        Command::Curves { type_id, resolution, out, svg } => cmd_curves(type_id, resolution, out.as_deref(), svg.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
