use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use d2kit::cmd::{
    check_field, cmd_bialgebroid, cmd_centralizer, cmd_cod2, cmd_d2, cmd_duality, cmd_obstructions, cmd_quasibase,
    cmd_report, cmd_smash, cmd_validate, error_exit_code, export_fixture, Input, Report, Which,
};
use d2kit::depth_two::Side;
use d2kit::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "d2kit", version)]
#[command(about = "Decide depth two and codepth two exactly over Q and verify the attached bialgebroids")]
struct Args {
    /// Write the JSON report here instead of printing text.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel checks (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichArg {
    S,
    T,
    #[value(name = "AeH")]
    AeH,
    #[value(name = "AHA")]
    Aha,
}

/// INPUT is a JSON file or a built-in fixture name.
#[derive(Debug, Subcommand)]
enum Command {
    /// Check the structural axioms of an input document.
    Validate { input: String },
    /// Centralizer R and the dimensions of A⊗_B A, S and T.
    Centralizer { input: String },
    /// Depth two verdicts with quasibases or obstructions.
    D2 {
        input: String,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Quasibases for both sides, re-verified.
    Quasibase { input: String },
    /// Partial-invariance obstructions from principal and supplied ideals.
    Obstructions {
        input: String,
        #[arg(long)]
        ideals: Option<PathBuf>,
    },
    /// Build and verify a bialgebroid.
    Bialgebroid {
        input: String,
        #[arg(long, value_enum)]
        which: WhichArg,
    },
    /// Smash product and stability checks for an A-module.
    Smash {
        input: String,
        /// regular, standard, sign_plus_trivial or a module file.
        #[arg(long, default_value = "regular")]
        module: String,
    },
    /// Codepth two verdicts with coquasibases.
    Cod2 { input: String },
    /// Coalgebra/algebra duality checks.
    Duality { input: String },
    /// Every applicable check on one input, or on all fixtures.
    Report {
        input: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Print a built-in fixture as an input document.
    Export { fixture: String },
}

fn configure_threads(n: usize) {
    if n == 1 {
        d2kit::par::set_parallel(false);
    }
    #[cfg(feature = "parallel")]
    if n > 1 {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(args: &Args) -> Result<Option<Report>> {
    let input = |s: &str| Input::parse(s);
    let rep = match &args.cmd {
        Command::Validate { input: i } => cmd_validate(&input(i))?,
        Command::Centralizer { input: i } => cmd_centralizer(&input(i))?,
        Command::D2 { input: i, side } => {
            let side = match side {
                SideArg::Left => Some(Side::Left),
                SideArg::Right => Some(Side::Right),
                SideArg::Both => None,
            };
            cmd_d2(&input(i), side)?
        }
        Command::Quasibase { input: i } => cmd_quasibase(&input(i))?,
        Command::Obstructions { input: i, ideals } => cmd_obstructions(&input(i), ideals.as_deref())?,
        Command::Bialgebroid { input: i, which } => {
            let which = match which {
                WhichArg::S => Which::S,
                WhichArg::T => Which::T,
                WhichArg::AeH => Which::AeH,
                WhichArg::Aha => Which::AHA,
            };
            cmd_bialgebroid(&input(i), which)?
        }
        Command::Smash { input: i, module } => cmd_smash(&input(i), module)?,
        Command::Cod2 { input: i } => cmd_cod2(&input(i))?,
        Command::Duality { input: i } => cmd_duality(&input(i))?,
        Command::Report { input: i, all } => match (i, all) {
            (None, true) => cmd_report(None)?,
            (Some(i), false) => cmd_report(Some(&input(i)))?,
            _ => return Err(Error::InvalidInput("report takes either INPUT or --all".into())),
        },
        Command::Export { fixture } => {
            println!("{}", export_fixture(fixture)?);
            return Ok(None);
        }
    };
    Ok(Some(rep))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(e) = check_field(std::env::var("D2KIT_FIELD").ok().as_deref()) {
        eprintln!("d2kit: {e}");
        return ExitCode::from(2);
    }
    configure_threads(args.threads);
    match run(&args) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(rep)) => {
            match &args.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rep.to_json() + "\n") {
                        eprintln!("d2kit: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", rep.to_text()),
            }
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("d2kit: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
