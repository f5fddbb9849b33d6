mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FredkinScanArgs, FtArgs, HalfAdderArgs, PresetRunArgs, RwaCheckArgs, ToffoliScanArgs};

#[derive(Parser)]
#[command(name = "spinlogic", version, about = "Classical reversible gates from static spin Hamiltonians")]
struct Cli {
    /// JSON file with default values for the subcommand's options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path; standard output when omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process distance of the designed Toffoli against the leading error law.
    ToffoliScan(ToffoliScanArgs),
    /// Leakage of the designed Fredkin over (n, m), or the integer pair search.
    FredkinScan(FredkinScanArgs),
    /// Physical realization presets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Three-stage half adder truth table.
    Halfadder(HalfAdderArgs),
    /// Monte Carlo study of the encoded Toffoli.
    Ft(FtArgs),
    /// Rotating-wave reduction of a preset or a spin system file.
    RwaCheck(RwaCheckArgs),
}

#[derive(Subcommand)]
enum PresetAction {
    /// Error budget and lab-frame validation of one preset.
    Run(PresetRunArgs),
    /// List preset names.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config.as_deref();
    let result = match cli.command {
        Command::ToffoliScan(a) => commands::toffoli_scan(a, cfg, cli.output),
        Command::FredkinScan(a) => commands::fredkin_scan(a, cfg, cli.output),
        Command::Preset { action: PresetAction::Run(a) } => commands::preset_run(a, cfg, cli.output),
        Command::Preset { action: PresetAction::List } => commands::preset_list(cli.output),
        Command::Halfadder(a) => commands::halfadder(a, cfg, cli.output),
        Command::Ft(a) => commands::ft(a, cfg, cli.output),
        Command::RwaCheck(a) => commands::rwa_check(a, cfg, cli.output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
