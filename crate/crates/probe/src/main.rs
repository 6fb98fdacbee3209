use anyhow::Result;
use clap::Parser;
use plateau_probe::cli::{Cli, Command};
use plateau_probe::commands;

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Scale(args) => {
            let (cfg, out) = args.resolve()?;
            commands::scale::execute(&cfg, &out)
        }
        Command::Depth(args) => {
            let (cfg, out) = args.resolve()?;
            commands::depth::execute(&cfg, &out)
        }
        Command::Shots(args) => {
            let (cfg, out) = args.resolve()?;
            commands::shots::execute(&cfg, &out)
        }
        Command::Spectrum(args) => {
            let (cfg, out) = args.resolve()?;
            commands::spectrum::execute(&cfg, &out)
        }
        Command::Optimize(args) => {
            let (cfg, out) = args.resolve()?;
            commands::optimize::execute(&cfg, &out)
        }
        Command::Bounds(args) => {
            let (cfg, out) = args.resolve()?;
            commands::bounds::execute(&cfg, &out)
        }
    }
}
