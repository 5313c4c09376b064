use clap::Parser;

use hdnet_cli::args::{Cli, Command};
use hdnet_cli::commands;

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(args) => commands::cmd_gen(args),
        Command::Verify(args) => commands::cmd_verify(args),
        Command::Converge(args) => commands::cmd_converge(args),
        Command::Integrate(args) => commands::cmd_integrate(args),
        Command::Bound(args) => commands::cmd_bound(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e);
        std::process::exit(e.exit_code());
    }
}
