mod args;
mod commands;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use netentropy::io::CONFIG_KEYS;

use args::{Cli, Command};

fn config_help() -> String {
    let mut text = String::from("Config file keys (`key = value`, `#` comments):\n");
    for (key, desc) in CONFIG_KEYS {
        text.push_str(&format!("  {key:<28} {desc}\n"));
    }
    text.push_str("\nExit codes: 0 ok, 2 usage or parse error, 3 degenerate input graph, 1 output failure.");
    text
}

fn main() -> ExitCode {
    let help = config_help();
    let mut command = Cli::command().after_help(help.clone());
    for name in ["generate", "grow", "sweep"] {
        command = command.mut_subcommand(name, |c| c.after_help(help.clone()));
    }
    let matches = command.get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match &cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Generate(a) => commands::generate(a),
        Command::Grow(a) => commands::grow_trace(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
