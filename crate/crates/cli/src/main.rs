use std::io::{self, IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;
use liecochain_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = RunConfig::from(cli);
    config.color =
        io::stdout().is_terminal() && std::env::var("LIECOCHAIN_COLOR").map_or(true, |v| v != "0");
    let out = run(&config, &mut io::stdin().lock());
    let _ = io::stdout().write_all(out.stdout.as_bytes());
    let _ = io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
