#![allow(dead_code)]

use std::path::PathBuf;

use clap::Parser;
use liecochain_cli::{run, Cli, RunConfig, RunOutput};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

/// Runs the front end in process with the given arguments and stdin.
pub fn invoke_with_stdin(args: &[&str], stdin: &str) -> RunOutput {
    let argv = std::iter::once("liecochain").chain(args.iter().copied());
    let config = RunConfig::from(Cli::try_parse_from(argv).expect("valid arguments"));
    run(&config, &mut stdin.as_bytes())
}

pub fn invoke(args: &[&str]) -> RunOutput {
    invoke_with_stdin(args, "")
}

/// The JSON report of `run` on a fixture, without timing.
pub fn run_json(name: &str) -> RunOutput {
    invoke(&[
        "--input",
        &fixture(name),
        "--format",
        "json",
        "--no-timing",
        "run",
    ])
}

/// Golden fixtures and the exit code each must produce.
pub const GOLDEN: &[(&str, i32)] = &[
    ("intro.lc", 0),
    ("so3.lc", 0),
    ("rotations.lc", 0),
    ("example1.lc", 1),
    ("example2.lc", 1),
];
