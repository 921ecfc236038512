//! Command-line front end: loads a workspace, runs the requested checks and
//! reports verdicts as text or JSON with a deterministic exit code.

pub mod args;
pub mod emit;
pub mod exec;

use std::io::Read;
use std::time::Instant;

use liecochain::{parse_named, Verdict};

pub use args::{Cli, Command, Format, RunConfig};
pub use exec::{execute, execute_all, tasks_for, InputError, Task};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Everything a run produces; `main` only forwards it to the process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        RunOutput {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Verdicts for a configuration, or the input error that stopped the run.
pub fn verdicts(config: &RunConfig, stdin: &mut dyn Read) -> Result<Vec<Verdict>, String> {
    let (file, text) = match &config.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            (path.display().to_string(), text)
        }
        None => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            ("<stdin>".to_string(), text)
        }
    };
    let ws = parse_named(&file, &text).map_err(|e| e.to_string())?;
    let tasks = tasks_for(&config.command, &ws).map_err(|e| e.to_string())?;
    execute_all(&ws, &tasks).map_err(|e| e.to_string())
}

pub fn run(config: &RunConfig, stdin: &mut dyn Read) -> RunOutput {
    let start = Instant::now();
    let verdicts = match verdicts(config, stdin) {
        Ok(v) => v,
        Err(e) => return RunOutput::input_error(e),
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let report = emit::Report {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: config.command.label(),
        verdicts: &verdicts,
        timing_ms: config.timing.then_some(elapsed),
    };
    let stdout = match config.format {
        Format::Json => emit::emit_json(&report),
        Format::Text => emit::emit_text(&report, config.verbosity, config.color),
    };
    let code = if verdicts.iter().all(Verdict::passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    RunOutput {
        code,
        stdout,
        stderr: String::new(),
    }
}
