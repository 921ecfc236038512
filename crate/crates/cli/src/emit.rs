use std::fmt::Write;

use liecochain::report::Outcome;
use liecochain::Verdict;
use serde::Serialize;

/// The machine-readable report. Field order is the key order.
#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub tool_version: &'static str,
    pub command: String,
    pub verdicts: &'a [Verdict],
    pub timing_ms: Option<u64>,
}

pub fn emit_json(report: &Report<'_>) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("verdicts always serialize");
    s.push('\n');
    s
}

fn tag(o: Outcome, color: bool) -> String {
    let (label, code) = match o {
        Outcome::Pass => ("PASS", "32"),
        Outcome::Fail => ("FAIL", "31"),
        Outcome::Skipped => ("SKIP", "33"),
    };
    if color {
        format!("\x1b[{code}m{label}\x1b[0m")
    } else {
        label.to_string()
    }
}

/// Human-readable report in mathematical notation.
pub fn emit_text(report: &Report<'_>, verbosity: u8, color: bool) -> String {
    let mut out = String::new();
    for v in report.verdicts {
        let _ = write!(
            out,
            "{}  {:<14} {}",
            tag(v.verdict, color),
            v.check,
            v.subject
        );
        if let (Some(d), Some(_)) = (&v.dims, &v.representatives) {
            let _ = write!(out, ": dim H = {}", d.h);
            if let Some(p) = &v.pretty {
                let _ = write!(out, ", classes {p}");
            }
        } else if let Some(d) = v
            .pretty
            .as_ref()
            .or(v.value.as_ref())
            .or(v.witness.as_ref())
        {
            let _ = write!(out, ": {d}");
        }
        out.push('\n');
        let show_reason = verbosity > 0 || v.verdict != Outcome::Pass;
        if let (true, Some(r)) = (show_reason, &v.reason) {
            let _ = writeln!(out, "      {r}");
        }
        if verbosity > 0 {
            if let Some(p) = &v.point {
                let _ = writeln!(out, "      at {p}");
            }
            if let Some(d) = &v.dims {
                let _ = write!(out, "      dim A = {}, dim H = {}", d.a_rel, d.h);
                if let Some(h) = d.h_abs {
                    let _ = write!(out, ", absolute dim H = {h}");
                }
                if let Some(i) = d.isotropy {
                    let _ = write!(out, ", isotropy dim = {i}");
                }
                out.push('\n');
            }
            if verbosity > 1 {
                if let Some(x) = &v.value {
                    let _ = writeln!(out, "      value {x}");
                }
                if let Some(w) = &v.witness {
                    let _ = writeln!(out, "      witness {w}");
                }
            }
        }
    }
    let count = |o| report.verdicts.iter().filter(|v| v.verdict == o).count();
    let _ = write!(
        out,
        "{} passed, {} failed, {} skipped",
        count(Outcome::Pass),
        count(Outcome::Fail),
        count(Outcome::Skipped)
    );
    if let Some(ms) = report.timing_ms {
        let _ = write!(out, " in {ms} ms");
    }
    out.push('\n');
    out
}
