//! Golden JSON reports for every fixture workspace. Set LIECOCHAIN_BLESS=1
//! to rewrite the expected files after an intended output change.

mod common;

use common::{fixtures, run_json, GOLDEN};

#[test]
fn reports_match_golden_files() {
    let bless = std::env::var("LIECOCHAIN_BLESS").is_ok_and(|v| v == "1");
    for (name, code) in GOLDEN {
        let out = run_json(name);
        assert_eq!(out.code, *code, "{name}: exit code, stderr {}", out.stderr);
        assert!(out.stderr.is_empty(), "{name}: {}", out.stderr);
        let path = fixtures().join("golden").join(name.replace(".lc", ".json"));
        if bless {
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let want =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(out.stdout, want, "{name} differs from {}", path.display());
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (name, _) in GOLDEN {
        assert_eq!(run_json(name).stdout, run_json(name).stdout, "{name}");
    }
}

#[test]
fn every_directive_yields_verdicts_in_order() {
    let out = run_json("so3.lc");
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let subjects: Vec<&str> = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["subject"].as_str().unwrap())
        .collect();
    assert_eq!(subjects, ["so3/SO2", "so3/SO2", "so3/O2", "so3/O2"]);
}
