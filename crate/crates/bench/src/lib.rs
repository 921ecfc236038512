//! Workloads shared by the benchmarks.

use std::path::PathBuf;

use liecochain::{parse, DiffForm, LieAlgebra, Rational, ScalarExpr, Workspace};

pub fn fixture_text(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).expect("fixture exists")
}

pub fn workspace(name: &str) -> Workspace {
    parse(&fixture_text(name)).expect("fixture parses")
}

/// R ⋉ R^k with [e1, e_{i+1}] = e_{i+2} (a nilpotent shift) plus
/// [e1, e_{k+1}] = e_{k+1}.
pub fn shift_algebra(k: usize) -> LieAlgebra {
    let p = k + 1;
    let q = |n: i64| Rational::from_integer(n.into());
    let brackets = (0..k).map(|i| {
        let mut v = vec![q(0); p];
        if i + 2 < p {
            v[i + 2] = q(1);
        } else {
            v[i + 1] = q(1);
        }
        ((0, i + 1), v)
    });
    LieAlgebra::new(p, brackets).expect("valid brackets")
}

/// A dense 1-form on a chart of dimension `n` with polynomial coefficients.
pub fn dense_one_form(n: usize) -> DiffForm {
    let names = ["x", "y", "z", "w", "u", "v"];
    let chart = liecochain::Chart::with_coords("M", &names[..n]);
    let terms = (0..n).map(|i| {
        let mut c = ScalarExpr::from_int(i as i64 + 1);
        for (j, name) in names[..n].iter().enumerate() {
            if j != i {
                c = c.mul(&ScalarExpr::coord(*name).pow(((i + j) % 3) as i64).unwrap());
            }
        }
        (vec![i], c)
    });
    DiffForm::from_terms(chart, 1, terms.collect::<Vec<_>>()).expect("valid form")
}
