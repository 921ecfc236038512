//! Random tensors on charts of dimension 1 to 4 and coordinate oracles.

use std::sync::Arc;

use liecochain::lie::combinations;
use liecochain::{Chart, DiffForm, FunctionSymbol, ScalarExpr, VectorField};
use proptest::prelude::*;

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn chart(n: usize) -> Arc<Chart> {
    Chart::with_coords("M", &NAMES[..n])
}

fn sym(name: &str, args: &[&str]) -> ScalarExpr {
    ScalarExpr::symbol(
        FunctionSymbol::new(name, args.iter().map(|a| a.to_string()).collect()).unwrap(),
    )
}

/// Small polynomial in the chart coordinates, sometimes times or plus a
/// formal function.
pub fn scalar(n: usize) -> impl Strategy<Value = ScalarExpr> {
    (
        prop::collection::vec(-2i64..=2, 3),
        prop::collection::vec(prop::collection::vec(0i64..=2, n), 3),
        0usize..3,
    )
        .prop_map(move |(coeffs, exps, which)| {
            let mut e = ScalarExpr::zero();
            for (c, ex) in coeffs.into_iter().zip(exps) {
                let mut t = ScalarExpr::from_int(c);
                for (i, k) in ex.into_iter().enumerate() {
                    t = t.mul(&ScalarExpr::coord(NAMES[i]).pow(k).unwrap());
                }
                e = e.add(&t);
            }
            match which {
                1 => e.mul(&sym("K", &[NAMES[n - 1]])),
                2 => e.add(&sym("g", &NAMES[..n.min(2)])),
                _ => e,
            }
        })
}

pub fn field(n: usize) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(scalar(n), n).prop_map(move |cs| VectorField::new(chart(n), cs).unwrap())
}

pub fn form(n: usize, k: usize) -> impl Strategy<Value = DiffForm> {
    let tuples = combinations(n, k);
    prop::collection::vec(scalar(n), tuples.len()).prop_map(move |cs| {
        DiffForm::from_terms(chart(n), k, tuples.clone().into_iter().zip(cs)).unwrap()
    })
}

/// A chart dimension with a form degree that fits it.
pub fn dim_and_degree() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), 0..=n))
}

/// (L_X ω)_I = X(ω_I) + Σ_s Σ_k ∂_{I_s} X^k ω_{I with I_s replaced by k}
pub fn lie_form_oracle(w: &DiffForm, x: &VectorField) -> DiffForm {
    let chart = w.chart().clone();
    let n = chart.dim();
    let mut terms = Vec::new();
    for idx in combinations(n, w.degree()) {
        let mut v = x.apply(&w.coefficient(&idx));
        for s in 0..idx.len() {
            for k in 0..n {
                let mut j = idx.clone();
                j[s] = k;
                let dxk = x.component(k).partial(&chart.coords()[idx[s]]);
                v = v.add(&dxk.mul(&w.coefficient(&j)));
            }
        }
        terms.push((idx, v));
    }
    DiffForm::from_terms(chart, w.degree(), terms).unwrap()
}

/// (dω)_J = Σ_s (-1)^s ∂_{j_s} ω_{J without j_s}
pub fn d_oracle(w: &DiffForm) -> DiffForm {
    let chart = w.chart().clone();
    let n = chart.dim();
    let k = w.degree() + 1;
    let terms = combinations(n, k).into_iter().map(|jj| {
        let mut v = ScalarExpr::zero();
        for s in 0..jj.len() {
            let rest: Vec<usize> = jj
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != s)
                .map(|(_, &x)| x)
                .collect();
            let t = w.coefficient(&rest).partial(&chart.coords()[jj[s]]);
            v = if s % 2 == 0 { v.add(&t) } else { v.sub(&t) };
        }
        (jj, v)
    });
    DiffForm::from_terms(chart.clone(), k, terms.collect::<Vec<_>>()).unwrap()
}
