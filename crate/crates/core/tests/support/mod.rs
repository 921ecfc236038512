//! Generators, oracles and property bodies shared by the property tests
//! and the acceptance harness.
#![allow(dead_code)]

pub mod chart;
pub mod lie;

use liecochain::lie::{
    absolute_cohomology, ce_differential, conjugate_subgroup, infinitesimal_action,
};
use liecochain::{AltForm, DiffForm, LieAlgebra, Matrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

/// Runs `test` on `cases` random inputs; the error names the shrunk failure.
pub fn run_suite<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

/// Every randomized identity suite, by name.
pub const PROPERTY_SUITES: &[Suite] = &[
    ("random algebras satisfy Jacobi", algebras_satisfy_jacobi),
    ("CE d∘d = 0", ce_d_squared),
    ("CE Cartan formula", ce_cartan),
    ("CE antiderivation", ce_antiderivation),
    ("CE cohomology vs dense oracle", ce_dense_oracle),
    ("chart d matches coordinate formula, d∘d = 0", chart_d),
    ("chart Cartan formula", chart_cartan),
    ("chart antiderivation", chart_antiderivation),
    ("[L_X, ι_Y] = ι_[X,Y]", lie_interior_commutator),
    ("vector field bracket Jacobi", field_jacobi),
];

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn ce_d(l: &LieAlgebra, a: &AltForm) -> AltForm {
    if a.degree() == l.dim() {
        AltForm::zero(l.dim(), a.degree() + 1)
    } else {
        ce_differential(l, a).unwrap()
    }
}

pub fn algebras_satisfy_jacobi(cases: u32) -> Result<(), String> {
    run_suite(cases, lie::algebra(), |l| {
        prop_assert!(l.validate().is_ok());
        Ok(())
    })
}

pub fn ce_d_squared(cases: u32) -> Result<(), String> {
    run_suite(cases, lie::algebra_with_form(), |(l, a, _)| {
        if a.degree() + 2 <= l.dim() {
            let dda = ce_differential(&l, &ce_differential(&l, &a).unwrap()).unwrap();
            prop_assert!(dda.is_zero());
        }
        Ok(())
    })
}

/// θ_v = d ι_v + ι_v d, with θ_v computed from the coadjoint action.
pub fn ce_cartan(cases: u32) -> Result<(), String> {
    run_suite(cases, lie::algebra_with_form(), |(l, a, v)| {
        let p = l.dim();
        let lie = infinitesimal_action(&l, &v, &a).unwrap();
        let d_iota = if a.degree() == 0 {
            AltForm::zero(p, 0)
        } else {
            ce_d(&l, &a.interior(&v).unwrap())
        };
        let iota_d = ce_d(&l, &a).interior(&v).unwrap();
        prop_assert_eq!(lie, d_iota.add(&iota_d));
        Ok(())
    })
}

pub fn ce_antiderivation(cases: u32) -> Result<(), String> {
    let strat = lie::algebra().prop_flat_map(|l| {
        let p = l.dim();
        (0..p).prop_flat_map(move |r1| {
            let l = l.clone();
            (0..p - r1)
                .prop_flat_map(move |r2| (Just(l.clone()), lie::form(p, r1), lie::form(p, r2)))
        })
    });
    run_suite(cases, strat, |(l, a, b)| {
        let lhs = ce_differential(&l, &a.wedge(&b).unwrap()).unwrap();
        let sign = if a.degree() % 2 == 0 { q(1) } else { q(-1) };
        let rhs = ce_differential(&l, &a).unwrap().wedge(&b).unwrap().add(
            &a.wedge(&ce_differential(&l, &b).unwrap())
                .unwrap()
                .scale(&sign),
        );
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn ce_dense_oracle(cases: u32) -> Result<(), String> {
    run_suite(cases, lie::algebra(), |l| {
        for r in 0..=l.dim() {
            let h = absolute_cohomology(&l, r).unwrap();
            prop_assert_eq!(h.dimension, lie::oracle_betti(&l, r), "degree {}", r);
        }
        Ok(())
    })
}

/// Abelian algebras of dimension up to 5 have binomial Betti numbers, both
/// from the library and from the brute-force rank oracle.
pub fn abelian_binomial() -> Result<(), String> {
    for p in 1..=5 {
        let l = LieAlgebra::abelian(p);
        for r in 0..=p {
            let want = lie::binomial(p, r);
            let got = absolute_cohomology(&l, r)
                .map_err(|e| e.to_string())?
                .dimension;
            let oracle = lie::oracle_betti(&l, r);
            if got != want || oracle != want {
                return Err(format!(
                    "p={p} r={r}: library {got}, oracle {oracle}, binomial {want}"
                ));
            }
        }
    }
    Ok(())
}

fn zero_like(w: &DiffForm) -> DiffForm {
    DiffForm::zero(w.chart().clone(), w.degree()).unwrap()
}

pub fn chart_d(cases: u32) -> Result<(), String> {
    let strat = chart::dim_and_degree()
        .prop_filter("below top degree", |(n, k)| k < n)
        .prop_flat_map(|(n, k)| chart::form(n, k));
    run_suite(cases, strat, |w| {
        let dw = w.exterior_derivative().unwrap();
        prop_assert!(dw.sub(&chart::d_oracle(&w)).unwrap().is_zero());
        if let Some(ddw) = dw.exterior_derivative_or_top().unwrap() {
            prop_assert!(ddw.is_zero());
        }
        Ok(())
    })
}

/// The library's Lie derivative, the coordinate formula, and d ι + ι d
/// assembled from primitives all agree.
pub fn chart_cartan(cases: u32) -> Result<(), String> {
    let strat =
        chart::dim_and_degree().prop_flat_map(|(n, k)| (chart::field(n), chart::form(n, k)));
    run_suite(cases, strat, |(x, w)| {
        let n = w.chart().dim();
        let lie = w.lie_derivative(&x).unwrap();
        prop_assert!(lie.sub(&chart::lie_form_oracle(&w, &x)).unwrap().is_zero());
        let iota_d = if w.degree() < n {
            w.exterior_derivative().unwrap().interior(&x).unwrap()
        } else {
            zero_like(&w)
        };
        let d_iota = if w.degree() > 0 {
            w.interior(&x).unwrap().exterior_derivative().unwrap()
        } else {
            zero_like(&w)
        };
        prop_assert!(lie.sub(&iota_d.add(&d_iota).unwrap()).unwrap().is_zero());
        Ok(())
    })
}

pub fn chart_antiderivation(cases: u32) -> Result<(), String> {
    let strat = (1usize..=4).prop_flat_map(|n| {
        (0..n).prop_flat_map(move |k1| {
            (0..n - k1).prop_flat_map(move |k2| (chart::form(n, k1), chart::form(n, k2)))
        })
    });
    run_suite(cases, strat, |(a, b)| {
        let ab = a.wedge(&b).unwrap();
        let lhs = ab.exterior_derivative().unwrap();
        let first = a.exterior_derivative().unwrap().wedge(&b).unwrap();
        let second = a.wedge(&b.exterior_derivative().unwrap()).unwrap();
        let rhs = if a.degree() % 2 == 0 {
            first.add(&second)
        } else {
            first.sub(&second)
        }
        .unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
        Ok(())
    })
}

pub fn lie_interior_commutator(cases: u32) -> Result<(), String> {
    let strat = chart::dim_and_degree()
        .prop_filter("positive degree", |(_, k)| *k > 0)
        .prop_flat_map(|(n, k)| (chart::field(n), chart::field(n), chart::form(n, k)));
    run_suite(cases, strat, |(x, y, w)| {
        let lhs = w
            .interior(&y)
            .unwrap()
            .lie_derivative(&x)
            .unwrap()
            .sub(&w.lie_derivative(&x).unwrap().interior(&y).unwrap())
            .unwrap();
        let rhs = w.interior(&x.bracket(&y).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
        Ok(())
    })
}

pub fn field_jacobi(cases: u32) -> Result<(), String> {
    let strat = (1usize..=4).prop_flat_map(|n| (chart::field(n), chart::field(n), chart::field(n)));
    run_suite(cases, strat, |(x, y, z)| {
        let b = |u: &liecochain::VectorField, v: &liecochain::VectorField| u.bracket(v).unwrap();
        let sum = b(&b(&x, &y), &z)
            .add(&b(&b(&y, &z), &x))
            .unwrap()
            .add(&b(&b(&z, &x), &y))
            .unwrap();
        prop_assert!(sum.is_zero());
        Ok(())
    })
}

/// Rotations from Cayley transforms act on so(3) and its subgroups without
/// changing any relative complex dimension.
pub fn so3_conjugation(cases: u32) -> Result<(), String> {
    let strat = [
        lie::small_rational(),
        lie::small_rational(),
        lie::small_rational(),
    ];
    run_suite(cases, strat, |s| {
        let l = LieAlgebra::so3();
        let a = lie::cayley(s);
        prop_assert!(lie::preserves_bracket(&l, &a));
        for k in lie::so3_subgroups() {
            k.validate(&l).unwrap();
            let conj = conjugate_subgroup(&l, &k, &a).unwrap();
            conj.validate(&l).unwrap();
            prop_assert_eq!(lie::relative_dims(&l, &k), lie::relative_dims(&l, &conj));
        }
        Ok(())
    })
}

/// The same for [e1, e2] = e2 under A e1 = e1 + b e2, A e2 = c e2.
pub fn solvable_conjugation(cases: u32) -> Result<(), String> {
    let strat = (
        lie::small_rational(),
        lie::small_rational().prop_filter("nonzero", |c| !c.is_zero()),
    );
    run_suite(cases, strat, |(b, c)| {
        let l = lie::solvable();
        let a = Matrix::from_rows(vec![vec![q(1), q(0)], vec![b, c]], 2);
        prop_assert!(lie::preserves_bracket(&l, &a));
        for k in lie::solvable_subgroups() {
            k.validate(&l).unwrap();
            let conj = conjugate_subgroup(&l, &k, &a).unwrap();
            conj.validate(&l).unwrap();
            prop_assert_eq!(lie::relative_dims(&l, &k), lie::relative_dims(&l, &conj));
        }
        Ok(())
    })
}
