use std::sync::Arc;

use super::*;
use crate::chart::MultiVectorField;
use crate::lie::LieAlgebra;
use crate::report::Outcome;
use crate::scalar::FunctionSymbol;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn c(n: i64) -> ScalarExpr {
    ScalarExpr::from_int(n)
}

fn co(name: &str) -> ScalarExpr {
    ScalarExpr::coord(name)
}

fn sym(name: &str, args: &[&str]) -> ScalarExpr {
    ScalarExpr::symbol(
        FunctionSymbol::new(name, args.iter().map(|a| a.to_string()).collect()).unwrap(),
    )
}

fn vf(chart: &Arc<Chart>, comps: Vec<ScalarExpr>) -> VectorField {
    VectorField::new(chart.clone(), comps).unwrap()
}

fn form(chart: &Arc<Chart>, k: usize, terms: Vec<(Vec<usize>, ScalarExpr)>) -> DiffForm {
    DiffForm::from_terms(chart.clone(), k, terms).unwrap()
}

fn chain(chart: &Arc<Chart>, q: usize, terms: Vec<(Vec<usize>, ScalarExpr)>) -> MultiVectorField {
    MultiVectorField::from_terms(chart.clone(), q, terms).unwrap()
}

fn pt(vals: &[i64]) -> Vec<Rational> {
    vals.iter().map(|&v| q(v)).collect()
}

/// Translations along y and z on 3-space.
fn intro() -> ActionSpec {
    let m = Chart::with_coords("M", &["x", "y", "z"]);
    let gens = vec![
        VectorField::basis(m.clone(), 1),
        VectorField::basis(m.clone(), 2),
    ];
    ActionSpec::new("G", LieAlgebra::abelian(2), gens, 2).unwrap()
}

/// (a,b)·(x,y,z) = (ax+b, ay, z) with [e1,e2] = -e2.
fn affine_bracket(sign: i64) -> LieAlgebra {
    LieAlgebra::new(2, [((0, 1), vec![q(0), q(sign)])]).unwrap()
}

fn example1() -> ActionSpec {
    let m = Chart::with_coords("M", &["x", "y", "z"]);
    let gens = vec![
        vf(&m, vec![co("x"), co("y"), c(0)]),
        VectorField::basis(m.clone(), 0),
    ];
    ActionSpec::new("G", affine_bracket(-1), gens, 2).unwrap()
}

/// (a,b)·(x,y) = (x + ay + b, y).
fn example2() -> ActionSpec {
    let m = Chart::with_coords("N", &["x", "y"]);
    let gens = vec![
        vf(&m, vec![co("y"), c(0)]),
        VectorField::basis(m.clone(), 0),
    ];
    ActionSpec::new("G", LieAlgebra::abelian(2), gens, 1).unwrap()
}

fn chi1(a: &ActionSpec) -> MultiVectorField {
    chain(
        a.chart(),
        2,
        vec![(vec![0, 1], sym("K", &["z"]).mul(&co("y").pow(2).unwrap()))],
    )
}

#[test]
fn validation_examples() {
    let a = intro();
    let v = a.validate(&[pt(&[0, 0, 0]), pt(&[1, 2, 3])]).unwrap();
    assert!(v.is_effective());
    let e1 = example1();
    assert!(e1
        .validate(&[pt(&[0, 1, 0]), pt(&[2, -3, 1])])
        .unwrap()
        .is_effective());
    let wrong = ActionSpec::new("G", affine_bracket(1), e1.generators().to_vec(), 2).unwrap();
    match wrong.validate(&[]) {
        Err(AnalysisError::HomomorphismViolation {
            i: 1,
            j: 2,
            residual,
        }) => {
            assert_eq!(
                residual,
                VectorField::basis(e1.chart().clone(), 0).scale(&c(-2))
            );
        }
        other => panic!("unexpected {other:?}"),
    }
    // y = 0 is not in the domain of the free action
    assert!(matches!(
        e1.validate(&[pt(&[0, 0, 0])]),
        Err(AnalysisError::RankDeficit {
            rank: 1,
            expected: 2,
            ..
        })
    ));
}

#[test]
fn ineffective_action_is_reported() {
    let m = Chart::with_coords("M", &["x", "y"]);
    let g = VectorField::basis(m.clone(), 0);
    let a = ActionSpec::new(
        "G",
        LieAlgebra::abelian(2),
        vec![g.clone(), g.scale(&c(2))],
        1,
    )
    .unwrap();
    let v = a.validate(&[pt(&[0, 0])]).unwrap();
    assert_eq!(v.kernel, vec![vec![q(-2), q(1)]]);
}

#[test]
fn isotropy_examples() {
    assert!(intro()
        .isotropy_algebra_at(&pt(&[1, 2, 3]))
        .unwrap()
        .isotropy_basis
        .is_empty());
    assert!(example1()
        .isotropy_algebra_at(&pt(&[0, 1, 0]))
        .unwrap()
        .isotropy_basis
        .is_empty());

    let plane = Chart::with_coords("P", &["x", "y"]);
    let rot = vf(&plane, vec![co("y").neg(), co("x")]);
    let a = ActionSpec::new("SO2", LieAlgebra::abelian(1), vec![rot], 1).unwrap();
    let s = a.isotropy_algebra_at(&pt(&[0, 0])).unwrap();
    assert_eq!(s.isotropy_basis, vec![vec![q(1)]]);
    let k = a.kappa_space_at(&s, &[]).unwrap();
    assert!(k.kappa_tangent.is_empty());
    assert!(k.kappa_vertical.is_empty());

    let free = intro();
    let s = free.isotropy_algebra_at(&pt(&[0, 0, 0])).unwrap();
    let k = free.kappa_space_at(&s, &[]).unwrap();
    assert_eq!(k.kappa_tangent.len(), 3);
    assert_eq!(k.kappa_vertical.len(), 2);
}

#[test]
fn rotation_and_translation_fix_the_axis() {
    let m = Chart::with_coords("M", &["x", "y", "z"]);
    let rot = vf(&m, vec![co("y").neg(), co("x"), c(0)]);
    let a = ActionSpec::new(
        "G",
        LieAlgebra::abelian(2),
        vec![rot, VectorField::basis(m.clone(), 2)],
        2,
    )
    .unwrap();
    let s = a.isotropy_algebra_at(&pt(&[0, 0, 0])).unwrap();
    assert_eq!(s.isotropy_basis, vec![vec![q(1), q(0)]]);
    let k = a.kappa_space_at(&s, &[]).unwrap();
    assert_eq!(k.kappa_tangent, vec![vec![q(0), q(0), q(1)]]);
    assert_eq!(k.kappa_vertical, vec![vec![q(0), q(0), q(1)]]);
    // a reflection z -> -z in the isotropy group kills the axis
    let refl = ComponentRep {
        adjoint: Matrix::identity(2),
        tangent: Some(Matrix::diagonal(&[q(1), q(1), q(-1)])),
    };
    let k = a.kappa_space_at(&s, &[refl]).unwrap();
    assert!(k.kappa_tangent.is_empty());
}

#[test]
fn invariance_examples() {
    let a = intro();
    let m = a.chart().clone();
    let alpha = form(
        &m,
        2,
        vec![
            (vec![0, 1], sym("a", &["x"])),
            (vec![0, 2], sym("b", &["x"])),
            (vec![1, 2], sym("c", &["x"])),
        ],
    );
    assert_eq!(a.form_invariance_residual(&alpha).unwrap(), None);
    assert_eq!(
        a.form_invariance_residual(&form(&m, 1, vec![(vec![0], co("x"))]))
            .unwrap(),
        None
    );
    let not = form(&m, 1, vec![(vec![0], co("y"))]);
    assert_eq!(
        a.form_invariance_residual(&not).unwrap(),
        Some((0, form(&m, 1, vec![(vec![0], c(1))])))
    );

    let e1 = example1();
    let m = e1.chart().clone();
    let r = vf(
        &m,
        vec![
            sym("f", &["z"]).mul(&co("y")),
            sym("g", &["z"]).mul(&co("y")),
            sym("h", &["z"]),
        ],
    );
    assert_eq!(e1.field_invariance_residual(&r).unwrap(), None);
    assert_eq!(e1.chain_invariance_residual(&chi1(&e1)).unwrap(), None);
}

#[test]
fn verticality_examples() {
    let a = intro();
    let m = a.chart().clone();
    let f = a
        .check_vertical(&chain(&m, 2, vec![(vec![1, 2], c(1))]), &[pt(&[0, 0, 0])])
        .unwrap();
    assert_eq!(f.frame, vec![0, 1]);
    assert_eq!(f.factor, c(1));

    let e1 = example1();
    let f = e1.check_vertical(&chi1(&e1), &[pt(&[0, 1, 0])]).unwrap();
    assert!(f.factor.equals(&sym("K", &["z"]).mul(&co("y")).neg()));
    let bad = chain(e1.chart(), 2, vec![(vec![0, 2], c(1))]);
    assert!(matches!(
        e1.check_vertical(&bad, &[pt(&[0, 1, 0])]),
        Err(AnalysisError::NotProportional(_))
    ));
    assert!(matches!(
        e1.check_vertical(&chi1(&e1), &[pt(&[0, 0, 0])]),
        Err(AnalysisError::NoFrameFound(2))
    ));
}

#[test]
fn semibasic_examples() {
    let a = intro();
    let m = a.chart().clone();
    assert_eq!(
        a.semibasic_residual(&form(&m, 1, vec![(vec![0], sym("A", &["x"]))]))
            .unwrap(),
        None
    );
    assert!(a
        .semibasic_residual(&form(&m, 1, vec![(vec![1], c(1))]))
        .unwrap()
        .is_some());
    assert_eq!(
        a.semibasic_residual(&DiffForm::function(m, co("y")))
            .unwrap(),
        None
    );
}

#[test]
fn evaluation_map_on_the_introductory_action() {
    let a = intro();
    let m = a.chart().clone();
    let chi = chain(&m, 2, vec![(vec![1, 2], c(1))]);
    let alpha = form(
        &m,
        2,
        vec![
            (vec![0, 1], sym("a", &["x"])),
            (vec![0, 2], sym("b", &["x"])),
            (vec![1, 2], sym("c", &["x"])),
        ],
    );
    let nu = form(&m, 3, vec![(vec![0, 1, 2], sym("A", &["x"]))]);
    let samples = [pt(&[0, 0, 0])];
    let r = a.rho(&chi, &alpha, &samples).unwrap();
    assert_eq!(r.value, DiffForm::function(m.clone(), sym("c", &["x"])));
    assert_eq!(r.sign, 1);
    assert!(r.is_basic());
    let r = a.rho(&chi, &nu, &samples).unwrap();
    assert_eq!(r.value, form(&m, 1, vec![(vec![0], sym("A", &["x"]))]));
    assert!(r.is_basic());
    let zero = DiffForm::zero(m.clone(), 2).unwrap();
    assert!(a.rho(&chi, &zero, &samples).unwrap().value.is_zero());

    let cc = a.coupling_check(&chi, &alpha, &samples).unwrap();
    assert!(cc.holds());
    assert_eq!(
        cc.lhs,
        form(&m, 1, vec![(vec![0], sym("c", &["x"]).partial("x"))])
    );
    assert!(a.coupling_check(&chi, &nu, &samples).unwrap().holds());

    let not_inv = form(&m, 2, vec![(vec![1, 2], co("y"))]);
    assert!(matches!(
        a.rho(&chi, &not_inv, &samples),
        Err(AnalysisError::InvalidInput(_))
    ));
}

#[test]
fn coupling_fails_for_the_solvable_example() {
    let a = example1();
    let m = a.chart().clone();
    let omega = form(&m, 2, vec![(vec![0, 2], co("y").recip().unwrap())]);
    assert_eq!(a.form_invariance_residual(&omega).unwrap(), None);
    let cc = a
        .coupling_check(&chi1(&a), &omega, &[pt(&[0, 1, 0])])
        .unwrap();
    assert!(!cc.holds());
    assert_eq!(cc.residual, form(&m, 1, vec![(vec![2], sym("K", &["z"]))]));
}

#[test]
fn coupling_holds_for_the_shear_example() {
    let a = example2();
    let m = a.chart().clone();
    let chi = chain(&m, 1, vec![(vec![0], sym("K", &["y"]))]);
    let samples = [pt(&[0, 1])];
    for w in [
        form(&m, 1, vec![(vec![1], sym("b", &["y"]))]),
        form(&m, 2, vec![(vec![0, 1], sym("c", &["y"]))]),
        DiffForm::function(m.clone(), sym("f", &["y"])),
    ] {
        assert!(a.coupling_check(&chi, &w, &samples).unwrap().holds(), "{w}");
    }
    // a(y) dx is not invariant: the shear generator turns dx into dy
    let ady = form(&m, 1, vec![(vec![0], sym("a", &["y"]))]);
    assert!(a.form_invariance_residual(&ady).unwrap().is_some());
}

#[test]
fn lie_derivative_identity_examples() {
    let a = example1();
    let m = a.chart().clone();
    let chi = chi1(&a);
    let ry = vf(&m, vec![c(0), co("y"), c(0)]);
    assert_eq!(a.chain_lie_residual(&chi, &ry).unwrap(), chi);
    let l = a.lambda_factor(&chi, &ry).unwrap();
    assert_eq!(l.lambda, c(1));
    assert_eq!(l.invariance_residual, None);
    let h = sym("h", &["z"]);
    let rz = vf(&m, vec![c(0), c(0), h.clone()]);
    let l = a.lambda_factor(&chi, &rz).unwrap();
    let kz = sym("K", &["z"]);
    assert!(l
        .lambda
        .equals(&h.mul(&kz.partial("z")).checked_div(&kz).unwrap()));
    let not_inv = VectorField::basis(m.clone(), 1);
    assert!(matches!(
        a.chain_lie_residual(&chi, &not_inv),
        Err(AnalysisError::NonInvariantR(_))
    ));

    let b = example2();
    let n = b.chart().clone();
    let chi2 = chain(&n, 1, vec![(vec![0], sym("K", &["y"]))]);
    let r = vf(&n, vec![sym("a", &["y"]), c(0)]);
    assert!(b.chain_lie_residual(&chi2, &r).unwrap().is_zero());
    assert_eq!(b.lambda_factor(&chi2, &r).unwrap().lambda, c(0));

    let i = intro();
    let chi3 = chain(i.chart(), 2, vec![(vec![1, 2], c(1))]);
    let rx = vf(i.chart(), vec![co("x"), c(0), c(0)]);
    assert!(i.chain_lie_residual(&chi3, &rx).unwrap().is_zero());
}

#[test]
fn lambda_is_linear_in_the_field() {
    let a = example1();
    let m = a.chart().clone();
    let chi = chi1(&a);
    let r1 = vf(&m, vec![c(0), co("y"), c(0)]);
    let r2 = vf(&m, vec![c(0), c(0), sym("h", &["z"])]);
    let l1 = a.lambda_factor(&chi, &r1).unwrap().lambda;
    let l2 = a.lambda_factor(&chi, &r2).unwrap().lambda;
    let sum = a.lambda_factor(&chi, &r1.add(&r2).unwrap()).unwrap().lambda;
    assert!(sum.equals(&l1.add(&l2)));
    let scaled = a.lambda_factor(&chi, &r2.scale(&c(3))).unwrap().lambda;
    assert!(scaled.equals(&l2.scale(&q(3))));
}

#[test]
fn integrability_examples() {
    let a = example1();
    let m = a.chart().clone();
    let zs = vec![
        vf(&m, vec![c(0), co("y"), c(0)]),
        vf(&m, vec![c(0), c(0), sym("h", &["z"])]),
    ];
    let rs = a.integrability_check(&chi1(&a), &zs).unwrap();
    assert_eq!(rs.len(), 1);
    assert!(rs[0].residual.is_zero());
    assert!(rs[0].bracket_invariant);
    assert!(a
        .integrability_check(&chi1(&a), &zs[..1])
        .unwrap()
        .is_empty());

    let i = intro();
    let chi = chain(i.chart(), 2, vec![(vec![1, 2], c(1))]);
    let zs = vec![
        vf(i.chart(), vec![co("x"), c(0), c(0)]),
        vf(i.chart(), vec![c(0), co("x"), co("x").pow(2).unwrap()]),
    ];
    assert!(i
        .integrability_check(&chi, &zs)
        .unwrap()
        .iter()
        .all(|r| r.residual.is_zero()));
}

#[test]
fn rescaling_examples() {
    let a = example1();
    let m = a.chart().clone();
    let chi0 = chain(&m, 2, vec![(vec![0, 1], co("y").pow(2).unwrap())]);
    let k = ScalarExpr::constant(Rational::new(1.into(), 5.into()));
    let dz = VectorField::basis(m.clone(), 2);
    let ry = vf(&m, vec![c(0), co("y"), c(0)]);
    let rs = a
        .rescale_verify(&chi0, &k, std::slice::from_ref(&dz))
        .unwrap();
    assert!(rs[0].residual.is_zero());
    let rs = a.rescale_verify(&chi0, &k, &[dz, ry]).unwrap();
    assert!(!rs[1].residual.is_zero());
    assert!(matches!(
        a.rescale_verify(&chi0, &c(0), &[]),
        Err(AnalysisError::InvalidInput(_))
    ));

    let b = example2();
    let n = b.chart().clone();
    let chi0 = chain(&n, 1, vec![(vec![0], c(1))]);
    let r = vf(&n, vec![sym("a", &["y"]), c(0)]);
    let rs = b.rescale_verify(&chi0, &sym("K", &["y"]), &[r]).unwrap();
    assert!(rs[0].residual.is_zero());
}

#[test]
fn surjectivity_examples() {
    let a = intro();
    let m = a.chart().clone();
    let chi = chain(&m, 2, vec![(vec![1, 2], c(1))]);
    let vol = form(&m, 2, vec![(vec![1, 2], c(1))]);
    assert!(a.surjectivity_certificate(&chi, &vol).unwrap().holds());
    let twice = vol.scale(&c(2));
    let cert = a.surjectivity_certificate(&chi, &twice).unwrap();
    assert!(!cert.holds());
    assert_eq!(cert.pairing, c(2));

    // dx pairs to one with the shear chain but is moved by y∂x
    let b = example2();
    let n = b.chart().clone();
    let cert = b
        .surjectivity_certificate(
            &chain(&n, 1, vec![(vec![0], c(1))]),
            &form(&n, 1, vec![(vec![0], c(1))]),
        )
        .unwrap();
    assert_eq!(cert.pairing, c(1));
    assert_eq!(
        cert.invariance_residual,
        Some((0, form(&n, 1, vec![(vec![1], c(1))])))
    );
    assert!(!cert.holds());
}

#[test]
fn obstruction_examples() {
    let a = example1();
    let rep = a
        .obstruction_report(&[SamplePoint::new("P", pt(&[0, 1, 0]))])
        .unwrap();
    assert_eq!(rep.verdict, ObstructionVerdict::NoCochainMap);
    assert_eq!(rep.points[0].relative.dimension, 0);
    assert_eq!(rep.points[0].relative_forms_dim(), 1);

    let b = example2();
    let rep = b
        .obstruction_report(&[SamplePoint::new("P", pt(&[0, 1]))])
        .unwrap();
    assert_eq!(rep.verdict, ObstructionVerdict::LocallyUnobstructed);
    assert_eq!(rep.points[0].absolute_dim, 2);
    // the shear fixes the line through e1 - y e2 at each point
    assert_eq!(rep.points[0].subgroup.basis, vec![vec![q(-1), q(1)]]);
    assert_eq!(rep.points[0].relative.dimension, 1);

    let i = intro();
    let rep = i
        .obstruction_report(&[SamplePoint::new("P", pt(&[0, 0, 0]))])
        .unwrap();
    assert_eq!(rep.verdict, ObstructionVerdict::LocallyUnobstructed);
    assert_eq!(rep.points[0].relative.dimension, 1);
}

#[test]
fn rotation_action_with_and_without_extra_component() {
    // rotations of 3-space realize so(3) with the opposite bracket; at
    // (0,0,1) the isotropy is the rotation about z
    let m = Chart::with_coords("R3", &["x", "y", "z"]);
    let gens = vec![
        vf(&m, vec![c(0), co("z").neg(), co("y")]),
        vf(&m, vec![co("z"), c(0), co("x").neg()]),
        vf(&m, vec![co("y").neg(), co("x"), c(0)]),
    ];
    let l = LieAlgebra::new(
        3,
        [
            ((0, 1), vec![q(0), q(0), q(-1)]),
            ((0, 2), vec![q(0), q(1), q(0)]),
            ((1, 2), vec![q(-1), q(0), q(0)]),
        ],
    )
    .unwrap();
    let a = ActionSpec::new("SO3", l, gens, 2).unwrap();
    assert!(a.homomorphism_residuals().is_empty());
    let p = SamplePoint::new("N", pt(&[0, 0, 1]));
    let rep = a.obstruction_report(std::slice::from_ref(&p)).unwrap();
    assert_eq!(rep.points[0].subgroup.basis.len(), 1);
    assert_eq!(rep.points[0].relative_forms_dim(), 1);
    assert_eq!(rep.points[0].relative.dimension, 1);
    // the stabilizer of a line rather than a point adds the half-turn about e2
    let mut flipped = p;
    flipped
        .components
        .push(ComponentRep::adjoint_only(Matrix::diagonal(&[
            q(-1),
            q(1),
            q(-1),
        ])));
    let rep = a.obstruction_report(&[flipped]).unwrap();
    assert_eq!(rep.verdict, ObstructionVerdict::NoInvariantChain);
}

#[test]
fn verdict_rendering() {
    let a = example1();
    let m = a.chart().clone();
    let chi = chi1(&a);
    let ry = vf(&m, vec![c(0), co("y"), c(0)]);
    let v = a.chain_lie_verdict("chi", &chi, "R", &ry).unwrap();
    assert_eq!(v.verdict, Outcome::Fail);
    assert_eq!(v.witness.as_deref(), Some("K(z)*y^2*D(x)^D(y)"));
    let vs = a
        .obstruction_verdicts(&[SamplePoint::new("P", pt(&[0, 1, 0]))])
        .unwrap();
    let last = vs.last().unwrap();
    assert_eq!(last.value.as_deref(), Some("no cochain map can exist"));
    assert_eq!(last.verdict, Outcome::Fail);
    let not_inv = VectorField::basis(m, 1);
    let v = a.lambda_verdict("chi", &chi, "Y", &not_inv).unwrap();
    assert_eq!(v.verdict, Outcome::Skipped);
    assert!(v.reason.is_some());
}
