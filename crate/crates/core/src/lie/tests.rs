use super::*;
use crate::linalg::Matrix;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn vec_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

fn alpha(p: usize, idx: &[usize]) -> AltForm {
    AltForm::from_terms(p, idx.len(), [(idx.to_vec(), q(1))]).unwrap()
}

fn so2() -> SubgroupSpec {
    SubgroupSpec::connected(vec![vec_q(&[0, 0, 1])])
}

fn o2() -> SubgroupSpec {
    SubgroupSpec::new(
        vec![vec_q(&[0, 0, 1])],
        vec![Matrix::from_i64(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]])],
    )
}

fn solvable2() -> LieAlgebra {
    LieAlgebra::new(2, [((0, 1), vec_q(&[0, -1]))]).unwrap()
}

#[test]
fn so3_and_solvable_pass_jacobi() {
    assert!(LieAlgebra::so3().validate().is_ok());
    assert!(solvable2().validate().is_ok());
}

#[test]
fn jacobi_violation_is_reported() {
    // [e1,e2]=e3, [e1,e3]=e1: the cyclic sum at (1,2,3) is -e3
    let bad = LieAlgebra::new(
        3,
        [((0, 1), vec_q(&[0, 0, 1])), ((0, 2), vec_q(&[1, 0, 0]))],
    )
    .unwrap();
    let report = bad.validate();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].triple, (0, 1, 2));
    assert_eq!(report.violations[0].residual, vec_q(&[0, 0, -1]));
}

#[test]
fn listed_triple_actually_satisfies_jacobi() {
    // [e1,e2]=e1, [e2,e3]=e3, [e1,e3]=e2 expands to e2 - e2 + 0 = 0
    let l = LieAlgebra::new(
        3,
        [
            ((0, 1), vec_q(&[1, 0, 0])),
            ((1, 2), vec_q(&[0, 0, 1])),
            ((0, 2), vec_q(&[0, 1, 0])),
        ],
    )
    .unwrap();
    assert!(l.validate().is_ok());
}

#[test]
fn invalid_bracket_indices() {
    assert_eq!(
        LieAlgebra::new(2, [((1, 1), vec_q(&[0, 0]))]),
        Err(LieError::InvalidBracket(2, 2))
    );
    assert!(LieAlgebra::new(2, [((1, 0), vec_q(&[0, 0]))]).is_err());
}

#[test]
fn so3_differentials() {
    let l = LieAlgebra::so3();
    let d3 = ce_differential(&l, &alpha(3, &[2])).unwrap();
    assert_eq!(d3, alpha(3, &[0, 1]).scale(&q(-1)));
    let d1 = ce_differential(&l, &alpha(3, &[0])).unwrap();
    assert_eq!(d1, alpha(3, &[1, 2]).scale(&q(-1)));
    assert!(ce_differential(&l, &alpha(3, &[0, 1])).unwrap().is_zero());
    assert_eq!(
        ce_differential(&l, &alpha(3, &[0, 1, 2])),
        Err(LieError::DegreeOverflow { degree: 4, dim: 3 })
    );
}

#[test]
fn abelian_differential_vanishes() {
    let l = LieAlgebra::abelian(4);
    for idx in combinations(4, 2) {
        assert!(ce_differential(&l, &alpha(4, &idx)).unwrap().is_zero());
    }
}

#[test]
fn wedge_and_interior() {
    let a12 = alpha(3, &[0]).wedge(&alpha(3, &[1])).unwrap();
    assert_eq!(a12.component(&[0, 1]), q(1));
    assert_eq!(a12.component(&[1, 0]), q(-1));
    assert!(a12.interior(&vec_q(&[0, 0, 1])).unwrap().is_zero());
    assert_eq!(a12.interior(&vec_q(&[1, 0, 0])).unwrap(), alpha(3, &[1]));
    assert_eq!(
        a12.interior(&vec_q(&[0, 1, 0])).unwrap(),
        alpha(3, &[0]).scale(&q(-1))
    );
    assert!(a12.wedge(&alpha(3, &[0, 2])).is_err());
}

#[test]
fn coadjoint_reflection() {
    let m = Matrix::from_i64(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    assert!(LieAlgebra::so3().is_automorphism(&m));
    let a12 = alpha(3, &[0, 1]);
    assert_eq!(
        coadjoint_matrix_action(&m, &a12).unwrap(),
        a12.scale(&q(-1))
    );
    assert_eq!(
        coadjoint_matrix_action(&m, &alpha(3, &[1])).unwrap(),
        alpha(3, &[1])
    );
    assert_eq!(
        coadjoint_matrix_action(&Matrix::identity(3), &a12).unwrap(),
        a12
    );
    let singular = Matrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
    assert_eq!(
        coadjoint_matrix_action(&singular, &a12),
        Err(LieError::SingularMatrix)
    );
}

#[test]
fn relative_forms_of_sphere_and_projective_plane() {
    let l = LieAlgebra::so3();
    assert!(relative_basis(&l, &so2(), 1).unwrap().is_empty());
    assert_eq!(
        relative_basis(&l, &so2(), 2).unwrap(),
        vec![alpha(3, &[0, 1])]
    );
    assert!(relative_basis(&l, &o2(), 1).unwrap().is_empty());
    assert!(relative_basis(&l, &o2(), 2).unwrap().is_empty());
}

#[test]
fn relative_cohomology_examples() {
    let l = LieAlgebra::so3();
    let h = relative_cohomology(&l, &so2(), 2).unwrap();
    assert_eq!(h.dimension, 1);
    assert_eq!(h.representatives, vec![alpha(3, &[0, 1])]);
    assert_eq!(h.representatives[0].to_string(), "a1^a2");
    assert_eq!(h.representatives[0].pretty(), "\u{3b1}^1\u{2227}\u{3b1}^2");
    assert_eq!(relative_cohomology(&l, &o2(), 2).unwrap().dimension, 0);

    assert_eq!(absolute_cohomology(&solvable2(), 2).unwrap().dimension, 0);
    assert_eq!(
        absolute_cohomology(&LieAlgebra::abelian(2), 1)
            .unwrap()
            .dimension,
        2
    );
    // H^*(so(3)) is that of S^3
    let dims: Vec<usize> = (0..=3)
        .map(|r| absolute_cohomology(&l, r).unwrap().dimension)
        .collect();
    assert_eq!(dims, vec![1, 0, 0, 1]);
}

#[test]
fn invalid_subgroup_is_caught_by_closure_check() {
    let l = LieAlgebra::so3();
    // span{e1, e2} is not a subalgebra of so(3)
    let k = SubgroupSpec::connected(vec![vec_q(&[1, 0, 0]), vec_q(&[0, 1, 0])]);
    assert_eq!(k.validate(&l), Err(LieError::NotSubalgebra(1, 2)));
    let bad_component = SubgroupSpec::new(
        vec![vec_q(&[0, 0, 1])],
        vec![Matrix::from_i64(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]])],
    );
    assert_eq!(
        bad_component.validate(&l),
        Err(LieError::ComponentNotAutomorphism(1))
    );
    assert_eq!(o2().validate(&l), Ok(()));
}

#[test]
fn relative_complex_of_plain_subspace_is_still_closed() {
    // span{e1,e2} is not a subalgebra of so(3), yet Cartan's formula keeps
    // the basic subcomplex d-stable
    let l = LieAlgebra::so3();
    let k = SubgroupSpec::connected(vec![vec_q(&[1, 0, 0]), vec_q(&[0, 1, 0])]);
    let dims: Vec<usize> = (0..=3)
        .map(|r| relative_cohomology(&l, &k, r).unwrap().dimension)
        .collect();
    assert_eq!(dims, vec![1, 0, 0, 0]);
    assert_eq!(
        relative_cohomology(&l, &k, 0).unwrap().relative_basis_dims,
        vec![1, 0, 0, 0]
    );
}

#[test]
fn conjugation_relabels_and_preserves_cohomology() {
    let l = LieAlgebra::so3();
    // e3 -> e1, e1 -> e2, e2 -> e3
    let a = Matrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let k2 = conjugate_subgroup(&l, &so2(), &a).unwrap();
    assert_eq!(k2.basis, vec![vec_q(&[1, 0, 0])]);
    assert_eq!(relative_cohomology(&l, &k2, 2).unwrap().dimension, 1);
    assert_eq!(
        conjugate_subgroup(&l, &o2(), &Matrix::identity(3)).unwrap(),
        o2()
    );
    let not_auto = Matrix::diagonal(&vec_q(&[2, 1, 1]));
    assert_eq!(
        conjugate_subgroup(&l, &so2(), &not_auto),
        Err(LieError::NotAutomorphism)
    );
}

#[test]
fn multivector_pairing_and_pushforward() {
    let x = AltMultiVec::from_vectors(3, &[vec_q(&[1, 0, 0]), vec_q(&[0, 1, 0])]).unwrap();
    assert_eq!(x.pair(&alpha(3, &[0, 1])).unwrap(), q(1));
    let y = AltMultiVec::from_vectors(3, &[vec_q(&[0, 1, 0]), vec_q(&[1, 0, 0])]).unwrap();
    assert_eq!(y, x.scale(&q(-1)));
    let m = Matrix::from_i64(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    assert_eq!(x.push_forward(&m), x.scale(&q(-1)));
    // pairing is invariant under simultaneous transport
    let a = alpha(3, &[0, 1]).add(&alpha(3, &[1, 2]).scale(&q(3)));
    let rot = Matrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let moved = coadjoint_matrix_action(&rot, &a).unwrap();
    assert_eq!(
        x.push_forward(&rot).pair(&moved).unwrap(),
        x.pair(&a).unwrap()
    );
}

#[test]
fn change_basis_keeps_jacobi() {
    let p = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
    let l = LieAlgebra::so3().change_basis(&p).unwrap();
    assert!(l.validate().is_ok());
    assert_eq!(absolute_cohomology(&l, 3).unwrap().dimension, 1);
}
