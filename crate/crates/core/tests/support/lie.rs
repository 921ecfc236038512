//! Random Lie algebras, subgroups and a dense-matrix cohomology oracle.

use liecochain::lie::{ce_differential, combinations, relative_basis, relative_cohomology};
use liecochain::{AltForm, LieAlgebra, Matrix, Rational, SubgroupSpec};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

// ---- random Lie algebras ----

/// R ⋉_M R^k: [e1, e_{i+1}] = Σ_j M[j][i] e_{j+1}, other brackets zero.
/// Jacobi holds for every M.
pub fn semidirect(m: &[Vec<i64>]) -> LieAlgebra {
    let k = m.len();
    let p = k + 1;
    let brackets = (0..k).map(|i| {
        let mut v = vec![q(0); p];
        for j in 0..k {
            v[j + 1] = q(m[j][i]);
        }
        ((0, i + 1), v)
    });
    LieAlgebra::new(p, brackets).unwrap()
}

pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::new(3, [((0, 1), vec![q(0), q(0), q(1)])]).unwrap()
}

pub fn sl2() -> LieAlgebra {
    // h, e, f with [h,e]=2e, [h,f]=-2f, [e,f]=h
    LieAlgebra::new(
        3,
        [
            ((0, 1), vec![q(0), q(2), q(0)]),
            ((0, 2), vec![q(0), q(0), q(-2)]),
            ((1, 2), vec![q(1), q(0), q(0)]),
        ],
    )
    .unwrap()
}

/// Direct sum with an abelian algebra of dimension `extra`.
pub fn plus_abelian(l: &LieAlgebra, extra: usize) -> LieAlgebra {
    let p = l.dim() + extra;
    let brackets = l.brackets().into_iter().map(|((i, j), v)| {
        let mut w = v.clone();
        w.resize(p, q(0));
        ((i, j), w)
    });
    LieAlgebra::new(p, brackets).unwrap()
}

pub fn invertible(p: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2i64..=2, p * p)
        .prop_map(move |v| {
            Matrix::from_fn(p, p, |i, j| {
                q(v[i * p + j]) + if i == j { q(3) } else { q(0) }
            })
        })
        .prop_filter("invertible", |m| !m.determinant().is_zero())
}

pub fn base_algebra() -> impl Strategy<Value = LieAlgebra> {
    prop_oneof![
        (1usize..=5).prop_map(LieAlgebra::abelian),
        Just(LieAlgebra::so3()),
        Just(sl2()),
        Just(heisenberg()),
        (0usize..=2).prop_map(|e| plus_abelian(&LieAlgebra::so3(), e)),
        (0usize..=2).prop_map(|e| plus_abelian(&heisenberg(), e)),
        (1usize..=4).prop_flat_map(|k| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, k), k)
                .prop_map(|m| semidirect(&m))
        }),
    ]
}

/// A known algebra in a random basis.
pub fn algebra() -> impl Strategy<Value = LieAlgebra> {
    base_algebra().prop_flat_map(|l| {
        let p = l.dim();
        invertible(p).prop_map(move |m| l.change_basis(&m).unwrap())
    })
}

pub fn form(p: usize, r: usize) -> impl Strategy<Value = AltForm> {
    let n = combinations(p, r).len();
    prop::collection::vec(-4i64..=4, n)
        .prop_map(move |v| AltForm::from_vector(p, r, &v.into_iter().map(q).collect::<Vec<_>>()))
}

pub fn algebra_with_form() -> impl Strategy<Value = (LieAlgebra, AltForm, Vec<Rational>)> {
    algebra().prop_flat_map(|l| {
        let p = l.dim();
        (0..=p).prop_flat_map(move |r| {
            let l = l.clone();
            (form(p, r), prop::collection::vec(-3i64..=3, p))
                .prop_map(move |(a, v)| (l.clone(), a, v.into_iter().map(q).collect()))
        })
    })
}

pub fn d(l: &LieAlgebra, a: &AltForm) -> AltForm {
    if a.degree() == l.dim() {
        AltForm::zero(l.dim(), a.degree() + 1)
    } else {
        ce_differential(l, a).unwrap()
    }
}

pub fn iota(v: &[Rational], a: &AltForm) -> Option<AltForm> {
    if a.degree() == 0 {
        None
    } else {
        Some(a.interior(v).unwrap())
    }
}

// ---- dense oracle for absolute cohomology ----

/// Sign of the permutation sorting `idx`, or None on repeats.
pub fn sort_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] == idx[j + 1] {
                return None;
            }
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Matrix of d: A^r → A^{r+1} in the monomial bases, built directly from
/// the defining sum over pairs.
pub fn oracle_d(l: &LieAlgebra, r: usize) -> Vec<Vec<Rational>> {
    let p = l.dim();
    let src = combinations(p, r);
    let dst = combinations(p, r + 1);
    let mut m = vec![vec![q(0); src.len()]; dst.len()];
    for (row, jj) in dst.iter().enumerate() {
        for a in 0..jj.len() {
            for b in a + 1..jj.len() {
                let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = jj
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != a && t != b)
                    .map(|(_, &x)| x)
                    .collect();
                for k in 0..p {
                    let c = l.structure_constant(jj[a], jj[b], k);
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = vec![k];
                    idx.extend(&rest);
                    if let Some(s) = sort_sign(&mut idx) {
                        let col = src.iter().position(|x| *x == idx).unwrap();
                        m[row][col] += c * q(sign * s);
                    }
                }
            }
        }
    }
    m
}

pub fn oracle_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = Rational::one() / m[rank][c].clone();
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone() * &inv;
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn oracle_betti(l: &LieAlgebra, r: usize) -> usize {
    let p = l.dim();
    let n = combinations(p, r).len();
    let out = if r < p {
        oracle_rank(oracle_d(l, r))
    } else {
        0
    };
    let inc = if r > 0 {
        oracle_rank(oracle_d(l, r - 1))
    } else {
        0
    };
    n - out - inc
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---- conjugation invariance ----

/// Independent automorphism test: A[x,y] = [Ax,Ay] on basis pairs.
pub fn preserves_bracket(l: &LieAlgebra, a: &Matrix) -> bool {
    let p = l.dim();
    (0..p).all(|i| {
        (0..p).all(|j| {
            let lhs = a.mul_vec(&l.bracket_basis(i, j));
            let rhs = l.bracket(&a.column(i), &a.column(j));
            lhs == rhs
        })
    })
}

/// Cayley transform (I - S)^{-1}(I + S) of a skew matrix: a rotation.
pub fn cayley(s: [Rational; 3]) -> Matrix {
    let [a, b, c] = s;
    let z = q(0);
    let skew = Matrix::from_rows(
        vec![
            vec![z.clone(), -c.clone(), b.clone()],
            vec![c.clone(), z.clone(), -a.clone()],
            vec![-b, a, z],
        ],
        3,
    );
    let i = Matrix::identity(3);
    let plus = Matrix::from_fn(3, 3, |r, k| i.get(r, k) + skew.get(r, k));
    let minus = i.sub(&skew);
    minus.inverse().unwrap().mul(&plus)
}

pub fn relative_dims(l: &LieAlgebra, k: &SubgroupSpec) -> (Vec<usize>, Vec<usize>) {
    let a: Vec<usize> = (0..=l.dim())
        .map(|r| relative_basis(l, k, r).unwrap().len())
        .collect();
    let h: Vec<usize> = (0..=l.dim())
        .map(|r| relative_cohomology(l, k, r).unwrap().dimension)
        .collect();
    (a, h)
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn so3_subgroups() -> Vec<SubgroupSpec> {
    let e = |i: usize| LieAlgebra::so3().basis_vector(i);
    vec![
        SubgroupSpec::trivial(),
        SubgroupSpec::connected(vec![e(2)]),
        SubgroupSpec::new(vec![e(2)], vec![Matrix::diagonal(&[q(-1), q(1), q(-1)])]),
        SubgroupSpec::new(vec![], vec![Matrix::diagonal(&[q(-1), q(-1), q(1)])]),
    ]
}

pub fn solvable() -> LieAlgebra {
    LieAlgebra::new(2, [((0, 1), vec![q(0), q(1)])]).unwrap()
}

pub fn solvable_subgroups() -> Vec<SubgroupSpec> {
    vec![
        SubgroupSpec::trivial(),
        SubgroupSpec::connected(vec![vec![q(0), q(1)]]),
        SubgroupSpec::connected(vec![vec![q(1), q(0)]]),
        SubgroupSpec::new(
            vec![vec![q(1), q(0)]],
            vec![Matrix::diagonal(&[q(1), q(-1)])],
        ),
    ]
}
