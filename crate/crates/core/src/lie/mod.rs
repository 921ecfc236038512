//! Finite-dimensional Lie algebras given by structure constants, their
//! alternating forms, the Chevalley–Eilenberg differential and relative
//! cohomology with respect to a (possibly disconnected) subgroup.

mod cohomology;
mod forms;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{Matrix, RowSpace};
use crate::scalar::Rational;

pub use cohomology::{
    absolute_cohomology, ce_differential, coadjoint_matrix_action, conjugate_subgroup,
    infinitesimal_action, relative_basis, relative_cohomology, CohomologyResult,
};
pub(crate) use forms::sort_with_sign as forms_sort_with_sign;
pub use forms::{combinations, AltForm, AltMultiVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("bracket [{0},{1}] is not a valid entry (indices must satisfy 1 <= i < j <= dim)")]
    InvalidBracket(usize, usize),
    #[error("vector of length {found} does not match algebra dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree {degree} exceeds algebra dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("interior product of a degree-0 form")]
    DegreeUnderflow,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix does not preserve the bracket")]
    NotAutomorphism,
    #[error("subalgebra basis vectors are linearly dependent")]
    DependentSubalgebraBasis,
    #[error("span is not closed under the bracket: [{0},{1}] leaves it")]
    NotSubalgebra(usize, usize),
    #[error("component representative {0} is not invertible")]
    SingularComponent(usize),
    #[error("component representative {0} is not a Lie algebra automorphism")]
    ComponentNotAutomorphism(usize),
    #[error("component representative {0} does not map the subalgebra to itself")]
    ComponentLeavesSubalgebra(usize),
    #[error("differential leaves the relative complex in degree {0}")]
    RelativeComplexNotClosed(usize),
}

/// A Lie algebra with basis e_1..e_p and dense structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    // c[(i*p + j)*p + k] is the e_k component of [e_i, e_j]
    structure: Vec<Rational>,
}

/// One failing triple of the Jacobi identity, 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub residual: Vec<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JacobiReport {
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LieAlgebra {
    /// Builds an algebra from brackets `[e_i, e_j]` with 0-based `i < j`.
    /// Pairs not listed bracket to zero.
    pub fn new<I>(dim: usize, brackets: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = ((usize, usize), Vec<Rational>)>,
    {
        let mut structure = vec![Rational::zero(); dim * dim * dim];
        for ((i, j), v) in brackets {
            if i >= j || j >= dim {
                return Err(LieError::InvalidBracket(i + 1, j + 1));
            }
            if v.len() != dim {
                return Err(LieError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            for (k, c) in v.into_iter().enumerate() {
                structure[(i * dim + j) * dim + k] = c.clone();
                structure[(j * dim + i) * dim + k] = -c;
            }
        }
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        Ok(LieAlgebra {
            dim,
            labels,
            structure,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(dim, []).expect("abelian algebra")
    }

    /// so(3) with [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
    pub fn so3() -> Self {
        let q = |n: i64| Rational::from_integer(n.into());
        LieAlgebra::new(
            3,
            [
                ((0, 1), vec![q(0), q(0), q(1)]),
                ((1, 2), vec![q(1), q(0), q(0)]),
                ((0, 2), vec![q(0), q(-1), q(0)]),
            ],
        )
        .expect("so(3)")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim)
            .map(|k| self.structure_constant(i, j, k).clone())
            .collect()
    }

    /// Nonzero brackets `[e_i, e_j]`, `i < j`, in index order.
    pub fn brackets(&self) -> Vec<((usize, usize), Vec<Rational>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|c| !c.is_zero()) {
                    out.push(((i, j), v));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Zero::is_zero)
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let p = self.dim;
        let mut out = vec![Rational::zero(); p];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                let ab = a * b;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = num_traits::One::one();
        v
    }

    /// The matrix of ad_v: column j is [v, e_j].
    pub fn ad_matrix(&self, v: &[Rational]) -> Matrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim)
            .map(|j| self.bracket(v, &self.basis_vector(j)))
            .collect();
        Matrix::from_rows(cols, self.dim).transpose()
    }

    pub fn validate(&self) -> JacobiReport {
        let p = self.dim;
        let mut report = JacobiReport::default();
        for i in 0..p {
            for j in i + 1..p {
                for k in j + 1..p {
                    let (ei, ej, ek) = (
                        self.basis_vector(i),
                        self.basis_vector(j),
                        self.basis_vector(k),
                    );
                    let a = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let b = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let c = self.bracket(&self.bracket(&ek, &ei), &ej);
                    let residual: Vec<Rational> = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    if residual.iter().any(|r| !r.is_zero()) {
                        report.violations.push(JacobiViolation {
                            triple: (i, j, k),
                            residual,
                        });
                    }
                }
            }
        }
        report
    }

    /// Whether `a` is invertible and satisfies `a[x,y] = [ax, ay]`.
    pub fn is_automorphism(&self, a: &Matrix) -> bool {
        if a.nrows() != self.dim || a.ncols() != self.dim || a.inverse().is_none() {
            return false;
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let lhs = a.mul_vec(&self.bracket_basis(i, j));
                let rhs = self.bracket(&a.column(i), &a.column(j));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// The same algebra written in the basis f_j = sum_i P_ij e_i.
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra, LieError> {
        let inv = p.inverse().ok_or(LieError::SingularMatrix)?;
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = self.bracket(&p.column(i), &p.column(j));
                brackets.push(((i, j), inv.mul_vec(&br)));
            }
        }
        LieAlgebra::new(n, brackets)
    }

    pub(crate) fn check_vector(&self, v: &[Rational]) -> Result<(), LieError> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(LieError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            })
        }
    }
}

/// Free-function form of [`LieAlgebra::validate`].
pub fn validate_lie_algebra(l: &LieAlgebra) -> JacobiReport {
    l.validate()
}

/// A subgroup K of G described by its Lie algebra and the adjoint matrices
/// of one representative per non-identity component.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub basis: Vec<Vec<Rational>>,
    pub components: Vec<Matrix>,
}

impl SubgroupSpec {
    pub fn new(basis: Vec<Vec<Rational>>, components: Vec<Matrix>) -> Self {
        SubgroupSpec { basis, components }
    }

    pub fn trivial() -> Self {
        SubgroupSpec::default()
    }

    pub fn connected(basis: Vec<Vec<Rational>>) -> Self {
        SubgroupSpec {
            basis,
            components: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty() && self.components.is_empty()
    }

    pub fn validate(&self, l: &LieAlgebra) -> Result<(), LieError> {
        for v in &self.basis {
            l.check_vector(v)?;
        }
        let span = RowSpace::spanned_by(l.dim(), &self.basis);
        if span.rank() != self.basis.len() {
            return Err(LieError::DependentSubalgebraBasis);
        }
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate().skip(i + 1) {
                if !span.contains(&l.bracket(u, v)) {
                    return Err(LieError::NotSubalgebra(i + 1, j + 1));
                }
            }
        }
        for (idx, m) in self.components.iter().enumerate() {
            if m.nrows() != l.dim() || m.ncols() != l.dim() {
                return Err(LieError::DimensionMismatch {
                    expected: l.dim(),
                    found: m.nrows(),
                });
            }
            if m.inverse().is_none() {
                return Err(LieError::SingularComponent(idx + 1));
            }
            if !l.is_automorphism(m) {
                return Err(LieError::ComponentNotAutomorphism(idx + 1));
            }
            if self.basis.iter().any(|v| !span.contains(&m.mul_vec(v))) {
                return Err(LieError::ComponentLeavesSubalgebra(idx + 1));
            }
        }
        Ok(())
    }
}

/// Renders a vector of g as a linear combination of basis labels.
pub fn format_lie_vector(v: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Rational::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        let body = if a == num_traits::One::one() {
            label.clone()
        } else if a.is_integer() {
            format!("{}*{}", a.numer(), label)
        } else {
            format!("{}/{}*{}", a.numer(), a.denom(), label)
        };
        match (out.is_empty(), neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {}", self.dim)?;
        for ((i, j), v) in self.brackets() {
            write!(
                f,
                "; [{},{}] = {}",
                self.labels[i],
                self.labels[j],
                format_lie_vector(&v, &self.labels)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
