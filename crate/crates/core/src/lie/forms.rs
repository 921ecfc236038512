use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};

use super::LieError;
use crate::linalg::Matrix;
use crate::scalar::Rational;

/// Increasing index tuples of length `r` from `0..p`, in lexicographic order.
pub fn combinations(p: usize, r: usize) -> Vec<Vec<usize>> {
    (0..p).combinations(r).collect()
}

/// Sorts `idx` and returns the permutation sign, or `None` on a repeat.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

/// Coefficients over increasing index tuples with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Alternating {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

impl Alternating {
    fn zero(dim: usize, degree: usize) -> Self {
        Alternating {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    fn add_at(&mut self, mut idx: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let Some(odd) = sort_with_sign(&mut idx) else {
            return;
        };
        let c = if odd { -c } else { c };
        let entry = self.coeffs.entry(idx).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    fn get(&self, idx: &[usize]) -> Rational {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => Rational::zero(),
            Some(odd) => {
                let c = self
                    .coeffs
                    .get(&sorted)
                    .cloned()
                    .unwrap_or_else(Rational::zero);
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    fn add(&self, other: &Alternating) -> Alternating {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_at(k.clone(), v.clone());
        }
        out
    }

    fn scale(&self, k: &Rational) -> Alternating {
        let mut out = Alternating::zero(self.dim, self.degree);
        if !k.is_zero() {
            out.coeffs = self
                .coeffs
                .iter()
                .map(|(i, c)| (i.clone(), c * k))
                .collect();
        }
        out
    }

    fn wedge(&self, other: &Alternating) -> Result<Alternating, LieError> {
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(LieError::DegreeOverflow {
                degree,
                dim: self.dim,
            });
        }
        let mut out = Alternating::zero(self.dim, degree);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_at(idx, a * b);
            }
        }
        Ok(out)
    }

    fn to_vector(&self) -> Vec<Rational> {
        combinations(self.dim, self.degree)
            .iter()
            .map(|idx| self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    fn from_vector(dim: usize, degree: usize, v: &[Rational]) -> Alternating {
        let mut out = Alternating::zero(dim, degree);
        for (idx, c) in combinations(dim, degree).into_iter().zip(v) {
            if !c.is_zero() {
                out.coeffs.insert(idx, c.clone());
            }
        }
        out
    }

    /// Transforms each slot by `m`: coefficient on I becomes
    /// sum_J c_J det(m[rows, cols]) with the given row/column roles.
    fn transform(&self, m: &Matrix, rows_are_source: bool) -> Alternating {
        let mut out = Alternating::zero(self.dim, self.degree);
        for target in combinations(self.dim, self.degree) {
            let mut acc = Rational::zero();
            for (src, c) in &self.coeffs {
                let minor = Matrix::from_fn(self.degree, self.degree, |a, b| {
                    if rows_are_source {
                        m.get(src[a], target[b]).clone()
                    } else {
                        m.get(target[a], src[b]).clone()
                    }
                });
                acc += c * minor.determinant();
            }
            if !acc.is_zero() {
                out.coeffs.insert(target, acc);
            }
        }
        out
    }

    fn fmt_with(
        &self,
        f: &mut fmt::Formatter<'_>,
        prefix: &str,
        wedge: &str,
        sep: &str,
    ) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        if self.degree == 0 {
            let c = &self.coeffs[&Vec::new()];
            return f.write_str(&rational(c));
        }
        for (n, (idx, c)) in self.coeffs.iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if !a.is_one() {
                write!(f, "{}*", rational(&a))?;
            }
            let body = idx
                .iter()
                .map(|i| format!("{prefix}{sep}{}", i + 1))
                .join(wedge);
            f.write_str(&body)?;
        }
        Ok(())
    }
}

fn rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// An alternating r-form on g with rational coefficients in the dual basis.
///
/// The coefficient on an increasing tuple I is the value on (e_I1, ..., e_Ir),
/// so alpha^1 ^ alpha^2 evaluates to 1 on (e_1, e_2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AltForm(Alternating);

/// An alternating q-vector in the exterior power of g.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AltMultiVec(Alternating);

macro_rules! common_alt {
    ($ty:ident) => {
        impl $ty {
            pub fn zero(dim: usize, degree: usize) -> Self {
                $ty(Alternating::zero(dim, degree))
            }

            pub fn scalar(dim: usize, c: Rational) -> Self {
                let mut a = Alternating::zero(dim, 0);
                a.add_at(Vec::new(), c);
                $ty(a)
            }

            /// Builds from (index tuple, coefficient) pairs; tuples may be
            /// unsorted and are brought to increasing order with sign.
            pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self, LieError>
            where
                I: IntoIterator<Item = (Vec<usize>, Rational)>,
            {
                if degree > dim {
                    return Err(LieError::DegreeOverflow { degree, dim });
                }
                let mut a = Alternating::zero(dim, degree);
                for (idx, c) in terms {
                    if idx.len() != degree || idx.iter().any(|&i| i >= dim) {
                        return Err(LieError::DimensionMismatch {
                            expected: degree,
                            found: idx.len(),
                        });
                    }
                    a.add_at(idx, c);
                }
                Ok($ty(a))
            }

            pub fn from_vector(dim: usize, degree: usize, v: &[Rational]) -> Self {
                $ty(Alternating::from_vector(dim, degree, v))
            }

            /// Coordinates over [`combinations`]`(dim, degree)`.
            pub fn to_vector(&self) -> Vec<Rational> {
                self.0.to_vector()
            }

            pub fn dim(&self) -> usize {
                self.0.dim
            }

            pub fn degree(&self) -> usize {
                self.0.degree
            }

            pub fn is_zero(&self) -> bool {
                self.0.coeffs.is_empty()
            }

            pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
                self.0.coeffs.iter()
            }

            /// Value on an arbitrary (possibly unsorted) index tuple.
            pub fn component(&self, idx: &[usize]) -> Rational {
                self.0.get(idx)
            }

            pub fn add(&self, other: &$ty) -> $ty {
                $ty(self.0.add(&other.0))
            }

            pub fn sub(&self, other: &$ty) -> $ty {
                $ty(self.0.add(&other.0.scale(&-Rational::one())))
            }

            pub fn scale(&self, k: &Rational) -> $ty {
                $ty(self.0.scale(k))
            }

            pub fn wedge(&self, other: &$ty) -> Result<$ty, LieError> {
                Ok($ty(self.0.wedge(&other.0)?))
            }
        }
    };
}

common_alt!(AltForm);
common_alt!(AltMultiVec);

impl AltForm {
    /// The dual basis covector alpha^{i+1}.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut a = Alternating::zero(dim, 1);
        a.add_at(vec![i], Rational::one());
        AltForm(a)
    }

    /// Value on basis vectors e_{idx[0]}, ..., e_{idx[r-1]}.
    pub fn eval_basis(&self, idx: &[usize]) -> Rational {
        self.0.get(idx)
    }

    /// Contraction in the first slot: (i_v a)(x_2, ...) = a(v, x_2, ...).
    pub fn interior(&self, v: &[Rational]) -> Result<AltForm, LieError> {
        if v.len() != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        if self.degree() == 0 {
            return Err(LieError::DegreeUnderflow);
        }
        let mut out = Alternating::zero(self.dim(), self.degree() - 1);
        for (idx, c) in &self.0.coeffs {
            for (pos, &i) in idx.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let k = &v[i] * c;
                out.add_at(rest, if pos % 2 == 1 { -k } else { k });
            }
        }
        Ok(AltForm(out))
    }

    /// (M . a)(v_1, ..., v_r) = a(N v_1, ..., N v_r) for N = M^{-1}.
    pub(crate) fn pull_by(&self, n: &Matrix) -> AltForm {
        AltForm(self.0.transform(n, true))
    }

    /// Renders as `α^1∧α^2`.
    pub fn pretty(&self) -> String {
        struct P<'a>(&'a Alternating);
        impl fmt::Display for P<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, "\u{3b1}", "\u{2227}", "^")
            }
        }
        P(&self.0).to_string()
    }
}

/// Renders as `a1^a2`.
impl fmt::Display for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "a", "^", "")
    }
}

impl AltMultiVec {
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut a = Alternating::zero(dim, 1);
        a.add_at(vec![i], Rational::one());
        AltMultiVec(a)
    }

    /// v_1 ^ ... ^ v_q for vectors given in the basis of g.
    pub fn from_vectors(dim: usize, vectors: &[Vec<Rational>]) -> Result<Self, LieError> {
        let mut acc = AltMultiVec::scalar(dim, Rational::one());
        for v in vectors {
            let one = AltMultiVec::from_vector(dim, 1, v);
            acc = acc.wedge(&one)?;
        }
        Ok(acc)
    }

    /// Full pairing with a form of the same degree.
    pub fn pair(&self, form: &AltForm) -> Result<Rational, LieError> {
        if form.degree() != self.degree() || form.dim() != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.degree(),
                found: form.degree(),
            });
        }
        Ok(self
            .0
            .coeffs
            .iter()
            .map(|(idx, c)| c * form.eval_basis(idx))
            .fold(Rational::zero(), |a, b| a + b))
    }

    /// Pushes each vector slot forward by `m`.
    pub fn push_forward(&self, m: &Matrix) -> AltMultiVec {
        AltMultiVec(self.0.transform(m, false))
    }
}

impl fmt::Display for AltMultiVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "e", "^", "")
    }
}
