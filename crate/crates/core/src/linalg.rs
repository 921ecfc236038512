//! Exact dense linear algebra over the rationals.
//!
//! Elimination is fraction-free: rows are scaled to primitive integer
//! vectors and combined by cross-multiplication, then divided by the row
//! content. Rationals only reappear when reading off kernels and inverses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; `cols` is needed for zero rows.
    ///
    /// Panics if a row has the wrong length.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
            cols,
        )
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .fold(Rational::zero(), |a, b| a + b)
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        Echelon::of_rows(self.row_vectors(), self.cols).pivots.len()
    }

    /// Basis of the right kernel, one vector per free column with that
    /// column's entry set to one.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        Echelon::of_rows(self.row_vectors(), self.cols).kernel()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                r
            })
            .collect();
        let ech = Echelon::of_rows(aug, 2 * n);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = ech
            .rows
            .iter()
            .take(n)
            .zip(&ech.pivots)
            .map(|(r, &p)| {
                let piv = &r[p];
                r[n..]
                    .iter()
                    .map(|x| Rational::new(x.clone(), piv.clone()))
                    .collect()
            })
            .collect();
        Some(Matrix::from_rows(rows, n))
    }

    /// Bareiss determinant.
    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        let mut scale = Rational::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let (row, s) = integer_row(self.row(i));
            scale *= s;
            m.push(row);
        }
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = Rational::from_integer(m[n - 1][n - 1].clone()) / scale;
        if sign {
            -det
        } else {
            det
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                let x = self.get(i, j);
                if x.is_integer() {
                    write!(f, "{}", x.numer())?;
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())?;
                }
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Scales a rational row to a primitive integer row; returns the row and
/// the factor it was multiplied by.
fn integer_row(row: &[Rational]) -> (Vec<BigInt>, Rational) {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    (ints, Rational::from_integer(lcm))
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced row echelon form with primitive integer rows.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub(crate) rows: Vec<Vec<BigInt>>,
    pub(crate) pivots: Vec<usize>,
    cols: usize,
}

impl Echelon {
    pub(crate) fn of_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r).0).collect();
        for r in m.iter_mut() {
            make_primitive(r);
        }
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..cols {
            if top == m.len() {
                break;
            }
            let Some(p) = (top..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(top, p);
            if m[top][c].is_negative() {
                for x in m[top].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = m[top].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == top || row[c].is_zero() {
                    continue;
                }
                let a = row[c].clone();
                let p = &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x * p - &a * y;
                }
                make_primitive(row);
            }
            pivots.push(c);
            top += 1;
        }
        m.truncate(pivots.len());
        Echelon {
            rows: m,
            pivots,
            cols,
        }
    }

    pub(crate) fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        let mut pi = 0;
        for f in 0..self.cols {
            if pi < self.pivots.len() && self.pivots[pi] == f {
                pi += 1;
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    v[c] = -Rational::new(row[f].clone(), row[c].clone());
                }
            }
            out.push(v);
        }
        out
    }
}

/// An incrementally built subspace in reduced echelon form, used to test
/// membership and to reduce vectors against a span.
#[derive(Clone, Debug)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(
        dim: usize,
        vectors: impl IntoIterator<Item = &'a Vec<Rational>>,
    ) -> Self {
        let mut s = RowSpace::new(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Removes the components along the pivot columns of the stored basis.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (p, row) in &self.rows {
            if out[*p].is_zero() {
                continue;
            }
            let k = out[*p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                *x -= &k * y;
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        let r: Vec<Rational> = r.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let k = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                *x -= &k * y;
            }
        }
        let pos = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(pos, (p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// Independent rank oracle: plain rational Gaussian elimination.
    fn naive_rank(m: &Matrix) -> usize {
        let mut a = m.row_vectors();
        let mut rank = 0;
        for c in 0..m.ncols() {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..a.len() {
                let k = &a[i][c] / &a[rank][c];
                let pr = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &k * y;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
        assert_eq!(k[0][2], q(1));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let s = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.determinant(), q(0));
    }

    #[test]
    fn row_space_reduction() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(!s.insert(&[q(2), q(2), q(0)]));
        assert!(s.contains(&[q(-3), q(-3), q(0)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
        assert_eq!(s.rank(), 1);
    }

    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..4, 1i64..3), r * c).prop_map(move |v| {
                Matrix::from_rows(
                    v.chunks(c)
                        .map(|row| {
                            row.iter()
                                .map(|&(n, d)| Rational::new(n.into(), d.into()))
                                .collect()
                        })
                        .collect(),
                    c,
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let rank = m.rank();
            prop_assert_eq!(rank, naive_rank(&m));
            let k = m.kernel();
            prop_assert_eq!(rank + k.len(), m.ncols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn determinant_matches_invertibility(m in small_matrix()) {
            if m.is_square() {
                let det = m.determinant();
                prop_assert_eq!(det.is_zero(), m.inverse().is_none());
                if let Some(inv) = m.inverse() {
                    prop_assert_eq!(m.mul(&inv), Matrix::identity(m.nrows()));
                    prop_assert_eq!(det * inv.determinant(), q(1));
                }
            }
        }
    }
}
