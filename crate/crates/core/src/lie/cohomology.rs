use num_traits::Zero;

use super::forms::combinations;
use super::{AltForm, LieAlgebra, LieError, SubgroupSpec};
use crate::linalg::{Matrix, RowSpace};
use crate::scalar::Rational;

/// Chevalley–Eilenberg differential with trivial coefficients:
/// (dα)(x_0..x_r) = Σ_{i<j} (-1)^{i+j} α([x_i,x_j], x_0..x̂_i..x̂_j..x_r).
pub fn ce_differential(l: &LieAlgebra, alpha: &AltForm) -> Result<AltForm, LieError> {
    let p = l.dim();
    let r = alpha.degree();
    if r >= p {
        return Err(LieError::DegreeOverflow {
            degree: r + 1,
            dim: p,
        });
    }
    let mut terms = Vec::new();
    for idx in combinations(p, r + 1) {
        let mut acc = Rational::zero();
        for a in 0..=r {
            for b in a + 1..=r {
                let mut rest: Vec<usize> = idx.clone();
                rest.remove(b);
                rest.remove(a);
                let mut slot = Vec::with_capacity(r);
                slot.push(0);
                slot.extend_from_slice(&rest);
                let mut val = Rational::zero();
                for k in 0..p {
                    let c = l.structure_constant(idx[a], idx[b], k);
                    if c.is_zero() {
                        continue;
                    }
                    slot[0] = k;
                    val += c * alpha.eval_basis(&slot);
                }
                if (a + b) % 2 == 1 {
                    acc -= val;
                } else {
                    acc += val;
                }
            }
        }
        terms.push((idx, acc));
    }
    AltForm::from_terms(p, r + 1, terms)
}

/// Infinitesimal coadjoint action (v·α)(x_1..x_r) = -Σ_i α(x_1..[v,x_i]..x_r).
pub fn infinitesimal_action(
    l: &LieAlgebra,
    v: &[Rational],
    alpha: &AltForm,
) -> Result<AltForm, LieError> {
    l.check_vector(v)?;
    let p = l.dim();
    let r = alpha.degree();
    let ad: Vec<Vec<Rational>> = (0..p).map(|j| l.bracket(v, &l.basis_vector(j))).collect();
    let mut terms = Vec::new();
    for idx in combinations(p, r) {
        let mut acc = Rational::zero();
        for pos in 0..r {
            let image = &ad[idx[pos]];
            let mut slot = idx.clone();
            for (k, c) in image.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                slot[pos] = k;
                acc -= c * alpha.eval_basis(&slot);
            }
        }
        terms.push((idx, acc));
    }
    AltForm::from_terms(p, r, terms)
}

/// (M·α)(v_1..v_r) = α(M⁻¹v_1, ..., M⁻¹v_r).
pub fn coadjoint_matrix_action(m: &Matrix, alpha: &AltForm) -> Result<AltForm, LieError> {
    if m.nrows() != alpha.dim() || m.ncols() != alpha.dim() {
        return Err(LieError::DimensionMismatch {
            expected: alpha.dim(),
            found: m.nrows(),
        });
    }
    let inv = m.inverse().ok_or(LieError::SingularMatrix)?;
    Ok(alpha.pull_by(&inv))
}

/// Stacks the linear conditions cutting out A^r(g,K) as rows of a matrix
/// acting on coordinates over `combinations(p, r)`.
fn relative_constraints(l: &LieAlgebra, k: &SubgroupSpec, r: usize) -> Result<Matrix, LieError> {
    let p = l.dim();
    let basis_forms: Vec<AltForm> = combinations(p, r)
        .into_iter()
        .map(|idx| AltForm::from_terms(p, r, [(idx, Rational::from_integer(1.into()))]))
        .collect::<Result<_, _>>()?;
    let inverses: Vec<Matrix> = k
        .components
        .iter()
        .map(|m| m.inverse().ok_or(LieError::SingularMatrix))
        .collect::<Result<_, _>>()?;
    // one column per basis form, concatenated images of every condition
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(basis_forms.len());
    for b in &basis_forms {
        let mut col = Vec::new();
        for v in &k.basis {
            if r > 0 {
                col.extend(b.interior(v)?.to_vector());
            }
            col.extend(infinitesimal_action(l, v, b)?.to_vector());
        }
        for n in &inverses {
            col.extend(b.pull_by(n).sub(b).to_vector());
        }
        columns.push(col);
    }
    let rows = columns.first().map_or(0, Vec::len);
    Ok(Matrix::from_fn(rows, basis_forms.len(), |i, j| {
        columns[j][i].clone()
    }))
}

/// A basis of A^r(g,K): forms annihilated by interior products with k,
/// invariant under k infinitesimally and fixed by every component matrix.
pub fn relative_basis(
    l: &LieAlgebra,
    k: &SubgroupSpec,
    r: usize,
) -> Result<Vec<AltForm>, LieError> {
    let p = l.dim();
    if r > p {
        return Err(LieError::DegreeOverflow { degree: r, dim: p });
    }
    let constraints = relative_constraints(l, k, r)?;
    let kernel = if constraints.nrows() == 0 {
        (0..constraints.ncols())
            .map(|j| {
                let mut v = vec![Rational::zero(); constraints.ncols()];
                v[j] = Rational::from_integer(1.into());
                v
            })
            .collect()
    } else {
        constraints.kernel()
    };
    Ok(kernel
        .iter()
        .map(|v| AltForm::from_vector(p, r, v))
        .collect())
}

fn is_relative(l: &LieAlgebra, k: &SubgroupSpec, alpha: &AltForm) -> Result<bool, LieError> {
    let c = relative_constraints(l, k, alpha.degree())?;
    if c.nrows() == 0 {
        return Ok(true);
    }
    Ok(c.mul_vec(&alpha.to_vector()).iter().all(Zero::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub degree: usize,
    pub dimension: usize,
    /// Cocycles reduced against the coboundaries; their classes form a basis.
    pub representatives: Vec<AltForm>,
    /// dim A^r(g,K) for r = 0..=p.
    pub relative_basis_dims: Vec<usize>,
    pub cocycle_dim: usize,
    pub coboundary_rank: usize,
}

impl CohomologyResult {
    pub fn relative_dim(&self) -> usize {
        self.relative_basis_dims[self.degree]
    }
}

/// H^r(g,K) computed from the relative subcomplex.
pub fn relative_cohomology(
    l: &LieAlgebra,
    k: &SubgroupSpec,
    r: usize,
) -> Result<CohomologyResult, LieError> {
    let p = l.dim();
    if r > p {
        return Err(LieError::DegreeOverflow { degree: r, dim: p });
    }
    let bases: Vec<Vec<AltForm>> = (0..=p)
        .map(|s| relative_basis(l, k, s))
        .collect::<Result<_, _>>()?;
    let here = &bases[r];

    let cocycles: Vec<AltForm> = if r == p {
        here.clone()
    } else {
        let images: Vec<AltForm> = here
            .iter()
            .map(|b| ce_differential(l, b))
            .collect::<Result<_, _>>()?;
        for img in &images {
            if !is_relative(l, k, img)? {
                return Err(LieError::RelativeComplexNotClosed(r));
            }
        }
        let n = combinations(p, r + 1).len();
        let cols: Vec<Vec<Rational>> = images.iter().map(AltForm::to_vector).collect();
        let d = Matrix::from_fn(n, here.len(), |i, j| cols[j][i].clone());
        let coeffs = if here.is_empty() {
            Vec::new()
        } else if n == 0 || d.is_zero() {
            (0..here.len())
                .map(|j| {
                    let mut v = vec![Rational::zero(); here.len()];
                    v[j] = Rational::from_integer(1.into());
                    v
                })
                .collect()
        } else {
            d.kernel()
        };
        coeffs
            .iter()
            .map(|c| {
                here.iter()
                    .zip(c)
                    .fold(AltForm::zero(p, r), |acc, (b, x)| acc.add(&b.scale(x)))
            })
            .collect()
    };

    let coboundaries: Vec<Vec<Rational>> = if r == 0 {
        Vec::new()
    } else {
        bases[r - 1]
            .iter()
            .map(|b| {
                let f = ce_differential(l, b)?;
                if !is_relative(l, k, &f)? {
                    return Err(LieError::RelativeComplexNotClosed(r - 1));
                }
                Ok(f.to_vector())
            })
            .collect::<Result<_, _>>()?
    };
    let dim_r = combinations(p, r).len();
    let image = RowSpace::spanned_by(dim_r, &coboundaries);
    let mut span = image.clone();
    let mut representatives = Vec::new();
    for z in &cocycles {
        let v = z.to_vector();
        if span.insert(&v) {
            representatives.push(AltForm::from_vector(p, r, &image.reduce(&v)));
        }
    }
    Ok(CohomologyResult {
        degree: r,
        dimension: cocycles.len() - image.rank(),
        representatives,
        relative_basis_dims: bases.iter().map(Vec::len).collect(),
        cocycle_dim: cocycles.len(),
        coboundary_rank: image.rank(),
    })
}

/// H^r(g) with trivial coefficients.
pub fn absolute_cohomology(l: &LieAlgebra, r: usize) -> Result<CohomologyResult, LieError> {
    relative_cohomology(l, &SubgroupSpec::trivial(), r)
}

/// Transports K along an automorphism A: k ↦ A·k, M ↦ A M A⁻¹.
pub fn conjugate_subgroup(
    l: &LieAlgebra,
    k: &SubgroupSpec,
    a: &Matrix,
) -> Result<SubgroupSpec, LieError> {
    let inv = a.inverse().ok_or(LieError::SingularMatrix)?;
    if !l.is_automorphism(a) {
        return Err(LieError::NotAutomorphism);
    }
    Ok(SubgroupSpec {
        basis: k.basis.iter().map(|v| a.mul_vec(v)).collect(),
        components: k.components.iter().map(|m| a.mul(m).mul(&inv)).collect(),
    })
}
