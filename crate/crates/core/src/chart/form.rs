use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use super::{fmt_linear, Chart, ChartError, MultiVectorField, VectorField};
use crate::lie::combinations;
use crate::scalar::ScalarExpr;

pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    crate::lie::forms_sort_with_sign(idx)
}

/// A differential k-form Σ f_I dx^I over increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ScalarExpr>,
}

impl DiffForm {
    pub fn zero(chart: Arc<Chart>, degree: usize) -> Result<Self, ChartError> {
        if degree > chart.dim() {
            return Err(ChartError::DegreeOverflow {
                degree,
                dim: chart.dim(),
            });
        }
        Ok(DiffForm {
            chart,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn function(chart: Arc<Chart>, f: ScalarExpr) -> Self {
        let mut out = DiffForm::zero(chart, 0).expect("degree 0");
        out.add_at(Vec::new(), f);
        out
    }

    /// dx^{i_1} ∧ ... ∧ dx^{i_k} for an arbitrary index list.
    pub fn basis(chart: Arc<Chart>, idx: &[usize]) -> Result<Self, ChartError> {
        DiffForm::from_terms(chart, idx.len(), [(idx.to_vec(), ScalarExpr::one())])
    }

    pub fn from_terms<I>(chart: Arc<Chart>, degree: usize, terms: I) -> Result<Self, ChartError>
    where
        I: IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    {
        let mut out = DiffForm::zero(chart, degree)?;
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(ChartError::ComponentCount {
                    expected: degree,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= out.chart.dim()) {
                return Err(ChartError::InvalidIndex(bad));
            }
            out.add_at(idx, c);
        }
        Ok(out)
    }

    pub(crate) fn add_at(&mut self, mut idx: Vec<usize>, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let Some(odd) = sort_with_sign(&mut idx) else {
            return;
        };
        let c = if odd { c.neg() } else { c };
        match self.coeffs.get_mut(&idx) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.coeffs.remove(&idx);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarExpr)> {
        self.coeffs.iter()
    }

    /// Coefficient on an arbitrary index tuple, with the alternating sign.
    pub fn coefficient(&self, idx: &[usize]) -> ScalarExpr {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => ScalarExpr::zero(),
            Some(odd) => {
                let c = self.coeffs.get(&sorted).cloned().unwrap_or_default();
                if odd {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    /// The function of a 0-form.
    pub fn as_function(&self) -> Option<ScalarExpr> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    fn check_same(&self, other: &DiffForm) -> Result<(), ChartError> {
        Chart::same(&self.chart, &other.chart)?;
        if self.degree != other.degree {
            return Err(ChartError::ComponentCount {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm, ChartError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_at(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm, ChartError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, f: &ScalarExpr) -> DiffForm {
        self.map(|c| c.mul(f))
    }

    fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> DiffForm {
        let mut out = DiffForm {
            chart: self.chart.clone(),
            degree: self.degree,
            coeffs: BTreeMap::new(),
        };
        for (idx, c) in &self.coeffs {
            out.add_at(idx.clone(), f(c));
        }
        out
    }

    /// d(Σ f_I dx^I) = Σ ∂_j f_I dx^j ∧ dx^I.
    pub fn exterior_derivative(&self) -> Result<DiffForm, ChartError> {
        let n = self.chart.dim();
        let mut out = DiffForm::zero(self.chart.clone(), self.degree + 1)?;
        for (idx, f) in &self.coeffs {
            for j in 0..n {
                if idx.contains(&j) {
                    continue;
                }
                let df = self.chart.d(f, j);
                let mut t = Vec::with_capacity(idx.len() + 1);
                t.push(j);
                t.extend_from_slice(idx);
                out.add_at(t, df);
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm, ChartError> {
        Chart::same(&self.chart, &other.chart)?;
        let mut out = DiffForm::zero(self.chart.clone(), self.degree + other.degree)?;
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let mut t = i.clone();
                t.extend_from_slice(j);
                out.add_at(t, a.mul(b));
            }
        }
        Ok(out)
    }

    /// ι_X ω, contracting the first slot.
    pub fn interior(&self, x: &VectorField) -> Result<DiffForm, ChartError> {
        Chart::same(&self.chart, x.chart())?;
        if self.degree == 0 {
            return Err(ChartError::DegreeUnderflow);
        }
        let mut out = DiffForm::zero(self.chart.clone(), self.degree - 1)?;
        for (idx, f) in &self.coeffs {
            for (pos, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let c = xi.mul(f);
                out.add_at(rest, if pos % 2 == 1 { c.neg() } else { c });
            }
        }
        Ok(out)
    }

    /// ι_χ ω with χ filling the leading slots: (ι_χ ω)(Y…) = ω(χ, Y…).
    pub fn contract(&self, chi: &MultiVectorField) -> Result<DiffForm, ChartError> {
        Chart::same(&self.chart, chi.chart())?;
        let q = chi.degree();
        if self.degree < q {
            return Err(ChartError::DegreeUnderflow);
        }
        let mut out = DiffForm::zero(self.chart.clone(), self.degree - q)?;
        for (idx, f) in &self.coeffs {
            for positions in (0..idx.len()).combinations(q) {
                let j: Vec<usize> = positions.iter().map(|&p| idx[p]).collect();
                let c = chi.coefficient(&j);
                if c.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = (0..idx.len())
                    .filter(|p| !positions.contains(p))
                    .map(|p| idx[p])
                    .collect();
                let mut perm = j.clone();
                perm.extend_from_slice(&rest);
                let odd = sort_with_sign(&mut perm).expect("distinct indices");
                let v = c.mul(f);
                out.add_at(rest, if odd { v.neg() } else { v });
            }
        }
        Ok(out)
    }

    /// L_X ω = ι_X dω + d ι_X ω; X(f) on functions.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<DiffForm, ChartError> {
        Chart::same(&self.chart, x.chart())?;
        let n = self.chart.dim();
        let first = if self.degree < n {
            self.exterior_derivative()?.interior(x)?
        } else {
            DiffForm::zero(self.chart.clone(), self.degree)?
        };
        if self.degree == 0 {
            return Ok(first);
        }
        let second = self.interior(x)?.exterior_derivative()?;
        first.add(&second)
    }

    /// The exterior derivative, with top-degree forms mapped to `None`
    /// (their derivative vanishes identically).
    pub fn exterior_derivative_or_top(&self) -> Result<Option<DiffForm>, ChartError> {
        if self.degree == self.chart.dim() {
            Ok(None)
        } else {
            self.exterior_derivative().map(Some)
        }
    }

    /// The first nonzero coefficient in index order.
    pub fn first_nonzero(&self) -> Option<(&Vec<usize>, &ScalarExpr)> {
        self.coeffs.iter().next()
    }

    fn terms(&self, pretty: bool) -> Vec<(&ScalarExpr, String)> {
        self.coeffs
            .iter()
            .map(|(idx, c)| (c, basis_name(&self.chart, idx, pretty)))
            .collect()
    }

    /// Paper notation, e.g. `a(x) dx∧dy`.
    pub fn pretty(&self) -> String {
        if self.degree == 0 {
            return self.coefficient(&[]).pretty();
        }
        fmt_linear(self.terms(true), true)
    }

    /// All index tuples of this degree, for dense iteration.
    pub fn index_tuples(&self) -> Vec<Vec<usize>> {
        combinations(self.chart.dim(), self.degree)
    }
}

fn basis_name(chart: &Chart, idx: &[usize], pretty: bool) -> String {
    if pretty {
        idx.iter()
            .map(|&i| format!("d{}", chart.coords()[i]))
            .join("\u{2227}")
    } else {
        idx.iter()
            .map(|&i| format!("d({})", chart.coords()[i]))
            .join("^")
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", self.coefficient(&[]));
        }
        f.write_str(&fmt_linear(self.terms(false), false))
    }
}
