use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use super::form::sort_with_sign;
use super::{fmt_linear, Chart, ChartError, VectorField};
use crate::scalar::{Rational, ScalarExpr};

/// A q-vector field Σ χ^J ∂_J over increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVectorField {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ScalarExpr>,
}

impl MultiVectorField {
    pub fn zero(chart: Arc<Chart>, degree: usize) -> Result<Self, ChartError> {
        if degree > chart.dim() {
            return Err(ChartError::DegreeOverflow {
                degree,
                dim: chart.dim(),
            });
        }
        Ok(MultiVectorField {
            chart,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_vector_field(x: &VectorField) -> Self {
        let mut out = MultiVectorField::zero(x.chart().clone(), 1).expect("degree 1");
        for (i, c) in x.components().iter().enumerate() {
            out.add_at(vec![i], c.clone());
        }
        out
    }

    /// ∂_{i_1} ∧ ... ∧ ∂_{i_q} for an arbitrary index list.
    pub fn basis(chart: Arc<Chart>, idx: &[usize]) -> Result<Self, ChartError> {
        MultiVectorField::from_terms(chart, idx.len(), [(idx.to_vec(), ScalarExpr::one())])
    }

    pub fn from_terms<I>(chart: Arc<Chart>, degree: usize, terms: I) -> Result<Self, ChartError>
    where
        I: IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    {
        let mut out = MultiVectorField::zero(chart, degree)?;
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

    fn add_at(&mut self, mut idx: Vec<usize>, c: ScalarExpr) {
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

    fn check_same(&self, other: &MultiVectorField) -> Result<(), ChartError> {
        Chart::same(&self.chart, &other.chart)?;
        if self.degree != other.degree {
            return Err(ChartError::ComponentCount {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiVectorField) -> Result<MultiVectorField, ChartError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_at(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiVectorField) -> Result<MultiVectorField, ChartError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiVectorField {
        self.scale(&ScalarExpr::from_int(-1))
    }

    pub fn scale(&self, f: &ScalarExpr) -> MultiVectorField {
        let mut out = MultiVectorField {
            chart: self.chart.clone(),
            degree: self.degree,
            coeffs: BTreeMap::new(),
        };
        for (idx, c) in &self.coeffs {
            out.add_at(idx.clone(), c.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &MultiVectorField) -> Result<MultiVectorField, ChartError> {
        Chart::same(&self.chart, &other.chart)?;
        let mut out = MultiVectorField::zero(self.chart.clone(), self.degree + other.degree)?;
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let mut t = i.clone();
                t.extend_from_slice(j);
                out.add_at(t, a.mul(b));
            }
        }
        Ok(out)
    }

    /// Wedge of vector fields in the given order.
    pub fn wedge_all(chart: Arc<Chart>, fields: &[&VectorField]) -> Result<Self, ChartError> {
        let mut out = MultiVectorField::zero(chart.clone(), 0)?;
        out.add_at(Vec::new(), ScalarExpr::one());
        for x in fields {
            out = out.wedge(&MultiVectorField::from_vector_field(x))?;
        }
        Ok(out)
    }

    /// L_R χ = [R, χ] via [R, f ∂_J] = R(f) ∂_J + f Σ_i ∂_{J_1}∧…∧[R, ∂_{J_i}]∧…
    pub fn lie_derivative(&self, r: &VectorField) -> Result<MultiVectorField, ChartError> {
        Chart::same(&self.chart, r.chart())?;
        let n = self.chart.dim();
        let mut out = MultiVectorField::zero(self.chart.clone(), self.degree)?;
        for (idx, f) in &self.coeffs {
            out.add_at(idx.clone(), r.apply(f));
            for (pos, &j) in idx.iter().enumerate() {
                for k in 0..n {
                    let djrk = self.chart.d(r.component(k), j);
                    if djrk.is_zero() {
                        continue;
                    }
                    let mut t = idx.clone();
                    t[pos] = k;
                    out.add_at(t, f.mul(&djrk).neg());
                }
            }
        }
        Ok(out)
    }

    pub fn evaluate_at(
        &self,
        point: &[Rational],
    ) -> Result<BTreeMap<Vec<usize>, Rational>, ChartError> {
        let mut out = BTreeMap::new();
        for (idx, c) in &self.coeffs {
            let v = self.chart.eval(c, point)?;
            if v != Rational::from_integer(0.into()) {
                out.insert(idx.clone(), v);
            }
        }
        Ok(out)
    }

    /// λ with self = λ·other, if one exists; `None` if `other` vanishes
    /// or the coefficients are not proportional.
    pub fn proportional_to(&self, other: &MultiVectorField) -> Option<ScalarExpr> {
        if self.check_same(other).is_err() {
            return None;
        }
        let (idx, base) = other.coeffs.iter().next()?;
        let lambda = ScalarExpr::proportionality(&self.coefficient(idx), base)?;
        let ok = self.coeffs.keys().chain(other.coeffs.keys()).all(|j| {
            self.coefficient(j)
                .equals(&lambda.mul(&other.coefficient(j)))
        });
        ok.then_some(lambda)
    }

    fn terms(&self, pretty: bool) -> Vec<(&ScalarExpr, String)> {
        let coords = self.chart.coords();
        self.coeffs
            .iter()
            .map(|(idx, c)| {
                let basis = if pretty {
                    idx.iter()
                        .map(|&i| format!("\u{2202}{}", coords[i]))
                        .join("\u{2227}")
                } else {
                    idx.iter().map(|&i| format!("D({})", coords[i])).join("^")
                };
                (c, basis)
            })
            .collect()
    }

    /// Paper notation, e.g. `K(z) y² ∂x∧∂y`.
    pub fn pretty(&self) -> String {
        if self.degree == 0 {
            return self.coefficient(&[]).pretty();
        }
        fmt_linear(self.terms(true), true)
    }
}

impl fmt::Display for MultiVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", self.coefficient(&[]));
        }
        f.write_str(&fmt_linear(self.terms(false), false))
    }
}
