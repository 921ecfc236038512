//! Tensor calculus on a single coordinate chart with [`ScalarExpr`]
//! coefficients: vector fields, differential forms and multivector fields.

mod form;
mod multivector;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{Rational, ScalarError, ScalarExpr};

pub use form::DiffForm;
pub use multivector::MultiVectorField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("a chart needs at least one coordinate")]
    EmptyChart,
    #[error("coordinate `{0}` is listed twice")]
    DuplicateCoordinate(String),
    #[error("objects live on different charts (`{0}` and `{1}`)")]
    ChartMismatch(String, String),
    #[error("degree {degree} exceeds chart dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("degree too small for this contraction")]
    DegreeUnderflow,
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("index {0} is outside the chart")]
    InvalidIndex(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// An open subset of n-space with named coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(name: S, coords: Vec<String>) -> Result<Arc<Chart>, ChartError> {
        if coords.is_empty() {
            return Err(ChartError::EmptyChart);
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(ChartError::DuplicateCoordinate(c.clone()));
            }
        }
        Ok(Arc::new(Chart {
            name: name.into(),
            coords,
        }))
    }

    /// Convenience constructor for tests and examples.
    pub fn with_coords(name: &str, coords: &[&str]) -> Arc<Chart> {
        Chart::new(name, coords.iter().map(|c| c.to_string()).collect()).expect("valid chart")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn index_of(&self, coord: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == coord)
    }

    pub fn coord(&self, i: usize) -> ScalarExpr {
        ScalarExpr::coord(self.coords[i].clone())
    }

    /// Partial derivative with a chart membership check.
    pub fn partial(&self, e: &ScalarExpr, coord: &str) -> Result<ScalarExpr, ChartError> {
        if self.index_of(coord).is_none() {
            return Err(ScalarError::UnknownCoordinate(coord.to_string()).into());
        }
        Ok(e.partial(coord))
    }

    pub(crate) fn d(&self, e: &ScalarExpr, i: usize) -> ScalarExpr {
        e.partial(&self.coords[i])
    }

    pub fn eval(&self, e: &ScalarExpr, point: &[Rational]) -> Result<Rational, ChartError> {
        if point.len() != self.dim() {
            return Err(ChartError::ComponentCount {
                expected: self.dim(),
                found: point.len(),
            });
        }
        Ok(e.eval_with(|c| self.index_of(c).map(|i| point[i].clone()))?)
    }

    pub(crate) fn same(a: &Arc<Chart>, b: &Arc<Chart>) -> Result<(), ChartError> {
        if Arc::ptr_eq(a, b) || a == b {
            Ok(())
        } else {
            Err(ChartError::ChartMismatch(a.name.clone(), b.name.clone()))
        }
    }
}

/// Joins (coefficient, basis) pairs in surface syntax or paper notation.
pub(crate) fn fmt_linear<'a, I>(terms: I, pretty: bool) -> String
where
    I: IntoIterator<Item = (&'a ScalarExpr, String)>,
{
    let mut out = String::new();
    for (c, basis) in terms {
        let (neg, body) = if c.is_one() {
            (false, basis)
        } else if c.neg().is_one() {
            (true, basis)
        } else if c.is_single_term() {
            let s = if pretty { c.pretty() } else { c.to_string() };
            let (neg, s) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if pretty {
                (neg, format!("{s} {basis}"))
            } else {
                (neg, format!("{s}*{basis}"))
            }
        } else {
            let s = if pretty { c.pretty() } else { c.to_string() };
            if pretty {
                (false, format!("({s}) {basis}"))
            } else {
                (false, format!("({s})*{basis}"))
            }
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

/// A vector field X = Σ X^i ∂_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<ScalarExpr>,
}

impl VectorField {
    pub fn new(chart: Arc<Chart>, components: Vec<ScalarExpr>) -> Result<Self, ChartError> {
        if components.len() != chart.dim() {
            return Err(ChartError::ComponentCount {
                expected: chart.dim(),
                found: components.len(),
            });
        }
        Ok(VectorField { chart, components })
    }

    pub fn zero(chart: Arc<Chart>) -> Self {
        let n = chart.dim();
        VectorField {
            chart,
            components: vec![ScalarExpr::zero(); n],
        }
    }

    /// The coordinate field ∂_i.
    pub fn basis(chart: Arc<Chart>, i: usize) -> Self {
        let mut v = VectorField::zero(chart);
        v.components[i] = ScalarExpr::one();
        v
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ScalarExpr {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarExpr::is_zero)
    }

    /// The derivation X(f) = Σ X^i ∂_i f.
    pub fn apply(&self, f: &ScalarExpr) -> ScalarExpr {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(ScalarExpr::zero(), |acc, (i, c)| {
                acc.add(&c.mul(&self.chart.d(f, i)))
            })
    }

    fn zip_with(
        &self,
        other: &VectorField,
        f: impl Fn(&ScalarExpr, &ScalarExpr) -> ScalarExpr,
    ) -> Result<VectorField, ChartError> {
        Chart::same(&self.chart, &other.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField, ChartError> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField, ChartError> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, f: &ScalarExpr) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// [X,Y]^i = Σ_j (X^j ∂_j Y^i − Y^j ∂_j X^i).
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField, ChartError> {
        Chart::same(&self.chart, &other.chart)?;
        let components = (0..self.chart.dim())
            .map(|i| {
                self.apply(&other.components[i])
                    .sub(&other.apply(&self.components[i]))
            })
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            components,
        })
    }

    pub fn evaluate_at(&self, point: &[Rational]) -> Result<Vec<Rational>, ChartError> {
        self.components
            .iter()
            .map(|c| self.chart.eval(c, point))
            .collect()
    }

    /// Entry (i, j) is ∂_j X^i at the point.
    pub fn jacobian_at(&self, point: &[Rational]) -> Result<Matrix, ChartError> {
        let n = self.chart.dim();
        let mut rows = Vec::with_capacity(n);
        for c in &self.components {
            let row = (0..n)
                .map(|j| self.chart.eval(&self.chart.d(c, j), point))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows, n))
    }

    fn terms(&self, pretty: bool) -> Vec<(&ScalarExpr, String)> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = &self.chart.coords[i];
                let basis = if pretty {
                    format!("\u{2202}{name}")
                } else {
                    format!("D({name})")
                };
                (c, basis)
            })
            .collect()
    }

    /// Paper notation, e.g. `x ∂x + y ∂y`.
    pub fn pretty(&self) -> String {
        fmt_linear(self.terms(true), true)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_linear(self.terms(false), false))
    }
}
