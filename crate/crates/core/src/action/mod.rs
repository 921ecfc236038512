//! Decision procedures for an action given by infinitesimal generators:
//! validation, isotropy data at points, invariance and verticality checks,
//! the evaluation map and the cochain conditions.

mod checks;
mod obstruction;
mod verdicts;

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::chart::{Chart, ChartError, DiffForm, MultiVectorField, VectorField};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::Matrix;
use crate::scalar::{constant_relations, Rational, ScalarExpr};

pub use checks::{
    CouplingCheck, IntegrabilityResidual, LambdaFactor, RescaleResidual, RhoResult,
    SurjectivityCertificate, VerticalFrame,
};
pub use obstruction::{ObstructionReport, ObstructionVerdict, PointObstruction, SamplePoint};
pub use verdicts::{cohomology_verdict, CochainReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("the algebra has dimension {expected} but {found} generators were given")]
    GeneratorCount { expected: usize, found: usize },
    #[error("orbit dimension {0} is impossible for this action")]
    BadOrbitDimension(usize),
    #[error("generators {i} and {j} do not realize the declared bracket; residual {residual}")]
    HomomorphismViolation {
        i: usize,
        j: usize,
        residual: VectorField,
    },
    #[error("generator matrix has rank {rank} instead of {expected} at {point}")]
    RankDeficit {
        point: String,
        rank: usize,
        expected: usize,
    },
    #[error("point has {found} coordinates, the chart has {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("component matrix {index} has the wrong shape")]
    ComponentShape { index: usize },
    #[error("no generator {0}-subset has a nonzero wedge at the sample points")]
    NoFrameFound(usize),
    #[error("{0} is not a multiple of the generator frame")]
    NotProportional(String),
    #[error("field {0} is not invariant")]
    NonInvariantR(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

pub fn format_point(point: &[Rational]) -> String {
    format!("({})", point.iter().join(", "))
}

/// An action of a Lie group on a chart, given by one generator per basis
/// vector of its algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpec {
    name: String,
    chart: Arc<Chart>,
    algebra: LieAlgebra,
    generators: Vec<VectorField>,
    orbit_dim: usize,
}

/// Outcome of a successful [`ActionSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionValidation {
    pub points_checked: usize,
    /// Constant combinations of generators vanishing identically; empty
    /// when the infinitesimal action is effective.
    pub kernel: Vec<Vec<Rational>>,
}

impl ActionValidation {
    pub fn is_effective(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Isotropy data at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropySample {
    pub point: Vec<Rational>,
    pub isotropy_basis: Vec<Vec<Rational>>,
    pub kappa_tangent: Vec<Vec<Rational>>,
    pub kappa_vertical: Vec<Vec<Rational>>,
    pub component_reps: Vec<ComponentRep>,
}

/// One representative of a non-identity component of the isotropy group:
/// its adjoint matrix on the algebra and, optionally, its differential on
/// the tangent space at the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRep {
    pub adjoint: Matrix,
    pub tangent: Option<Matrix>,
}

impl ComponentRep {
    pub fn adjoint_only(adjoint: Matrix) -> Self {
        ComponentRep {
            adjoint,
            tangent: None,
        }
    }
}

impl ActionSpec {
    pub fn new(
        name: impl Into<String>,
        algebra: LieAlgebra,
        generators: Vec<VectorField>,
        orbit_dim: usize,
    ) -> Result<Self, AnalysisError> {
        if generators.len() != algebra.dim() {
            return Err(AnalysisError::GeneratorCount {
                expected: algebra.dim(),
                found: generators.len(),
            });
        }
        let chart = generators[0].chart().clone();
        for g in &generators {
            Chart::same(&chart, g.chart())?;
        }
        if orbit_dim == 0 || orbit_dim > chart.dim() || orbit_dim > algebra.dim() {
            return Err(AnalysisError::BadOrbitDimension(orbit_dim));
        }
        Ok(ActionSpec {
            name: name.into(),
            chart,
            algebra,
            generators,
            orbit_dim,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    pub fn orbit_dim(&self) -> usize {
        self.orbit_dim
    }

    fn check_point(&self, point: &[Rational]) -> Result<(), AnalysisError> {
        if point.len() != self.chart.dim() {
            return Err(AnalysisError::PointDimension {
                expected: self.chart.dim(),
                found: point.len(),
            });
        }
        Ok(())
    }

    /// The field realizing ξ = Σ ξ_i e_i.
    pub fn generator_of(&self, xi: &[Rational]) -> VectorField {
        let mut out = VectorField::zero(self.chart.clone());
        for (c, g) in xi.iter().zip(&self.generators) {
            if !c.is_zero() {
                out = out
                    .add(&g.scale(&ScalarExpr::constant(c.clone())))
                    .expect("same chart");
            }
        }
        out
    }

    /// Bracket homomorphism residuals [X_i, X_j] - Σ c_ij^k X_k for i < j,
    /// nonzero ones only.
    pub fn homomorphism_residuals(&self) -> Vec<(usize, usize, VectorField)> {
        let p = self.algebra.dim();
        let mut out = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                let lhs = self.generators[i]
                    .bracket(&self.generators[j])
                    .expect("same chart");
                let rhs = self.generator_of(&self.algebra.bracket_basis(i, j));
                let residual = lhs.sub(&rhs).expect("same chart");
                if !residual.is_zero() {
                    out.push((i, j, residual));
                }
            }
        }
        out
    }

    /// Homomorphism identity, rank of the generator matrix at the samples
    /// and effectiveness of the infinitesimal action.
    pub fn validate(&self, samples: &[Vec<Rational>]) -> Result<ActionValidation, AnalysisError> {
        if let Some((i, j, residual)) = self.homomorphism_residuals().into_iter().next() {
            return Err(AnalysisError::HomomorphismViolation {
                i: i + 1,
                j: j + 1,
                residual,
            });
        }
        for pt in samples {
            let rank = self.generator_matrix_at(pt)?.rank();
            if rank != self.orbit_dim {
                return Err(AnalysisError::RankDeficit {
                    point: format_point(pt),
                    rank,
                    expected: self.orbit_dim,
                });
            }
        }
        let comps: Vec<Vec<ScalarExpr>> = self
            .generators
            .iter()
            .map(|g| g.components().to_vec())
            .collect();
        Ok(ActionValidation {
            points_checked: samples.len(),
            kernel: constant_relations(&comps),
        })
    }

    /// The n×p matrix whose column i is generator i at the point.
    pub fn generator_matrix_at(&self, point: &[Rational]) -> Result<Matrix, AnalysisError> {
        self.check_point(point)?;
        let cols = self
            .generators
            .iter()
            .map(|g| g.evaluate_at(point))
            .collect::<Result<Vec<_>, _>>()?;
        let n = self.chart.dim();
        Ok(Matrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone()))
    }

    /// g_x as the kernel of ξ ↦ Σ ξ_i X_i(x); kappa spaces left empty.
    pub fn isotropy_algebra_at(&self, point: &[Rational]) -> Result<IsotropySample, AnalysisError> {
        let e = self.generator_matrix_at(point)?;
        Ok(IsotropySample {
            point: point.to_vec(),
            isotropy_basis: e.kernel(),
            kappa_tangent: Vec::new(),
            kappa_vertical: Vec::new(),
            component_reps: Vec::new(),
        })
    }

    /// Fills the fixed subspaces of the linear isotropy representation on
    /// T_xM and on the vertical space.
    pub fn kappa_space_at(
        &self,
        sample: &IsotropySample,
        components: &[ComponentRep],
    ) -> Result<IsotropySample, AnalysisError> {
        let n = self.chart.dim();
        let p = self.algebra.dim();
        let point = &sample.point;
        let e = self.generator_matrix_at(point)?;
        for (idx, c) in components.iter().enumerate() {
            let bad_adj = c.adjoint.nrows() != p || c.adjoint.ncols() != p;
            let bad_tan = c
                .tangent
                .as_ref()
                .is_some_and(|t| t.nrows() != n || t.ncols() != n);
            if bad_adj || bad_tan {
                return Err(AnalysisError::ComponentShape { index: idx + 1 });
            }
        }

        // tangent constraints: Jac(r(ξ)) v = 0 and (T - I) v = 0
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for xi in &sample.isotropy_basis {
            rows.extend(self.generator_of(xi).jacobian_at(point)?.row_vectors());
        }
        for c in components {
            if let Some(t) = &c.tangent {
                rows.extend(t.sub(&Matrix::identity(n)).row_vectors());
            }
        }
        let kappa_tangent = kernel_or_all(rows, n);

        // vertical part: v = E ξ with v in kappa_tangent and E (Ad - I) ξ = 0
        let mut vrows: Vec<Vec<Rational>> = Vec::new();
        for xi in &sample.isotropy_basis {
            let jac = self.generator_of(xi).jacobian_at(point)?;
            vrows.extend(jac.mul(&e).row_vectors());
        }
        for c in components {
            match &c.tangent {
                Some(t) => vrows.extend(t.sub(&Matrix::identity(n)).mul(&e).row_vectors()),
                None => vrows.extend(e.mul(&c.adjoint.sub(&Matrix::identity(p))).row_vectors()),
            }
        }
        let xis = kernel_or_all(vrows, p);
        let mut span = crate::linalg::RowSpace::new(n);
        for xi in &xis {
            span.insert(&e.mul_vec(xi));
        }

        Ok(IsotropySample {
            point: point.clone(),
            isotropy_basis: sample.isotropy_basis.clone(),
            kappa_tangent,
            kappa_vertical: span.basis(),
            component_reps: components.to_vec(),
        })
    }

    pub fn form_invariance_residual(
        &self,
        w: &DiffForm,
    ) -> Result<Option<(usize, DiffForm)>, AnalysisError> {
        for (i, g) in self.generators.iter().enumerate() {
            let r = w.lie_derivative(g)?;
            if !r.is_zero() {
                return Ok(Some((i, r)));
            }
        }
        Ok(None)
    }

    pub fn field_invariance_residual(
        &self,
        x: &VectorField,
    ) -> Result<Option<(usize, VectorField)>, AnalysisError> {
        for (i, g) in self.generators.iter().enumerate() {
            let r = g.bracket(x)?;
            if !r.is_zero() {
                return Ok(Some((i, r)));
            }
        }
        Ok(None)
    }

    pub fn chain_invariance_residual(
        &self,
        chi: &MultiVectorField,
    ) -> Result<Option<(usize, MultiVectorField)>, AnalysisError> {
        for (i, g) in self.generators.iter().enumerate() {
            let r = chi.lie_derivative(g)?;
            if !r.is_zero() {
                return Ok(Some((i, r)));
            }
        }
        Ok(None)
    }

    pub fn function_invariance_residual(&self, f: &ScalarExpr) -> Option<(usize, ScalarExpr)> {
        self.generators.iter().enumerate().find_map(|(i, g)| {
            let r = g.apply(f);
            (!r.is_zero()).then_some((i, r))
        })
    }

    /// ι_{X_i} η for the first generator where it is nonzero.
    pub fn semibasic_residual(
        &self,
        eta: &DiffForm,
    ) -> Result<Option<(usize, DiffForm)>, AnalysisError> {
        if eta.degree() == 0 {
            return Ok(None);
        }
        for (i, g) in self.generators.iter().enumerate() {
            let r = eta.interior(g)?;
            if !r.is_zero() {
                return Ok(Some((i, r)));
            }
        }
        Ok(None)
    }
}

fn kernel_or_all(rows: Vec<Vec<Rational>>, dim: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        Matrix::identity(dim).row_vectors()
    } else {
        Matrix::from_rows(rows, dim).kernel()
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "action {} on {} by [{}]",
            self.name,
            self.chart.name(),
            self.generators.iter().map(|g| g.pretty()).join(", ")
        )
    }
}

#[cfg(test)]
mod tests;
