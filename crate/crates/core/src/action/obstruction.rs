use std::fmt;

use super::{ActionSpec, AnalysisError, ComponentRep};
use crate::lie::{absolute_cohomology, relative_cohomology, CohomologyResult, SubgroupSpec};
use crate::scalar::Rational;

/// A sample point with optional component data for its isotropy group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub label: String,
    pub point: Vec<Rational>,
    pub components: Vec<ComponentRep>,
}

impl SamplePoint {
    pub fn new(label: impl Into<String>, point: Vec<Rational>) -> Self {
        SamplePoint {
            label: label.into(),
            point,
            components: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionVerdict {
    NoInvariantChain,
    NoCochainMap,
    LocallyUnobstructed,
}

impl ObstructionVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ObstructionVerdict::NoInvariantChain => "no invariant chain can exist",
            ObstructionVerdict::NoCochainMap => "no cochain map can exist",
            ObstructionVerdict::LocallyUnobstructed => "locally unobstructed",
        }
    }
}

impl fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointObstruction {
    pub label: String,
    pub point: Vec<Rational>,
    pub subgroup: SubgroupSpec,
    pub kappa_tangent_dim: usize,
    pub kappa_vertical_dim: usize,
    /// H^q(g, G_x) with A^q(g, G_x) recorded in its basis dimensions.
    pub relative: CohomologyResult,
    /// H^q(g) ignoring isotropy.
    pub absolute_dim: usize,
}

impl PointObstruction {
    pub fn relative_forms_dim(&self) -> usize {
        self.relative.relative_dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub degree: usize,
    pub points: Vec<PointObstruction>,
    pub verdict: ObstructionVerdict,
}

impl ActionSpec {
    /// Relative forms and cohomology in the orbit degree at each sample.
    pub fn obstruction_report(
        &self,
        samples: &[SamplePoint],
    ) -> Result<ObstructionReport, AnalysisError> {
        if samples.is_empty() {
            return Err(AnalysisError::InvalidInput("no sample points given".into()));
        }
        let q = self.orbit_dim();
        let absolute_dim = absolute_cohomology(self.algebra(), q)?.dimension;
        let mut points = Vec::with_capacity(samples.len());
        for s in samples {
            let iso = self.isotropy_algebra_at(&s.point)?;
            let full = self.kappa_space_at(&iso, &s.components)?;
            let subgroup = SubgroupSpec::new(
                iso.isotropy_basis.clone(),
                s.components.iter().map(|c| c.adjoint.clone()).collect(),
            );
            subgroup.validate(self.algebra())?;
            let relative = relative_cohomology(self.algebra(), &subgroup, q)?;
            points.push(PointObstruction {
                label: s.label.clone(),
                point: s.point.clone(),
                subgroup,
                kappa_tangent_dim: full.kappa_tangent.len(),
                kappa_vertical_dim: full.kappa_vertical.len(),
                relative,
                absolute_dim,
            });
        }
        let verdict = if points.iter().any(|p| p.relative_forms_dim() == 0) {
            ObstructionVerdict::NoInvariantChain
        } else if points.iter().any(|p| p.relative.dimension == 0) {
            ObstructionVerdict::NoCochainMap
        } else {
            ObstructionVerdict::LocallyUnobstructed
        };
        Ok(ObstructionReport {
            degree: q,
            points,
            verdict,
        })
    }
}
