//! Exact symbolic engine for Lie group actions given by infinitesimal
//! generators on a coordinate chart.
//!
//! The crate decides whether an invariant vertical multivector field can
//! turn the evaluation of invariant forms into a cochain map onto the
//! quotient. It does so along two independent routes: relative
//! Chevalley–Eilenberg cohomology of the isotropy data at sample points
//! ([`lie`]), and direct chart-level verification of the Lie derivative,
//! contraction and proportionality identities ([`chart`], [`action`]).
//!
//! All arithmetic is exact. Coefficients live in the fraction field of
//! differential polynomials ([`scalar`]) so that every identity reduces to
//! a syntactic zero test.

pub mod action;
pub mod chart;
pub mod dsl;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod scalar;

pub use action::{ActionSpec, AnalysisError, CochainReport, IsotropySample};
pub use chart::{Chart, ChartError, DiffForm, MultiVectorField, VectorField};
pub use dsl::{
    parse, parse_named, render_workspace, ParseError, ParseErrorKind, SourceSpan, Workspace,
};
pub use lie::{AltForm, AltMultiVec, CohomologyResult, LieAlgebra, LieError, SubgroupSpec};
pub use linalg::Matrix;
pub use report::{Outcome, Verdict};
pub use scalar::{FunctionSymbol, Rational, ScalarError, ScalarExpr};
