//! The workspace description language: declarations of algebras,
//! subgroups, charts, tensors, actions, points and check directives.

mod eval;
mod lexer;
mod parser;
mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::action::ActionSpec;
use crate::chart::{Chart, DiffForm, MultiVectorField, VectorField};
use crate::lie::{LieAlgebra, SubgroupSpec};
use crate::linalg::Matrix;
use crate::scalar::{FunctionSymbol, Rational, ScalarExpr};

pub use render::render_workspace;

/// 1-based position of a token in a source file.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(file: &str, line: usize, column: usize, length: usize) -> Self {
        SourceSpan {
            file: file.to_string(),
            line,
            column,
            length,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    SyntaxError,
    UnknownReference,
    ArityMismatch,
    DuplicateName,
    TypeError,
    InvalidDeclaration,
}

impl ParseErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorKind::SyntaxError => "SyntaxError",
            ParseErrorKind::UnknownReference => "UnknownReference",
            ParseErrorKind::ArityMismatch => "ArityMismatch",
            ParseErrorKind::DuplicateName => "DuplicateName",
            ParseErrorKind::TypeError => "TypeError",
            ParseErrorKind::InvalidDeclaration => "InvalidDeclaration",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {}: {message}", kind.as_str())]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            kind,
            message: message.into(),
            span,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeclKind {
    LieAlgebra,
    Subgroup,
    Chart,
    Function,
    Scalar,
    VectorField,
    Form,
    Chain,
    Action,
    Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupDecl {
    pub algebra: String,
    pub spec: SubgroupSpec,
    /// Optional tangent action of each component representative, parallel
    /// to `spec.components`.
    pub tangents: Vec<Option<Matrix>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarDecl {
    pub chart: String,
    pub value: ScalarExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDecl {
    pub algebra: String,
    pub chart: String,
    pub generators: Vec<String>,
    pub spec: ActionSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDecl {
    pub chart: String,
    pub coords: Vec<Rational>,
}

/// One argument of a check directive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckArg {
    Name(String),
    Int(usize),
    List(Vec<CheckArg>),
    Pair(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDirective {
    pub kind: String,
    pub args: Vec<CheckArg>,
    pub span: SourceSpan,
}

/// A parsed and type-checked workspace. Equality ignores source spans.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub lie_algebras: IndexMap<String, LieAlgebra>,
    pub subgroups: IndexMap<String, SubgroupDecl>,
    pub charts: IndexMap<String, Arc<Chart>>,
    pub functions: IndexMap<String, FunctionSymbol>,
    pub scalars: IndexMap<String, ScalarDecl>,
    pub vector_fields: IndexMap<String, VectorField>,
    pub forms: IndexMap<String, DiffForm>,
    pub chains: IndexMap<String, MultiVectorField>,
    pub actions: IndexMap<String, ActionDecl>,
    pub points: IndexMap<String, PointDecl>,
    pub checks: Vec<CheckDirective>,
    pub order: Vec<(DeclKind, String)>,
    pub spans: BTreeMap<String, SourceSpan>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        let checks = |w: &Workspace| -> Vec<(String, Vec<CheckArg>)> {
            w.checks
                .iter()
                .map(|c| (c.kind.clone(), c.args.clone()))
                .collect()
        };
        self.lie_algebras == other.lie_algebras
            && self.subgroups == other.subgroups
            && self.charts == other.charts
            && self.functions == other.functions
            && self.scalars == other.scalars
            && self.vector_fields == other.vector_fields
            && self.forms == other.forms
            && self.chains == other.chains
            && self.actions == other.actions
            && self.points == other.points
            && self.order == other.order
            && checks(self) == checks(other)
    }
}

impl Eq for Workspace {}

impl Workspace {
    pub fn kind_of(&self, name: &str) -> Option<DeclKind> {
        self.order.iter().find(|(_, n)| n == name).map(|(k, _)| *k)
    }

    /// Points declared on a chart, in declaration order.
    pub fn points_on(&self, chart: &str) -> Vec<(String, Vec<Rational>)> {
        self.points
            .iter()
            .filter(|(_, p)| p.chart == chart)
            .map(|(n, p)| (n.clone(), p.coords.clone()))
            .collect()
    }

    pub fn span_of(&self, name: &str) -> Option<&SourceSpan> {
        self.spans.get(name)
    }
}

/// Parses a workspace from text attributed to `<input>`.
pub fn parse(text: &str) -> Result<Workspace, ParseError> {
    parse_named("<input>", text)
}

/// Parses a workspace, naming `file` in error spans.
pub fn parse_named(file: &str, text: &str) -> Result<Workspace, ParseError> {
    parser::Parser::new(file, text)?.parse_workspace()
}
