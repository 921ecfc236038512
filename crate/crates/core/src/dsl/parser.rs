use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::eval::{self, Ctx, Evaluator, Expr, ExprKind};
use super::lexer::{tokenize, Tok, Token};
use super::{
    ActionDecl, CheckArg, CheckDirective, DeclKind, ParseError, ParseErrorKind, PointDecl,
    ScalarDecl, SourceSpan, SubgroupDecl, Workspace,
};
use crate::action::ActionSpec;
use crate::chart::Chart;
use crate::lie::{LieAlgebra, LieError, SubgroupSpec};
use crate::linalg::Matrix;
use crate::scalar::{FunctionSymbol, Rational};

const RESERVED: &[&str] = &[
    "lie_algebra",
    "subgroup",
    "chart",
    "function",
    "scalar",
    "vectorfield",
    "form",
    "chain",
    "action",
    "point",
    "check",
    "dim",
    "bracket",
    "span",
    "component",
    "tangent",
    "coords",
    "on",
    "of",
    "algebra",
    "generators",
    "orbit_dim",
    "d",
    "D",
    "wedge",
];

/// Parameter shapes of a check directive.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Param {
    Algebra,
    Subgroup,
    Degree,
    Action,
    Object,
    Chain,
    Form,
    Field,
    Scalar,
    Point,
    Forms,
    Fields,
    Points,
    PointSubgroups,
}

/// Check kinds with their parameter shapes; see `optional` for skippable ones.
const CHECKS: &[(&str, &[Param])] = &[
    ("validate", &[Param::Action, Param::Points]),
    (
        "cohomology",
        &[Param::Algebra, Param::Subgroup, Param::Degree],
    ),
    ("isotropy", &[Param::Action, Param::Point]),
    ("invariant", &[Param::Action, Param::Object]),
    ("vertical", &[Param::Action, Param::Chain]),
    ("semibasic", &[Param::Action, Param::Form]),
    (
        "cochain",
        &[Param::Action, Param::Chain, Param::Forms, Param::Fields],
    ),
    ("rho", &[Param::Action, Param::Chain, Param::Form]),
    ("lambda", &[Param::Action, Param::Chain, Param::Field]),
    (
        "integrability",
        &[Param::Action, Param::Chain, Param::Fields],
    ),
    (
        "rescale",
        &[Param::Action, Param::Chain, Param::Scalar, Param::Fields],
    ),
    ("surjective", &[Param::Action, Param::Chain, Param::Form]),
    (
        "report",
        &[Param::Action, Param::Points, Param::PointSubgroups],
    ),
];

fn optional(p: Param) -> bool {
    matches!(
        p,
        Param::Subgroup | Param::Forms | Param::Fields | Param::Points | Param::PointSubgroups
    )
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) struct Parser {
    file: String,
    toks: Vec<Token>,
    pos: usize,
    ws: Workspace,
}

impl Parser {
    pub fn new(file: &str, text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            file: file.to_string(),
            toks: tokenize(file, text)?,
            pos: 0,
            ws: Workspace::default(),
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_is(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn span(&self, t: &Token) -> SourceSpan {
        SourceSpan::new(&self.file, t.line, t.column, t.length.max(1))
    }

    fn error_at(&self, kind: ParseErrorKind, msg: impl Into<String>, t: &Token) -> ParseError {
        ParseError::new(kind, msg, self.span(t))
    }

    /// A missing token at a line break is reported just after the last
    /// token of the unfinished line rather than at the next line.
    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = self.peek();
        let msg = format!("expected {wanted}, found {}", t.tok.describe());
        if self.pos > 0 {
            let prev = &self.toks[self.pos - 1];
            if prev.line < t.line || t.tok == Tok::Eof {
                let span = SourceSpan::new(&self.file, prev.line, prev.column + prev.length, 1);
                return ParseError::new(ParseErrorKind::SyntaxError, msg, span);
            }
        }
        self.error_at(ParseErrorKind::SyntaxError, msg, t)
    }

    fn not_a_declaration(&self, t: &Token) -> ParseError {
        self.error_at(
            ParseErrorKind::SyntaxError,
            format!("expected a declaration, found {}", t.tok.describe()),
            t,
        )
    }

    fn expect_punct(&mut self, c: char) -> Result<Token, ParseError> {
        if self.peek_is(c) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Token, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => Ok(self.bump()),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                let t = self.bump();
                Ok((s, self.span(&t)))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn expect_int(&mut self) -> Result<(BigInt, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                let t = self.bump();
                Ok((n, self.span(&t)))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn expect_small(&mut self, what: &str) -> Result<(usize, SourceSpan), ParseError> {
        let (n, span) = self.expect_int()?;
        let v = n.to_usize().filter(|&v| v <= 64).ok_or_else(|| {
            ParseError::new(
                ParseErrorKind::InvalidDeclaration,
                format!("{what} {n} is out of range"),
                span.clone(),
            )
        })?;
        Ok((v, span))
    }

    /// Records a new top-level name after the uniqueness checks.
    fn declare(&mut self, kind: DeclKind, name: &str, span: &SourceSpan) -> Result<(), ParseError> {
        if RESERVED.contains(&name) {
            return Err(ParseError::new(
                ParseErrorKind::InvalidDeclaration,
                format!("`{name}` is a reserved word"),
                span.clone(),
            ));
        }
        if self.ws.kind_of(name).is_some() {
            return Err(ParseError::new(
                ParseErrorKind::DuplicateName,
                format!("`{name}` is already declared"),
                span.clone(),
            ));
        }
        if let Some(c) = self.ws.charts.values().find(|c| c.index_of(name).is_some()) {
            return Err(ParseError::new(
                ParseErrorKind::DuplicateName,
                format!("`{name}` is a coordinate of chart `{}`", c.name()),
                span.clone(),
            ));
        }
        self.ws.order.push((kind, name.to_string()));
        self.ws.spans.insert(name.to_string(), span.clone());
        Ok(())
    }

    fn lookup(
        &self,
        kind: DeclKind,
        what: &str,
        name: &str,
        span: &SourceSpan,
    ) -> Result<(), ParseError> {
        match self.ws.kind_of(name) {
            Some(k) if k == kind => Ok(()),
            Some(_) => Err(ParseError::new(
                ParseErrorKind::TypeError,
                format!("`{name}` is not {what}"),
                span.clone(),
            )),
            None => Err(ParseError::new(
                ParseErrorKind::UnknownReference,
                format!("unknown {what} `{name}`"),
                span.clone(),
            )),
        }
    }

    fn chart_ref(&mut self) -> Result<(String, Arc<Chart>), ParseError> {
        let (name, span) = self.expect_ident()?;
        self.lookup(DeclKind::Chart, "a chart", &name, &span)?;
        let chart = self.ws.charts[&name].clone();
        Ok((name, chart))
    }

    pub fn parse_workspace(mut self) -> Result<Workspace, ParseError> {
        loop {
            let t = self.peek().clone();
            let kw = match &t.tok {
                Tok::Eof => return Ok(self.ws),
                Tok::Ident(s) => s.clone(),
                _ => return Err(self.not_a_declaration(&t)),
            };
            match kw.as_str() {
                "lie_algebra" => self.lie_algebra()?,
                "subgroup" => self.subgroup()?,
                "chart" => self.chart()?,
                "function" => self.function()?,
                "scalar" | "vectorfield" | "form" | "chain" => self.tensor(&kw)?,
                "action" => self.action()?,
                "point" => self.point()?,
                "check" => self.check()?,
                _ => return Err(self.not_a_declaration(&t)),
            }
        }
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek_is('+') || self.peek_is('-') {
            let op = self.bump();
            let rhs = self.term()?;
            lhs = self.binary(&op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek_is('*') || self.peek_is('/') {
            let op = self.bump();
            let rhs = self.unary()?;
            lhs = self.binary(&op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_is('-') {
            let t = self.bump();
            let inner = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span: self.span(&t),
            });
        }
        let base = self.atom()?;
        if self.peek_is('^') {
            let op = self.bump();
            let exp = self.unary()?;
            return Ok(self.binary(&op, base, exp));
        }
        Ok(base)
    }

    fn binary(&self, op: &Token, a: Expr, b: Expr) -> Expr {
        let Tok::Punct(c) = op.tok else {
            unreachable!("operators are punctuation")
        };
        Expr {
            kind: ExprKind::Bin(c, Box::new(a), Box::new(b)),
            span: self.span(op),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Int(n.clone()),
                    span: self.span(&t),
                })
            }
            Tok::Ident(name) => {
                self.bump();
                if !self.peek_is('(') {
                    return Ok(Expr {
                        kind: ExprKind::Ident(name.clone()),
                        span: self.span(&t),
                    });
                }
                self.bump();
                let mut args = Vec::new();
                if !self.peek_is(')') {
                    args.push(self.expr()?);
                    while self.peek_is(',') {
                        self.bump();
                        args.push(self.expr()?);
                    }
                }
                self.expect_punct(')')?;
                Ok(Expr {
                    kind: ExprKind::Call(name.clone(), args),
                    span: self.span(&t),
                })
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn eval_in(&self, ctx: Ctx<'_>, e: &Expr) -> Result<eval::Value, ParseError> {
        Evaluator { ws: &self.ws, ctx }.eval(e)
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let e = self.expr()?;
        let v = self.eval_in(Ctx::Constant, &e)?;
        eval::into_rational(v, &e.span)
    }

    fn matrix(&mut self, dim: usize) -> Result<Matrix, ParseError> {
        let open = self.expect_punct('[')?;
        let mut rows = Vec::new();
        loop {
            let row_tok = self.expect_punct('[')?;
            let mut row = vec![self.rational()?];
            while self.peek_is(',') {
                self.bump();
                row.push(self.rational()?);
            }
            self.expect_punct(']')?;
            if row.len() != dim {
                return Err(self.error_at(
                    ParseErrorKind::ArityMismatch,
                    format!("matrix row has {} entries, expected {dim}", row.len()),
                    &row_tok,
                ));
            }
            rows.push(row);
            if self.peek_is(',') {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_punct(']')?;
        if rows.len() != dim {
            return Err(self.error_at(
                ParseErrorKind::ArityMismatch,
                format!("matrix has {} rows, expected {dim}", rows.len()),
                &open,
            ));
        }
        Ok(Matrix::from_rows(rows, dim))
    }

    // ---- declarations ----

    fn lie_algebra(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_punct('{')?;
        self.expect_keyword("dim")?;
        let (dim, dim_span) = self.expect_small("dimension")?;
        if dim == 0 {
            return Err(ParseError::new(
                ParseErrorKind::InvalidDeclaration,
                "a Lie algebra needs dimension at least 1",
                dim_span,
            ));
        }
        let mut brackets: Vec<((usize, usize), Vec<Rational>)> = Vec::new();
        while !self.peek_is('}') {
            self.expect_keyword("bracket")?;
            self.expect_punct('[')?;
            let (i, i_span) = self.expect_small("index")?;
            self.expect_punct(',')?;
            let (j, j_span) = self.expect_small("index")?;
            self.expect_punct(']')?;
            if i == 0 || i > dim {
                return Err(ParseError::new(
                    ParseErrorKind::SyntaxError,
                    format!("bracket index {i} is outside 1..{dim}"),
                    i_span,
                ));
            }
            if j == 0 || j > dim {
                return Err(ParseError::new(
                    ParseErrorKind::SyntaxError,
                    format!("bracket index {j} is outside 1..{dim}"),
                    j_span,
                ));
            }
            if i >= j {
                return Err(ParseError::new(
                    ParseErrorKind::SyntaxError,
                    format!("bracket [{i},{j}] must be written with i < j"),
                    j_span,
                ));
            }
            if brackets
                .iter()
                .any(|((a, b), _)| (*a, *b) == (i - 1, j - 1))
            {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateName,
                    format!("bracket [{i},{j}] is given twice"),
                    i_span,
                ));
            }
            self.expect_punct('=')?;
            let e = self.expr()?;
            let v = self.eval_in(Ctx::Lie(dim), &e)?;
            brackets.push(((i - 1, j - 1), eval::into_lie(v, dim, &e.span)?));
        }
        self.bump();
        let algebra = LieAlgebra::new(dim, brackets).map_err(|e| {
            ParseError::new(
                ParseErrorKind::InvalidDeclaration,
                e.to_string(),
                span.clone(),
            )
        })?;
        self.declare(DeclKind::LieAlgebra, &name, &span)?;
        self.ws.lie_algebras.insert(name, algebra);
        Ok(())
    }

    fn subgroup(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_keyword("of")?;
        let (alg_name, alg_span) = self.expect_ident()?;
        self.lookup(DeclKind::LieAlgebra, "a Lie algebra", &alg_name, &alg_span)?;
        let dim = self.ws.lie_algebras[&alg_name].dim();
        self.expect_punct('{')?;
        self.expect_keyword("span")?;
        self.expect_punct('=')?;
        self.expect_punct('[')?;
        let span_open = self.span(&self.toks[self.pos - 1]);
        let mut basis = Vec::new();
        while !self.peek_is(']') {
            let e = self.expr()?;
            let v = match &e.kind {
                ExprKind::Int(n) => {
                    let k = n
                        .to_usize()
                        .filter(|&k| k >= 1 && k <= dim)
                        .ok_or_else(|| {
                            ParseError::new(
                                ParseErrorKind::InvalidDeclaration,
                                format!("basis index {n} is outside 1..{dim}"),
                                e.span.clone(),
                            )
                        })?;
                    let mut v = vec![int(0); dim];
                    v[k - 1] = int(1);
                    v
                }
                _ => {
                    let v = self.eval_in(Ctx::Lie(dim), &e)?;
                    eval::into_lie(v, dim, &e.span)?
                }
            };
            basis.push(v);
            if !self.peek_is(']') {
                self.expect_punct(',')?;
            }
        }
        self.bump();
        let mut components = Vec::new();
        let mut component_spans = Vec::new();
        let mut tangents = Vec::new();
        while !self.peek_is('}') {
            let kw = self.expect_keyword("component")?;
            component_spans.push(self.span(&kw));
            components.push(self.matrix(dim)?);
            if matches!(&self.peek().tok, Tok::Ident(s) if s == "tangent") {
                self.bump();
                let open = self.peek().clone();
                let t = self.matrix_any()?;
                if !t.is_square() {
                    return Err(self.error_at(
                        ParseErrorKind::ArityMismatch,
                        "tangent matrix must be square",
                        &open,
                    ));
                }
                tangents.push(Some(t));
            } else {
                tangents.push(None);
            }
        }
        self.bump();
        let spec = SubgroupSpec::new(basis, components);
        let algebra = &self.ws.lie_algebras[&alg_name];
        spec.validate(algebra).map_err(|e| {
            let at = match e {
                LieError::SingularComponent(i)
                | LieError::ComponentNotAutomorphism(i)
                | LieError::ComponentLeavesSubalgebra(i) => component_spans[i - 1].clone(),
                _ => span_open.clone(),
            };
            ParseError::new(ParseErrorKind::InvalidDeclaration, e.to_string(), at)
        })?;
        self.declare(DeclKind::Subgroup, &name, &span)?;
        self.ws.subgroups.insert(
            name,
            SubgroupDecl {
                algebra: alg_name,
                spec,
                tangents,
            },
        );
        Ok(())
    }

    /// A square matrix whose size is read from its first row.
    fn matrix_any(&mut self) -> Result<Matrix, ParseError> {
        let save = self.pos;
        self.expect_punct('[')?;
        self.expect_punct('[')?;
        let mut n = 1;
        let mut depth = 0usize;
        while !(depth == 0 && self.peek_is(']')) {
            match &self.peek().tok {
                Tok::Punct('(') => depth += 1,
                Tok::Punct(')') => depth = depth.saturating_sub(1),
                Tok::Punct(',') if depth == 0 => n += 1,
                Tok::Eof => return Err(self.unexpected("`]`")),
                _ => {}
            }
            self.bump();
        }
        self.pos = save;
        self.matrix(n)
    }

    fn chart(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_punct('{')?;
        self.expect_keyword("coords")?;
        self.expect_punct('=')?;
        self.expect_punct('[')?;
        let mut coords: Vec<String> = Vec::new();
        loop {
            let (c, c_span) = self.expect_ident()?;
            if RESERVED.contains(&c.as_str()) {
                return Err(ParseError::new(
                    ParseErrorKind::InvalidDeclaration,
                    format!("`{c}` is a reserved word"),
                    c_span,
                ));
            }
            if coords.contains(&c) {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateName,
                    format!("coordinate `{c}` is listed twice"),
                    c_span,
                ));
            }
            if self.ws.kind_of(&c).is_some() || c == name {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateName,
                    format!("coordinate `{c}` clashes with a declared name"),
                    c_span,
                ));
            }
            coords.push(c);
            if self.peek_is(',') {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_punct(']')?;
        self.expect_punct('}')?;
        let chart = Chart::new(name.clone(), coords).map_err(|e| {
            ParseError::new(
                ParseErrorKind::InvalidDeclaration,
                e.to_string(),
                span.clone(),
            )
        })?;
        self.declare(DeclKind::Chart, &name, &span)?;
        self.ws.charts.insert(name, chart);
        Ok(())
    }

    fn function(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_punct('(')?;
        let mut args: Vec<String> = Vec::new();
        loop {
            let (a, a_span) = self.expect_ident()?;
            if !self.ws.charts.values().any(|c| c.index_of(&a).is_some()) {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownReference,
                    format!("`{a}` is not a coordinate of any declared chart"),
                    a_span,
                ));
            }
            if args.contains(&a) {
                return Err(ParseError::new(
                    ParseErrorKind::InvalidDeclaration,
                    format!("argument `{a}` is repeated"),
                    a_span,
                ));
            }
            args.push(a);
            if self.peek_is(',') {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_punct(')')?;
        let sym = FunctionSymbol::new(name.clone(), args).map_err(|e| {
            ParseError::new(
                ParseErrorKind::InvalidDeclaration,
                e.to_string(),
                span.clone(),
            )
        })?;
        self.declare(DeclKind::Function, &name, &span)?;
        self.ws.functions.insert(name, sym);
        Ok(())
    }

    fn tensor(&mut self, kw: &str) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_keyword("on")?;
        let (chart_name, chart) = self.chart_ref()?;
        self.expect_punct('=')?;
        let e = self.expr()?;
        let v = self.eval_in(Ctx::Chart(&chart), &e)?;
        match kw {
            "scalar" => {
                let value = eval::into_scalar(v, &e.span)?;
                self.declare(DeclKind::Scalar, &name, &span)?;
                self.ws.scalars.insert(
                    name,
                    ScalarDecl {
                        chart: chart_name,
                        value,
                    },
                );
            }
            "vectorfield" => {
                let x = eval::into_field(v, &chart, &e.span)?;
                self.declare(DeclKind::VectorField, &name, &span)?;
                self.ws.vector_fields.insert(name, x);
            }
            "form" => {
                let f = eval::into_form(v, &chart, &e.span)?;
                self.declare(DeclKind::Form, &name, &span)?;
                self.ws.forms.insert(name, f);
            }
            _ => {
                let c = eval::into_chain(v, &chart, &e.span)?;
                self.declare(DeclKind::Chain, &name, &span)?;
                self.ws.chains.insert(name, c);
            }
        }
        Ok(())
    }

    fn action(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_punct('{')?;
        self.expect_keyword("algebra")?;
        let (alg_name, alg_span) = self.expect_ident()?;
        self.lookup(DeclKind::LieAlgebra, "a Lie algebra", &alg_name, &alg_span)?;
        self.expect_keyword("chart")?;
        let (chart_name, chart) = self.chart_ref()?;
        self.expect_keyword("generators")?;
        self.expect_punct('=')?;
        let open = self.expect_punct('[')?;
        let mut generators = Vec::new();
        let mut fields = Vec::new();
        while !self.peek_is(']') {
            let (g, g_span) = self.expect_ident()?;
            self.lookup(DeclKind::VectorField, "a vector field", &g, &g_span)?;
            let field = self.ws.vector_fields[&g].clone();
            if field.chart().name() != chart.name() {
                return Err(ParseError::new(
                    ParseErrorKind::TypeError,
                    format!("generator `{g}` is not on chart `{chart_name}`"),
                    g_span,
                ));
            }
            generators.push(g);
            fields.push(field);
            if !self.peek_is(']') {
                self.expect_punct(',')?;
            }
        }
        self.bump();
        let algebra = self.ws.lie_algebras[&alg_name].clone();
        if fields.len() != algebra.dim() {
            return Err(self.error_at(
                ParseErrorKind::ArityMismatch,
                format!(
                    "algebra `{alg_name}` has dimension {}, but {} generators are listed",
                    algebra.dim(),
                    fields.len()
                ),
                &open,
            ));
        }
        self.expect_keyword("orbit_dim")?;
        let (q, q_span) = self.expect_small("orbit dimension")?;
        self.expect_punct('}')?;
        let spec = ActionSpec::new(name.clone(), algebra, fields, q).map_err(|e| {
            ParseError::new(ParseErrorKind::InvalidDeclaration, e.to_string(), q_span)
        })?;
        self.declare(DeclKind::Action, &name, &span)?;
        self.ws.actions.insert(
            name,
            ActionDecl {
                algebra: alg_name,
                chart: chart_name,
                generators,
                spec,
            },
        );
        Ok(())
    }

    fn point(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (name, span) = self.expect_ident()?;
        self.expect_keyword("on")?;
        let (chart_name, chart) = self.chart_ref()?;
        self.expect_punct('=')?;
        let open = self.expect_punct('(')?;
        let mut coords = vec![self.rational()?];
        while self.peek_is(',') {
            self.bump();
            coords.push(self.rational()?);
        }
        self.expect_punct(')')?;
        if coords.len() != chart.dim() {
            return Err(self.error_at(
                ParseErrorKind::ArityMismatch,
                format!(
                    "chart `{chart_name}` has {} coordinates, point gives {}",
                    chart.dim(),
                    coords.len()
                ),
                &open,
            ));
        }
        self.declare(DeclKind::Point, &name, &span)?;
        self.ws.points.insert(
            name,
            PointDecl {
                chart: chart_name,
                coords,
            },
        );
        Ok(())
    }

    // ---- checks ----

    fn check_arg(&mut self) -> Result<(CheckArg, SourceSpan), ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) => {
                let (n, span) = self.expect_small("integer argument")?;
                Ok((CheckArg::Int(n), span))
            }
            Tok::Ident(_) => {
                let (name, span) = self.expect_ident()?;
                if self.peek_is('=') {
                    self.bump();
                    let (rhs, _) = self.expect_ident()?;
                    return Ok((CheckArg::Pair(name, rhs), span));
                }
                Ok((CheckArg::Name(name), span))
            }
            Tok::Punct('[') => {
                self.bump();
                let mut items = Vec::new();
                while !self.peek_is(']') {
                    items.push(self.check_arg()?.0);
                    if !self.peek_is(']') {
                        self.expect_punct(',')?;
                    }
                }
                self.bump();
                Ok((CheckArg::List(items), self.span(&t)))
            }
            _ => Err(self.unexpected("a check argument")),
        }
    }

    fn check(&mut self) -> Result<(), ParseError> {
        self.bump();
        let (kind, kind_span) = self.expect_ident()?;
        let Some((_, params)) = CHECKS.iter().find(|(k, _)| *k == kind) else {
            let known: Vec<&str> = CHECKS.iter().map(|(k, _)| *k).collect();
            return Err(ParseError::new(
                ParseErrorKind::UnknownReference,
                format!(
                    "unknown check `{kind}`; expected one of {}",
                    known.join(", ")
                ),
                kind_span,
            ));
        };
        self.expect_punct('(')?;
        let mut args = Vec::new();
        while !self.peek_is(')') {
            args.push(self.check_arg()?);
            if !self.peek_is(')') {
                self.expect_punct(',')?;
            }
        }
        let close = self.bump();
        self.validate_check(&kind, params, &args, &close)?;
        self.ws.checks.push(CheckDirective {
            kind,
            args: args.into_iter().map(|(a, _)| a).collect(),
            span: kind_span,
        });
        Ok(())
    }

    fn validate_check(
        &self,
        kind: &str,
        params: &[Param],
        args: &[(CheckArg, SourceSpan)],
        close: &Token,
    ) -> Result<(), ParseError> {
        let mut action_chart: Option<String> = None;
        let mut action_algebra: Option<String> = None;
        let mut next = 0;
        for &p in params {
            let Some((arg, span)) = args.get(next) else {
                if optional(p) {
                    continue;
                }
                return Err(self.error_at(
                    ParseErrorKind::ArityMismatch,
                    format!("check `{kind}` is missing arguments"),
                    close,
                ));
            };
            match self.match_param(p, arg, span, &action_chart, &action_algebra)? {
                true => next += 1,
                false if optional(p) => continue,
                false => {
                    return Err(ParseError::new(
                        ParseErrorKind::TypeError,
                        format!("unexpected argument for check `{kind}`"),
                        span.clone(),
                    ))
                }
            }
            if p == Param::Action {
                if let CheckArg::Name(a) = arg {
                    action_chart = Some(self.ws.actions[a].chart.clone());
                    action_algebra = Some(self.ws.actions[a].algebra.clone());
                }
            }
            if p == Param::Algebra {
                if let CheckArg::Name(a) = arg {
                    action_algebra = Some(a.clone());
                }
            }
        }
        if let Some((_, span)) = args.get(next) {
            return Err(ParseError::new(
                ParseErrorKind::ArityMismatch,
                format!("too many arguments for check `{kind}`"),
                span.clone(),
            ));
        }
        Ok(())
    }

    /// Whether `arg` fits `p`; resolution failures are errors, shape
    /// mismatches return false so optional parameters can be skipped.
    fn match_param(
        &self,
        p: Param,
        arg: &CheckArg,
        span: &SourceSpan,
        chart: &Option<String>,
        algebra: &Option<String>,
    ) -> Result<bool, ParseError> {
        let name_of = |kinds: &[DeclKind], what: &str, name: &str| -> Result<bool, ParseError> {
            match self.ws.kind_of(name) {
                None => Err(ParseError::new(
                    ParseErrorKind::UnknownReference,
                    format!("unknown name `{name}`"),
                    span.clone(),
                )),
                Some(k) if kinds.contains(&k) => {
                    self.same_home(k, name, span, chart, algebra)?;
                    Ok(true)
                }
                Some(_) => Err(ParseError::new(
                    ParseErrorKind::TypeError,
                    format!("`{name}` is not {what}"),
                    span.clone(),
                )),
            }
        };
        let list_of = |kind: DeclKind, what: &str| -> Result<bool, ParseError> {
            let CheckArg::List(items) = arg else {
                return Ok(false);
            };
            for item in items {
                match item {
                    CheckArg::Name(n) => {
                        name_of(&[kind], what, n)?;
                    }
                    _ => {
                        return Err(ParseError::new(
                            ParseErrorKind::TypeError,
                            format!("list entries must be names of {what}s"),
                            span.clone(),
                        ))
                    }
                }
            }
            Ok(true)
        };
        match p {
            Param::Degree => Ok(matches!(arg, CheckArg::Int(_))),
            Param::Forms => list_of(DeclKind::Form, "a form"),
            Param::Fields => list_of(DeclKind::VectorField, "a vector field"),
            Param::Points => list_of(DeclKind::Point, "a point"),
            Param::PointSubgroups => {
                let CheckArg::List(items) = arg else {
                    return Ok(false);
                };
                for item in items {
                    let CheckArg::Pair(pt, sub) = item else {
                        return Err(ParseError::new(
                            ParseErrorKind::TypeError,
                            "expected POINT=SUBGROUP entries",
                            span.clone(),
                        ));
                    };
                    name_of(&[DeclKind::Point], "a point", pt)?;
                    name_of(&[DeclKind::Subgroup], "a subgroup", sub)?;
                }
                Ok(true)
            }
            _ => {
                let CheckArg::Name(name) = arg else {
                    return Ok(false);
                };
                let (kinds, what): (&[DeclKind], &str) = match p {
                    Param::Algebra => (&[DeclKind::LieAlgebra], "a Lie algebra"),
                    Param::Subgroup => {
                        match self.ws.kind_of(name) {
                            Some(DeclKind::Subgroup) | None => {}
                            Some(_) => return Ok(false),
                        }
                        (&[DeclKind::Subgroup], "a subgroup")
                    }
                    Param::Action => (&[DeclKind::Action], "an action"),
                    Param::Object => (
                        &[
                            DeclKind::Form,
                            DeclKind::VectorField,
                            DeclKind::Chain,
                            DeclKind::Scalar,
                        ],
                        "a form, vector field, chain or scalar",
                    ),
                    Param::Chain => (&[DeclKind::Chain], "a chain"),
                    Param::Form => (&[DeclKind::Form], "a form"),
                    Param::Field => (&[DeclKind::VectorField], "a vector field"),
                    Param::Scalar => (&[DeclKind::Scalar], "a scalar"),
                    Param::Point => (&[DeclKind::Point], "a point"),
                    _ => unreachable!("list parameters handled above"),
                };
                name_of(kinds, what, name)
            }
        }
    }

    /// Objects named after an action must share its chart; subgroups must
    /// belong to the algebra in play.
    fn same_home(
        &self,
        kind: DeclKind,
        name: &str,
        span: &SourceSpan,
        chart: &Option<String>,
        algebra: &Option<String>,
    ) -> Result<(), ParseError> {
        let home = match kind {
            DeclKind::Form => Some(self.ws.forms[name].chart().name().to_string()),
            DeclKind::VectorField => Some(self.ws.vector_fields[name].chart().name().to_string()),
            DeclKind::Chain => Some(self.ws.chains[name].chart().name().to_string()),
            DeclKind::Scalar => Some(self.ws.scalars[name].chart.clone()),
            DeclKind::Point => Some(self.ws.points[name].chart.clone()),
            _ => None,
        };
        if let (Some(h), Some(c)) = (&home, chart) {
            if h != c {
                return Err(ParseError::new(
                    ParseErrorKind::TypeError,
                    format!("`{name}` lives on chart `{h}`, the action on `{c}`"),
                    span.clone(),
                ));
            }
        }
        if kind == DeclKind::Subgroup {
            if let Some(a) = algebra {
                let own = &self.ws.subgroups[name].algebra;
                if own != a {
                    return Err(ParseError::new(
                        ParseErrorKind::TypeError,
                        format!("subgroup `{name}` belongs to `{own}`, not `{a}`"),
                        span.clone(),
                    ));
                }
            }
        }
        Ok(())
    }
}
