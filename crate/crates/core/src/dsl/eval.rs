use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{ParseError, ParseErrorKind, SourceSpan, Workspace};
use crate::chart::{Chart, ChartError, DiffForm, MultiVectorField, VectorField};
use crate::scalar::{Rational, ScalarError, ScalarExpr};

#[derive(Clone, Debug)]
pub(crate) enum ExprKind {
    Int(BigInt),
    Ident(String),
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
}

/// Expression tree; `span` is the token that best locates errors in the node.
#[derive(Clone, Debug)]
pub(crate) struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub(crate) enum Value {
    Scalar(ScalarExpr),
    Form(DiffForm),
    Multi(MultiVectorField),
    Lie(Vec<Rational>),
}

impl Value {
    fn describe(&self) -> String {
        match self {
            Value::Scalar(_) => "a scalar".into(),
            Value::Form(f) => format!("a {}-form", f.degree()),
            Value::Multi(m) if m.degree() == 1 => "a vector field".into(),
            Value::Multi(m) => format!("a {}-vector field", m.degree()),
            Value::Lie(_) => "an algebra element".into(),
        }
    }

    fn is_zero_scalar(&self) -> bool {
        matches!(self, Value::Scalar(s) if s.is_zero())
    }
}

/// What bare identifiers may denote while evaluating.
#[derive(Clone, Copy)]
pub(crate) enum Ctx<'a> {
    /// Rational constants only.
    Constant,
    /// Linear combinations of e1..e_dim.
    Lie(usize),
    Chart(&'a Arc<Chart>),
}

pub(crate) struct Evaluator<'a> {
    pub ws: &'a Workspace,
    pub ctx: Ctx<'a>,
}

fn err(kind: ParseErrorKind, msg: impl Into<String>, span: &SourceSpan) -> ParseError {
    ParseError::new(kind, msg, span.clone())
}

fn type_err(msg: impl Into<String>, span: &SourceSpan) -> ParseError {
    err(ParseErrorKind::TypeError, msg, span)
}

fn chart_err(e: ChartError, span: &SourceSpan) -> ParseError {
    match e {
        ChartError::Scalar(ScalarError::DivisionByZeroExpr) => err(
            ParseErrorKind::InvalidDeclaration,
            "division by an expression that is identically zero",
            span,
        ),
        other => type_err(other.to_string(), span),
    }
}

impl Evaluator<'_> {
    pub fn eval(&self, e: &Expr) -> Result<Value, ParseError> {
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Scalar(ScalarExpr::constant(Rational::from_integer(
                n.clone(),
            )))),
            ExprKind::Ident(name) => self.ident(name, &e.span),
            ExprKind::Call(name, args) => self.call(name, args, &e.span),
            ExprKind::Neg(inner) => Ok(negate(self.eval(inner)?)),
            ExprKind::Bin(op, a, b) => {
                let lhs = self.eval(a)?;
                let rhs = self.eval(b)?;
                match op {
                    '+' => add(lhs, rhs, &e.span),
                    '-' => add(lhs, negate(rhs), &e.span),
                    '*' => mul(lhs, rhs, &e.span),
                    '/' => div(lhs, rhs, &e.span),
                    '^' => caret(lhs, rhs, &e.span),
                    _ => unreachable!("parser emits only arithmetic operators"),
                }
            }
        }
    }

    fn ident(&self, name: &str, span: &SourceSpan) -> Result<Value, ParseError> {
        match self.ctx {
            Ctx::Constant => Err(err(
                ParseErrorKind::UnknownReference,
                format!("`{name}` is not allowed in a constant expression"),
                span,
            )),
            Ctx::Lie(dim) => {
                let idx = name
                    .strip_prefix('e')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1 && k <= dim && !name[1..].starts_with('0'));
                match idx {
                    Some(k) => {
                        let mut v = vec![Rational::zero(); dim];
                        v[k - 1] = Rational::from_integer(1.into());
                        Ok(Value::Lie(v))
                    }
                    None => Err(err(
                        ParseErrorKind::UnknownReference,
                        format!("`{name}` is not a basis element e1..e{dim}"),
                        span,
                    )),
                }
            }
            Ctx::Chart(chart) => self.chart_ident(chart, name, span),
        }
    }

    fn chart_ident(
        &self,
        chart: &Arc<Chart>,
        name: &str,
        span: &SourceSpan,
    ) -> Result<Value, ParseError> {
        if chart.index_of(name).is_some() {
            return Ok(Value::Scalar(ScalarExpr::coord(name)));
        }
        let ws = self.ws;
        let on_chart = |c: &Arc<Chart>| -> Result<(), ParseError> {
            if c.name() == chart.name() {
                Ok(())
            } else {
                Err(type_err(
                    format!(
                        "`{name}` lives on chart `{}`, not `{}`",
                        c.name(),
                        chart.name()
                    ),
                    span,
                ))
            }
        };
        if let Some(s) = ws.scalars.get(name) {
            on_chart(&ws.charts[&s.chart])?;
            return Ok(Value::Scalar(s.value.clone()));
        }
        if let Some(f) = ws.forms.get(name) {
            on_chart(f.chart())?;
            return Ok(Value::Form(f.clone()));
        }
        if let Some(x) = ws.vector_fields.get(name) {
            on_chart(x.chart())?;
            return Ok(Value::Multi(MultiVectorField::from_vector_field(x)));
        }
        if let Some(c) = ws.chains.get(name) {
            on_chart(c.chart())?;
            return Ok(Value::Multi(c.clone()));
        }
        if let Some(f) = ws.functions.get(name) {
            return Err(err(
                ParseErrorKind::ArityMismatch,
                format!(
                    "function `{name}` must be applied to ({})",
                    f.args().join(", ")
                ),
                span,
            ));
        }
        if ws.kind_of(name).is_some() {
            return Err(type_err(
                format!("`{name}` cannot appear in an expression"),
                span,
            ));
        }
        Err(err(
            ParseErrorKind::UnknownReference,
            format!("unknown name `{name}` on chart `{}`", chart.name()),
            span,
        ))
    }

    fn coordinate_arg(&self, chart: &Chart, e: &Expr) -> Result<usize, ParseError> {
        match &e.kind {
            ExprKind::Ident(c) => chart.index_of(c).ok_or_else(|| {
                err(
                    ParseErrorKind::UnknownReference,
                    format!("`{c}` is not a coordinate of chart `{}`", chart.name()),
                    &e.span,
                )
            }),
            _ => Err(type_err("expected a coordinate name", &e.span)),
        }
    }

    fn call(&self, name: &str, args: &[Expr], span: &SourceSpan) -> Result<Value, ParseError> {
        let chart = match self.ctx {
            Ctx::Chart(c) => c,
            _ => {
                return Err(err(
                    ParseErrorKind::UnknownReference,
                    format!("`{name}(...)` is only meaningful on a chart"),
                    span,
                ))
            }
        };
        match name {
            "D" => {
                if args.is_empty() {
                    return Err(err(
                        ParseErrorKind::ArityMismatch,
                        "D needs arguments",
                        span,
                    ));
                }
                if args.len() == 1 {
                    let i = self.coordinate_arg(chart, &args[0])?;
                    return Ok(Value::Multi(MultiVectorField::from_vector_field(
                        &VectorField::basis(chart.clone(), i),
                    )));
                }
                let mut f = match self.eval(&args[0])? {
                    Value::Scalar(s) => s,
                    other => {
                        return Err(type_err(
                            format!("D differentiates scalars, found {}", other.describe()),
                            &args[0].span,
                        ))
                    }
                };
                for a in &args[1..] {
                    let i = self.coordinate_arg(chart, a)?;
                    f = f.partial(&chart.coords()[i]);
                }
                Ok(Value::Scalar(f))
            }
            "d" => {
                if args.len() != 1 {
                    return Err(err(
                        ParseErrorKind::ArityMismatch,
                        format!("d takes one argument, found {}", args.len()),
                        span,
                    ));
                }
                let form = match self.eval(&args[0])? {
                    Value::Scalar(s) => DiffForm::function(chart.clone(), s),
                    Value::Form(f) => f,
                    other => {
                        return Err(type_err(
                            format!("d applies to forms, found {}", other.describe()),
                            &args[0].span,
                        ))
                    }
                };
                form.exterior_derivative()
                    .map(Value::Form)
                    .map_err(|e| chart_err(e, span))
            }
            "wedge" => {
                if args.is_empty() {
                    return Err(err(
                        ParseErrorKind::ArityMismatch,
                        "wedge needs arguments",
                        span,
                    ));
                }
                let mut acc = self.eval(&args[0])?;
                for a in &args[1..] {
                    let next = self.eval(a)?;
                    acc = wedge(acc, next, &a.span)?;
                }
                Ok(acc)
            }
            _ => self.function_call(chart, name, args, span),
        }
    }

    fn function_call(
        &self,
        chart: &Chart,
        name: &str,
        args: &[Expr],
        span: &SourceSpan,
    ) -> Result<Value, ParseError> {
        let Some(sym) = self.ws.functions.get(name) else {
            let kind = if self.ws.kind_of(name).is_some() {
                ParseErrorKind::TypeError
            } else {
                ParseErrorKind::UnknownReference
            };
            return Err(err(
                kind,
                format!("`{name}` is not a declared function"),
                span,
            ));
        };
        if args.len() != sym.args().len() {
            return Err(err(
                ParseErrorKind::ArityMismatch,
                format!(
                    "function `{name}` takes {} argument(s), found {}",
                    sym.args().len(),
                    args.len()
                ),
                span,
            ));
        }
        for (a, expected) in args.iter().zip(sym.args()) {
            let i = self.coordinate_arg(chart, a)?;
            if &chart.coords()[i] != expected {
                return Err(type_err(
                    format!(
                        "function `{name}` is declared as {name}({})",
                        sym.args().join(", ")
                    ),
                    &a.span,
                ));
            }
        }
        Ok(Value::Scalar(ScalarExpr::symbol(sym.clone())))
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(s.neg()),
        Value::Form(f) => Value::Form(f.neg()),
        Value::Multi(m) => Value::Multi(m.neg()),
        Value::Lie(v) => Value::Lie(v.into_iter().map(|c| -c).collect()),
    }
}

fn mismatch(op: &str, a: &Value, b: &Value, span: &SourceSpan) -> ParseError {
    type_err(
        format!("cannot {op} {} and {}", a.describe(), b.describe()),
        span,
    )
}

fn add(a: Value, b: Value, span: &SourceSpan) -> Result<Value, ParseError> {
    if a.is_zero_scalar() && !matches!(b, Value::Scalar(_)) {
        return Ok(b);
    }
    if b.is_zero_scalar() && !matches!(a, Value::Scalar(_)) {
        return Ok(a);
    }
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.add(&y))),
        (Value::Form(x), Value::Form(y)) if x.degree() == y.degree() => {
            x.add(&y).map(Value::Form).map_err(|e| chart_err(e, span))
        }
        (Value::Multi(x), Value::Multi(y)) if x.degree() == y.degree() => {
            x.add(&y).map(Value::Multi).map_err(|e| chart_err(e, span))
        }
        (Value::Lie(x), Value::Lie(y)) => Ok(Value::Lie(
            x.into_iter().zip(y).map(|(p, q)| p + q).collect(),
        )),
        (a, b) => Err(mismatch("add", &a, &b, span)),
    }
}

fn scale(s: &ScalarExpr, v: Value, span: &SourceSpan) -> Result<Value, ParseError> {
    match v {
        Value::Scalar(x) => Ok(Value::Scalar(s.mul(&x))),
        Value::Form(f) => Ok(Value::Form(f.scale(s))),
        Value::Multi(m) => Ok(Value::Multi(m.scale(s))),
        Value::Lie(v) => match s.as_constant() {
            Some(c) => Ok(Value::Lie(v.into_iter().map(|x| x * &c).collect())),
            None => Err(type_err(
                "algebra elements take constant coefficients",
                span,
            )),
        },
    }
}

fn mul(a: Value, b: Value, span: &SourceSpan) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Scalar(s), v) | (v, Value::Scalar(s)) => scale(&s, v, span),
        (a, b) => Err(type_err(
            format!(
                "cannot multiply {} by {}; use ^ or wedge for exterior products",
                a.describe(),
                b.describe()
            ),
            span,
        )),
    }
}

fn div(a: Value, b: Value, span: &SourceSpan) -> Result<Value, ParseError> {
    let Value::Scalar(den) = b else {
        return Err(type_err(format!("cannot divide by {}", b.describe()), span));
    };
    let inv = den.recip().map_err(|_| {
        err(
            ParseErrorKind::InvalidDeclaration,
            "division by an expression that is identically zero",
            span,
        )
    })?;
    scale(&inv, a, span)
}

fn wedge(a: Value, b: Value, span: &SourceSpan) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Scalar(s), v) | (v, Value::Scalar(s)) if !matches!(v, Value::Lie(_)) => {
            scale(&s, v, span)
        }
        (Value::Form(x), Value::Form(y)) => {
            x.wedge(&y).map(Value::Form).map_err(|e| chart_err(e, span))
        }
        (Value::Multi(x), Value::Multi(y)) => x
            .wedge(&y)
            .map(Value::Multi)
            .map_err(|e| chart_err(e, span)),
        (a, b) => Err(mismatch("wedge", &a, &b, span)),
    }
}

/// `^` is an integer power on scalars and the exterior product otherwise.
fn caret(a: Value, b: Value, span: &SourceSpan) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Scalar(base), Value::Scalar(exp)) => {
            let e = exp
                .as_constant()
                .filter(|c| c.is_integer())
                .and_then(|c| c.to_integer().to_i64())
                .ok_or_else(|| type_err("exponent must be an integer constant", span))?;
            base.pow(e).map(Value::Scalar).map_err(|_| {
                err(
                    ParseErrorKind::InvalidDeclaration,
                    "negative power of an expression that is identically zero",
                    span,
                )
            })
        }
        (a, b) => wedge(a, b, span),
    }
}

pub(crate) fn into_scalar(v: Value, span: &SourceSpan) -> Result<ScalarExpr, ParseError> {
    match v {
        Value::Scalar(s) => Ok(s),
        other => Err(type_err(
            format!("expected a scalar, found {}", other.describe()),
            span,
        )),
    }
}

pub(crate) fn into_rational(v: Value, span: &SourceSpan) -> Result<Rational, ParseError> {
    into_scalar(v, span)?
        .as_constant()
        .ok_or_else(|| type_err("expected a rational constant", span))
}

pub(crate) fn into_lie(
    v: Value,
    dim: usize,
    span: &SourceSpan,
) -> Result<Vec<Rational>, ParseError> {
    match v {
        Value::Lie(v) => Ok(v),
        v if v.is_zero_scalar() => Ok(vec![Rational::zero(); dim]),
        other => Err(type_err(
            format!(
                "expected a combination of e1..e{dim}, found {}",
                other.describe()
            ),
            span,
        )),
    }
}

pub(crate) fn into_form(
    v: Value,
    chart: &Arc<Chart>,
    span: &SourceSpan,
) -> Result<DiffForm, ParseError> {
    match v {
        Value::Scalar(s) => Ok(DiffForm::function(chart.clone(), s)),
        Value::Form(f) => Ok(f),
        other => Err(type_err(
            format!("expected a form, found {}", other.describe()),
            span,
        )),
    }
}

pub(crate) fn into_field(
    v: Value,
    chart: &Arc<Chart>,
    span: &SourceSpan,
) -> Result<VectorField, ParseError> {
    match v {
        Value::Multi(m) if m.degree() == 1 => {
            let comps = (0..chart.dim()).map(|i| m.coefficient(&[i])).collect();
            VectorField::new(chart.clone(), comps).map_err(|e| chart_err(e, span))
        }
        v if v.is_zero_scalar() => Ok(VectorField::zero(chart.clone())),
        other => Err(type_err(
            format!("expected a vector field, found {}", other.describe()),
            span,
        )),
    }
}

pub(crate) fn into_chain(
    v: Value,
    chart: &Arc<Chart>,
    span: &SourceSpan,
) -> Result<MultiVectorField, ParseError> {
    match v {
        Value::Multi(m) => Ok(m),
        Value::Scalar(s) => MultiVectorField::from_terms(chart.clone(), 0, [(vec![], s)])
            .map_err(|e| chart_err(e, span)),
        other => Err(type_err(
            format!("expected a multivector field, found {}", other.describe()),
            span,
        )),
    }
}
