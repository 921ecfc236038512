use std::fmt::Write;

use itertools::Itertools;

use super::{CheckArg, DeclKind, Workspace};
use crate::chart::{fmt_linear, Chart, DiffForm, MultiVectorField, VectorField};
use crate::lie::format_lie_vector;
use crate::linalg::Matrix;
use crate::scalar::Rational;

fn rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn matrix(m: &Matrix) -> String {
    let rows = m
        .row_vectors()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(rational).join(", ")))
        .join(", ");
    format!("[{rows}]")
}

fn first_coord(chart: &Chart, n: usize) -> Vec<usize> {
    (0..n.min(chart.dim())).collect()
}

pub(crate) fn field_source(x: &VectorField) -> String {
    if x.is_zero() {
        return format!("0*D({})", x.chart().coords()[0]);
    }
    x.to_string()
}

pub(crate) fn form_source(f: &DiffForm) -> String {
    if f.degree() > 0 && f.is_zero() {
        let idx = first_coord(f.chart(), f.degree());
        let basis = idx
            .iter()
            .map(|&i| format!("d({})", f.chart().coords()[i]))
            .join("^");
        return format!("0*{basis}");
    }
    f.to_string()
}

fn chain_basis(chart: &Chart, idx: &[usize]) -> String {
    let parts: Vec<String> = idx
        .iter()
        .map(|&i| format!("D({})", chart.coords()[i]))
        .collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("wedge({})", parts.join(", "))
    }
}

/// Chains render through `wedge(...)`, e.g. `K(z)*wedge(D(y), D(z))`.
pub(crate) fn chain_source(c: &MultiVectorField) -> String {
    if c.degree() == 0 {
        return c.coefficient(&[]).to_string();
    }
    if c.is_zero() {
        let idx = first_coord(c.chart(), c.degree());
        return format!("0*{}", chain_basis(c.chart(), &idx));
    }
    fmt_linear(
        c.coefficients()
            .map(|(idx, coef)| (coef, chain_basis(c.chart(), idx))),
        false,
    )
}

fn check_arg(a: &CheckArg) -> String {
    match a {
        CheckArg::Name(n) => n.clone(),
        CheckArg::Int(n) => n.to_string(),
        CheckArg::List(items) => format!("[{}]", items.iter().map(check_arg).join(", ")),
        CheckArg::Pair(a, b) => format!("{a}={b}"),
    }
}

/// Canonical source text; parsing it yields a structurally equal workspace.
pub fn render_workspace(ws: &Workspace) -> String {
    let mut out = String::new();
    for (kind, name) in &ws.order {
        match kind {
            DeclKind::LieAlgebra => {
                let l = &ws.lie_algebras[name];
                let _ = writeln!(out, "lie_algebra {name} {{\n  dim {}", l.dim());
                for ((i, j), v) in l.brackets() {
                    let _ = writeln!(
                        out,
                        "  bracket [{},{}] = {}",
                        i + 1,
                        j + 1,
                        format_lie_vector(&v, l.labels())
                    );
                }
                out.push_str("}\n");
            }
            DeclKind::Subgroup => {
                let s = &ws.subgroups[name];
                let labels = ws.lie_algebras[&s.algebra].labels();
                let span = s
                    .spec
                    .basis
                    .iter()
                    .map(|v| format_lie_vector(v, labels))
                    .join(", ");
                let _ = writeln!(
                    out,
                    "subgroup {name} of {} {{\n  span = [{span}]",
                    s.algebra
                );
                for (k, m) in s.spec.components.iter().enumerate() {
                    let _ = write!(out, "  component {}", matrix(m));
                    if let Some(Some(t)) = s.tangents.get(k) {
                        let _ = write!(out, " tangent {}", matrix(t));
                    }
                    out.push('\n');
                }
                out.push_str("}\n");
            }
            DeclKind::Chart => {
                let c = &ws.charts[name];
                let _ = writeln!(
                    out,
                    "chart {name} {{ coords = [{}] }}",
                    c.coords().join(", ")
                );
            }
            DeclKind::Function => {
                let f = &ws.functions[name];
                let _ = writeln!(out, "function {name}({})", f.args().join(", "));
            }
            DeclKind::Scalar => {
                let s = &ws.scalars[name];
                let _ = writeln!(out, "scalar {name} on {} = {}", s.chart, s.value);
            }
            DeclKind::VectorField => {
                let x = &ws.vector_fields[name];
                let _ = writeln!(
                    out,
                    "vectorfield {name} on {} = {}",
                    x.chart().name(),
                    field_source(x)
                );
            }
            DeclKind::Form => {
                let f = &ws.forms[name];
                let _ = writeln!(
                    out,
                    "form {name} on {} = {}",
                    f.chart().name(),
                    form_source(f)
                );
            }
            DeclKind::Chain => {
                let c = &ws.chains[name];
                let _ = writeln!(
                    out,
                    "chain {name} on {} = {}",
                    c.chart().name(),
                    chain_source(c)
                );
            }
            DeclKind::Action => {
                let a = &ws.actions[name];
                let _ = writeln!(
                    out,
                    "action {name} {{\n  algebra {}\n  chart {}\n  generators = [{}]\n  orbit_dim {}\n}}",
                    a.algebra,
                    a.chart,
                    a.generators.join(", "),
                    a.spec.orbit_dim()
                );
            }
            DeclKind::Point => {
                let p = &ws.points[name];
                let _ = writeln!(
                    out,
                    "point {name} on {} = ({})",
                    p.chart,
                    p.coords.iter().map(rational).join(", ")
                );
            }
        }
    }
    for c in &ws.checks {
        let _ = writeln!(
            out,
            "check {}({})",
            c.kind,
            c.args.iter().map(check_arg).join(", ")
        );
    }
    out
}
