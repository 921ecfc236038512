use num_traits::{One, Signed};

use super::{FunctionSymbol, Poly, Rational, ScalarExpr, Term};

fn rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn primes(n: u32) -> String {
    match n {
        1 => "\u{2032}".into(),
        2 => "\u{2033}".into(),
        3 => "\u{2034}".into(),
        _ => format!("^({n})"),
    }
}

pub(super) fn symbol(s: &FunctionSymbol, pretty: bool) -> String {
    let args = s.args().join(", ");
    let base = format!("{}({})", s.name(), args);
    if s.is_underived() {
        return base;
    }
    if pretty {
        if s.args().len() == 1 {
            return format!("{}{}({})", s.name(), primes(s.orders()[0]), args);
        }
        let subs: String = s
            .args()
            .iter()
            .zip(s.orders())
            .flat_map(|(a, &o)| std::iter::repeat_n(a.as_str(), o as usize))
            .collect::<Vec<_>>()
            .join("");
        return format!("{}_{}({})", s.name(), subs, args);
    }
    let wrt: Vec<&str> = s
        .args()
        .iter()
        .zip(s.orders())
        .flat_map(|(a, &o)| std::iter::repeat_n(a.as_str(), o as usize))
        .collect();
    format!("D({}, {})", base, wrt.join(", "))
}

fn power(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// Renders one term as (is_negative, body without sign).
fn term(c: &Rational, t: &Term, pretty: bool) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let mut factors: Vec<String> = Vec::new();
    for (s, e) in &t.symbols {
        factors.push(power(symbol(s, pretty), *e));
    }
    for (x, e) in &t.coords {
        factors.push(power(x.clone(), *e));
    }
    if factors.is_empty() {
        return (neg, rational(&a));
    }
    if !a.is_one() {
        factors.insert(0, rational(&a));
    }
    (neg, factors.join("*"))
}

pub(crate) fn poly(p: &Poly, pretty: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (t, c)) in p.terms.iter().enumerate() {
        let (neg, body) = term(c, t, pretty);
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

pub(super) fn render(e: &ScalarExpr, pretty: bool) -> String {
    let num = poly(e.numerator(), pretty);
    let den = e.denominator();
    if den.is_one() {
        return num;
    }
    let num = if e.numerator().len() > 1 {
        format!("({num})")
    } else {
        num
    };
    let single_factor = den.len() == 1
        && den
            .terms
            .iter()
            .next()
            .is_some_and(|(t, c)| c.is_one() && t.factor_count() == 1);
    let d = poly(den, pretty);
    if single_factor {
        format!("{num}/{d}")
    } else {
        format!("{num}/({d})")
    }
}

/// Whether the rendered form is a single signed product (no top-level sum
/// or quotient), so it can be juxtaposed with `*` without parentheses.
pub(crate) fn is_product(e: &ScalarExpr) -> bool {
    e.denominator().is_one() && e.numerator().len() <= 1
}
