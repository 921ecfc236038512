use super::{FunctionSymbol, Rational, ScalarError, ScalarExpr};

/// An unnormalized expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr {
    Num(Rational),
    Coord(String),
    Func(FunctionSymbol),
    Deriv(Box<RawExpr>, String),
    Add(Box<RawExpr>, Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Mul(Box<RawExpr>, Box<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Neg(Box<RawExpr>),
    Pow(Box<RawExpr>, i64),
}

/// Brings a raw tree into canonical form.
pub fn normalize(raw: &RawExpr) -> Result<ScalarExpr, ScalarError> {
    Ok(match raw {
        RawExpr::Num(c) => ScalarExpr::constant(c.clone()),
        RawExpr::Coord(c) => ScalarExpr::coord(c.clone()),
        RawExpr::Func(s) => ScalarExpr::symbol(s.clone()),
        RawExpr::Deriv(e, c) => normalize(e)?.partial(c),
        RawExpr::Add(a, b) => normalize(a)?.add(&normalize(b)?),
        RawExpr::Sub(a, b) => normalize(a)?.sub(&normalize(b)?),
        RawExpr::Mul(a, b) => normalize(a)?.mul(&normalize(b)?),
        RawExpr::Div(a, b) => normalize(a)?.checked_div(&normalize(b)?)?,
        RawExpr::Neg(a) => normalize(a)?.neg(),
        RawExpr::Pow(a, e) => normalize(a)?.pow(*e)?,
    })
}

impl From<&ScalarExpr> for RawExpr {
    /// An expanded tree that normalizes back to the same value.
    fn from(e: &ScalarExpr) -> RawExpr {
        let num = poly_tree(e.numerator());
        if e.denominator().is_one() {
            num
        } else {
            RawExpr::Div(Box::new(num), Box::new(poly_tree(e.denominator())))
        }
    }
}

fn symbol_tree(s: &FunctionSymbol) -> RawExpr {
    let mut t = RawExpr::Func(s.base());
    for (arg, &k) in s.args().iter().zip(s.orders()) {
        for _ in 0..k {
            t = RawExpr::Deriv(Box::new(t), arg.clone());
        }
    }
    t
}

fn poly_tree(p: &super::poly::Poly) -> RawExpr {
    let mut sum: Option<RawExpr> = None;
    for (term, c) in &p.terms {
        let mut prod = RawExpr::Num(c.clone());
        for (x, k) in &term.coords {
            let f = RawExpr::Pow(Box::new(RawExpr::Coord(x.clone())), i64::from(*k));
            prod = RawExpr::Mul(Box::new(prod), Box::new(f));
        }
        for (s, k) in &term.symbols {
            let f = RawExpr::Pow(Box::new(symbol_tree(s)), i64::from(*k));
            prod = RawExpr::Mul(Box::new(prod), Box::new(f));
        }
        sum = Some(match sum {
            None => prod,
            Some(acc) => RawExpr::Add(Box::new(acc), Box::new(prod)),
        });
    }
    sum.unwrap_or_else(|| RawExpr::Num(Rational::from_integer(0.into())))
}
