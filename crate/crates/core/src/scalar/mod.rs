//! Exact coefficient arithmetic.
//!
//! A [`ScalarExpr`] is a fraction of two differential polynomials over the
//! rationals. Indeterminates are chart coordinates and formal derivatives of
//! declared function symbols such as `K(z)`. Fractions are not reduced by a
//! polynomial gcd; only common monomial factors and constant ratios are
//! cancelled. Equality of values is decided by cross-multiplication.

mod display;
mod poly;
mod raw;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

pub use raw::{normalize, RawExpr};

pub(crate) use poly::{Poly, Term};

/// Ground field for every exact computation.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by an expression that normalizes to zero")]
    DivisionByZeroExpr,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("function symbol `{0}` has no numeric value")]
    UnresolvedFunctionSymbol(String),
    #[error("expression has a pole at the given point")]
    PoleAtPoint,
    #[error("no value supplied for coordinate `{0}`")]
    MissingCoordinateValue(String),
    #[error("invalid function symbol: {0}")]
    InvalidSymbol(String),
}

/// A formal function of some chart coordinates, possibly differentiated.
///
/// `orders[i]` counts formal derivatives with respect to `args[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol {
    name: String,
    args: Vec<String>,
    orders: Vec<u32>,
}

impl FunctionSymbol {
    pub fn new<S: Into<String>>(name: S, args: Vec<String>) -> Result<Self, ScalarError> {
        let name = name.into();
        if args.is_empty() {
            return Err(ScalarError::InvalidSymbol(format!(
                "`{name}` has no arguments"
            )));
        }
        let distinct: BTreeSet<&String> = args.iter().collect();
        if distinct.len() != args.len() {
            return Err(ScalarError::InvalidSymbol(format!(
                "`{name}` repeats an argument"
            )));
        }
        let orders = vec![0; args.len()];
        Ok(FunctionSymbol { name, args, orders })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn is_underived(&self) -> bool {
        self.orders.iter().all(|&o| o == 0)
    }

    /// The same symbol with all derivative orders reset.
    pub fn base(&self) -> FunctionSymbol {
        FunctionSymbol {
            name: self.name.clone(),
            args: self.args.clone(),
            orders: vec![0; self.args.len()],
        }
    }

    /// Formal derivative; `None` when `coord` is not an argument.
    pub fn differentiate(&self, coord: &str) -> Option<FunctionSymbol> {
        let pos = self.args.iter().position(|a| a == coord)?;
        let mut d = self.clone();
        d.orders[pos] += 1;
        Some(d)
    }
}

/// A canonical fraction of differential polynomials.
///
/// Invariants: the denominator is nonzero, its leading coefficient is one,
/// numerator and denominator share no monomial factor, and the zero value is
/// stored as `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ScalarExpr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ScalarExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ScalarExpr::constant(Rational::from_integer(n.into()))
    }

    pub fn coord<S: Into<String>>(name: S) -> Self {
        let term = Term {
            coords: vec![(name.into(), 1)],
            symbols: Vec::new(),
        };
        ScalarExpr {
            num: Poly::monomial(term, Rational::one()),
            den: Poly::one(),
        }
    }

    pub fn symbol(sym: FunctionSymbol) -> Self {
        let term = Term {
            coords: Vec::new(),
            symbols: vec![(sym, 1)],
        };
        ScalarExpr {
            num: Poly::monomial(term, Rational::one()),
            den: Poly::one(),
        }
    }

    fn from_parts(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return ScalarExpr::zero();
        }
        let (mut num, mut den) = (num, den);
        if let (Some(a), Some(b)) = (num.monomial_content(), den.monomial_content()) {
            let common = a.gcd(&b);
            if !common.is_one() {
                num = num.div_monomial(&common);
                den = den.div_monomial(&common);
            }
        }
        if let Some(k) = num.constant_ratio(&den) {
            return ScalarExpr::constant(k);
        }
        let lc = den
            .leading_coefficient()
            .cloned()
            .unwrap_or_else(Rational::one);
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarExpr { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// The rational value when the expression is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Mathematical equality by cross-multiplication.
    pub fn equals(&self, other: &ScalarExpr) -> bool {
        if self == other {
            return true;
        }
        self.num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den))
            .is_zero()
    }

    pub fn contains_symbols(&self) -> bool {
        self.num.has_symbols() || self.den.has_symbols()
    }

    pub fn coordinates(&self) -> BTreeSet<String> {
        self.num
            .coordinates()
            .chain(self.den.coordinates())
            .map(str::to_string)
            .collect()
    }

    pub fn symbols(&self) -> BTreeSet<FunctionSymbol> {
        self.num
            .symbols()
            .chain(self.den.symbols())
            .cloned()
            .collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub(crate) fn numerator(&self) -> &Poly {
        &self.num
    }

    pub(crate) fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn add(&self, other: &ScalarExpr) -> ScalarExpr {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return ScalarExpr::from_parts(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        ScalarExpr::from_parts(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &ScalarExpr) -> ScalarExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || other.is_zero() {
            return ScalarExpr::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        ScalarExpr::from_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, k: &Rational) -> ScalarExpr {
        if k.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<ScalarExpr, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZeroExpr);
        }
        Ok(ScalarExpr::from_parts(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZeroExpr);
        }
        Ok(ScalarExpr::from_parts(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn pow(&self, e: i64) -> Result<ScalarExpr, ScalarError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(ScalarExpr::from_parts(base.num.pow(k), base.den.pow(k)))
    }

    /// Formal partial derivative with respect to a coordinate name.
    pub fn partial(&self, coord: &str) -> ScalarExpr {
        let dn = self.num.partial(coord);
        if self.den.as_constant().is_some() {
            return ScalarExpr::from_parts(dn, self.den.clone());
        }
        let dd = self.den.partial(coord);
        if dd.is_zero() {
            return ScalarExpr::from_parts(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        ScalarExpr::from_parts(num, self.den.mul(&self.den))
    }

    /// Exact value at a point; the expression must be free of function symbols.
    pub fn eval_with<F>(&self, value_of: F) -> Result<Rational, ScalarError>
    where
        F: Fn(&str) -> Option<Rational>,
    {
        let d = self.den.eval(&value_of)?;
        let n = self.num.eval(&value_of)?;
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint);
        }
        Ok(n / d)
    }

    pub fn eval_at(
        &self,
        point: &std::collections::BTreeMap<String, Rational>,
    ) -> Result<Rational, ScalarError> {
        self.eval_with(|c| point.get(c).cloned())
    }

    /// `e1 / e2` as a proportionality factor; `None` when `e2` vanishes.
    pub fn proportionality(e1: &ScalarExpr, e2: &ScalarExpr) -> Option<ScalarExpr> {
        let lambda = e1.checked_div(e2).ok()?;
        debug_assert!(e1.equals(&lambda.mul(e2)));
        Some(lambda)
    }

    /// Whether the value prints as a single signed product.
    pub fn is_single_term(&self) -> bool {
        display::is_product(self)
    }

    /// Surface syntax with primes for derivatives of single-argument symbols.
    pub fn pretty(&self) -> String {
        display::render(self, true)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display::render(self, false))
    }
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display::symbol(self, false))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::neg(self)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(c: Rational) -> Self {
        ScalarExpr::constant(c)
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::from_int(n)
    }
}

/// A basis of the rational relations Σ ξ_i v_i = 0 among vectors of
/// expressions, all of the same length.
pub fn constant_relations(vectors: &[Vec<ScalarExpr>]) -> Vec<Vec<Rational>> {
    let count = vectors.len();
    let len = vectors.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for j in 0..len {
        let mut dens: Vec<&Poly> = Vec::new();
        for v in vectors {
            if !dens.contains(&&v[j].den) {
                dens.push(&v[j].den);
            }
        }
        let mut by_term: std::collections::BTreeMap<Term, Vec<Rational>> =
            std::collections::BTreeMap::new();
        for (i, v) in vectors.iter().enumerate() {
            let mut scaled = v[j].num.clone();
            for d in dens.iter().filter(|d| ***d != v[j].den) {
                scaled = scaled.mul(d);
            }
            for (t, c) in scaled.terms {
                by_term
                    .entry(t)
                    .or_insert_with(|| vec![Rational::zero(); count])[i] = c;
            }
        }
        rows.extend(by_term.into_values());
    }
    if rows.is_empty() {
        return (0..count)
            .map(|i| {
                let mut e = vec![Rational::zero(); count];
                e[i] = Rational::one();
                e
            })
            .collect();
    }
    crate::linalg::Matrix::from_rows(rows, count).kernel()
}
