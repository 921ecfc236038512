//! Sparse multivariate polynomials over the rationals whose indeterminates
//! are chart coordinates and formal derivatives of function symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{FunctionSymbol, Rational, ScalarError};

/// A monomial: coordinate powers and powers of symbol derivatives.
///
/// Both lists are sorted by key and carry only positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    pub(crate) coords: Vec<(String, u32)>,
    pub(crate) symbols: Vec<(FunctionSymbol, u32)>,
}

fn merge<K: Ord + Clone>(a: &[(K, u32)], b: &[(K, u32)]) -> Vec<(K, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Subtracts exponents of `b` from `a`; `b` must divide `a`.
fn unmerge<K: Ord + Clone>(a: &[(K, u32)], b: &[(K, u32)]) -> Vec<(K, u32)> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for (k, e) in a {
        if j < b.len() && b[j].0 == *k {
            let rest = e - b[j].1;
            if rest > 0 {
                out.push((k.clone(), rest));
            }
            j += 1;
        } else {
            out.push((k.clone(), *e));
        }
    }
    debug_assert_eq!(j, b.len());
    out
}

fn min_common<K: Ord + Clone>(a: &[(K, u32)], b: &[(K, u32)]) -> Vec<(K, u32)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1.min(b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl Term {
    pub(crate) fn one() -> Self {
        Term::default()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.coords.is_empty() && self.symbols.is_empty()
    }

    pub(crate) fn factor_count(&self) -> usize {
        self.coords.len() + self.symbols.len()
    }

    fn coord_degree(&self) -> u32 {
        self.coords.iter().map(|(_, e)| e).sum()
    }

    fn symbol_degree(&self) -> u32 {
        self.symbols.iter().map(|(_, e)| e).sum()
    }

    pub(crate) fn mul(&self, other: &Term) -> Term {
        Term {
            coords: merge(&self.coords, &other.coords),
            symbols: merge(&self.symbols, &other.symbols),
        }
    }

    pub(crate) fn div(&self, other: &Term) -> Term {
        Term {
            coords: unmerge(&self.coords, &other.coords),
            symbols: unmerge(&self.symbols, &other.symbols),
        }
    }

    pub(crate) fn gcd(&self, other: &Term) -> Term {
        Term {
            coords: min_common(&self.coords, &other.coords),
            symbols: min_common(&self.symbols, &other.symbols),
        }
    }

    /// Formal partial derivative: a list of (multiplier, term) pairs.
    fn partial(&self, coord: &str) -> Vec<(u32, Term)> {
        let mut out = Vec::new();
        if let Ok(pos) = self.coords.binary_search_by(|(c, _)| c.as_str().cmp(coord)) {
            let e = self.coords[pos].1;
            let mut t = self.clone();
            if e == 1 {
                t.coords.remove(pos);
            } else {
                t.coords[pos].1 = e - 1;
            }
            out.push((e, t));
        }
        for (pos, (sym, e)) in self.symbols.iter().enumerate() {
            let Some(dsym) = sym.differentiate(coord) else {
                continue;
            };
            let mut rest = self.symbols.clone();
            if *e == 1 {
                rest.remove(pos);
            } else {
                rest[pos].1 = e - 1;
            }
            let t = Term {
                coords: self.coords.clone(),
                symbols: merge(&rest, &[(dsym, 1)]),
            };
            out.push((*e, t));
        }
        out
    }
}

fn lex_coords(a: &[(String, u32)], b: &[(String, u32)]) -> Ordering {
    for i in 0.. {
        match (a.get(i), b.get(i)) {
            (Some((na, ea)), Some((nb, eb))) => {
                if na == nb {
                    if ea != eb {
                        return eb.cmp(ea);
                    }
                } else if na < nb {
                    return Ordering::Less;
                } else {
                    return Ordering::Greater;
                }
            }
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => return Ordering::Equal,
        }
    }
    unreachable!()
}

/// Graded lexicographic on coordinates (leading terms first), then on the
/// symbol product.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .coord_degree()
            .cmp(&self.coord_degree())
            .then_with(|| lex_coords(&self.coords, &other.coords))
            .then_with(|| other.symbol_degree().cmp(&self.symbol_degree()))
            .then_with(|| self.symbols.cmp(&other.symbols))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial: terms in canonical order, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Poly {
    pub(crate) terms: BTreeMap<Term, Rational>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly::default()
    }

    pub(crate) fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Term::one(), c);
        p
    }

    pub(crate) fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub(crate) fn monomial(term: Term, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(term, c);
        p
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (t, c) = self.terms.iter().next()?;
                t.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub(crate) fn add_term(&mut self, term: Term, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub(crate) fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub(crate) fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * k)).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                out.add_term(ta.mul(tb), ca * cb);
            }
        }
        out
    }

    pub(crate) fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub(crate) fn partial(&self, coord: &str) -> Poly {
        let mut out = Poly::zero();
        for (t, c) in &self.terms {
            for (m, dt) in t.partial(coord) {
                out.add_term(dt, c * Rational::from_integer(m.into()));
            }
        }
        out
    }

    /// Largest monomial dividing every term, or `None` for the zero polynomial.
    pub(crate) fn monomial_content(&self) -> Option<Term> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, t| acc.gcd(t)))
    }

    pub(crate) fn div_monomial(&self, m: &Term) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.div(m), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next()
    }

    pub(crate) fn has_symbols(&self) -> bool {
        self.terms.keys().any(|t| !t.symbols.is_empty())
    }

    pub(crate) fn eval<F>(&self, value_of: &F) -> Result<Rational, ScalarError>
    where
        F: Fn(&str) -> Option<Rational>,
    {
        let mut acc = Rational::zero();
        for (t, c) in &self.terms {
            if let Some((s, _)) = t.symbols.first() {
                return Err(ScalarError::UnresolvedFunctionSymbol(s.name().to_string()));
            }
            let mut v = c.clone();
            for (name, e) in &t.coords {
                let x = value_of(name)
                    .ok_or_else(|| ScalarError::MissingCoordinateValue(name.clone()))?;
                v *= num_traits::pow(x, *e as usize);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Returns `k` with `self = k * other`, when such a constant exists.
    pub(crate) fn constant_ratio(&self, other: &Poly) -> Option<Rational> {
        if self.len() != other.len() || other.is_zero() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for ((ta, ca), (tb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ta != tb {
                return None;
            }
            let r = ca / cb;
            match &ratio {
                None => ratio = Some(r),
                Some(k) if *k == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    pub(crate) fn coordinates(&self) -> impl Iterator<Item = &str> {
        self.terms
            .keys()
            .flat_map(|t| t.coords.iter().map(|(c, _)| c.as_str()))
    }

    pub(crate) fn symbols(&self) -> impl Iterator<Item = &FunctionSymbol> {
        self.terms
            .keys()
            .flat_map(|t| t.symbols.iter().map(|(s, _)| s))
    }
}
