//! Exact scalar ring for reduced integrals and diagram coefficients.
//!
//! A [`ValuePoly`] is a sparse polynomial over arbitrary-precision rationals in
//! four commuting symbols: the propagator scale `ω` (Laurent, so negative powers
//! are allowed), the formal value `δ₀` of the Dirac delta at the origin, the
//! transformation parameter `a` and the coupling `g`. Only `ω` may appear with
//! a negative exponent.
//!
//! The text rendering is stable and used by the CLI and golden tests: terms are
//! sorted by `(g, d0, a, w)` exponents in descending order, coefficients are
//! printed as `p/q` and symbols as `g`, `d0`, `a`, `w`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(text).ok().map(Rational::from_integer),
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Omega,
    Delta0,
    A,
    G,
}

impl Symbol {
    pub fn name(self) -> &'static str {
        match self {
            Symbol::Omega => "w",
            Symbol::Delta0 => "d0",
            Symbol::A => "a",
            Symbol::G => "g",
        }
    }
}

/// Exponent vector of one term. Field order fixes the canonical sort.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents {
    pub g: u32,
    pub delta0: u32,
    pub a: u32,
    pub omega: i32,
}

impl Exponents {
    pub fn omega(k: i32) -> Self {
        Exponents {
            omega: k,
            ..Default::default()
        }
    }

    fn combine(self, other: Self) -> Self {
        Exponents {
            g: self.g + other.g,
            delta0: self.delta0 + other.delta0,
            a: self.a + other.a,
            omega: self.omega + other.omega,
        }
    }

    pub fn get(&self, symbol: Symbol) -> i64 {
        match symbol {
            Symbol::Omega => self.omega as i64,
            Symbol::Delta0 => self.delta0 as i64,
            Symbol::A => self.a as i64,
            Symbol::G => self.g as i64,
        }
    }
}

/// Values assigned to a subset of the symbols by [`ValuePoly::substitute`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub omega: Option<Rational>,
    pub delta0: Option<Rational>,
    pub a: Option<Rational>,
    pub g: Option<Rational>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, symbol: Symbol, value: Rational) -> Self {
        match symbol {
            Symbol::Omega => self.omega = Some(value),
            Symbol::Delta0 => self.delta0 = Some(value),
            Symbol::A => self.a = Some(value),
            Symbol::G => self.g = Some(value),
        }
        self
    }

    /// The Veltman prescription `δ₀ := 0`.
    pub fn veltman() -> Self {
        Self::new().with(Symbol::Delta0, Rational::zero())
    }
}

/// Sparse Laurent polynomial in `ω` with polynomial symbols `δ₀`, `a`, `g`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ValuePoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl ValuePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Exponents::default())
    }

    pub fn monomial(c: Rational, exps: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        ValuePoly { terms }
    }

    pub fn symbol(symbol: Symbol) -> Self {
        Self::symbol_pow(symbol, 1)
    }

    /// `symbol^k`. Negative `k` is only meaningful for `ω`.
    pub fn symbol_pow(symbol: Symbol, k: i32) -> Self {
        let mut e = Exponents::default();
        match symbol {
            Symbol::Omega => e.omega = k,
            _ => {
                assert!(k >= 0, "only omega admits negative powers");
                match symbol {
                    Symbol::Delta0 => e.delta0 = k as u32,
                    Symbol::A => e.a = k as u32,
                    Symbol::G => e.g = k as u32,
                    Symbol::Omega => unreachable!(),
                }
            }
        }
        Self::monomial(Rational::one(), e)
    }

    /// `c·ω^k`, the common shape of reduced integrals.
    pub fn omega_term(c: Rational, k: i32) -> Self {
        Self::monomial(c, Exponents::omega(k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term, if the value has no symbols at all.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (*e == Exponents::default()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Highest power of `symbol`, or `None` for the zero polynomial.
    pub fn degree(&self, symbol: Symbol) -> Option<i64> {
        self.terms.keys().map(|e| e.get(symbol)).max()
    }

    pub fn lowest_degree(&self, symbol: Symbol) -> Option<i64> {
        self.terms.keys().map(|e| e.get(symbol)).min()
    }

    /// Part of the value of exact degree `k` in `symbol`, symbol kept.
    pub fn filter_degree(&self, symbol: Symbol, k: i64) -> ValuePoly {
        ValuePoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.get(symbol) == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ValuePoly {
        if c.is_zero() {
            return ValuePoly::zero();
        }
        ValuePoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ValuePoly {
        let mut acc = ValuePoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Evaluates the bound symbols exactly; unbound symbols are kept.
    pub fn substitute(&self, bindings: &Bindings) -> Result<ValuePoly> {
        if let Some(w) = &bindings.omega {
            if !w.is_positive() {
                return Err(Error::NonPositiveOmega(format_rational(w)));
            }
        }
        let mut out = ValuePoly::zero();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = *e;
            if let Some(v) = &bindings.g {
                coeff *= pow_rational(v, e.g as i32);
                rest.g = 0;
            }
            if let Some(v) = &bindings.delta0 {
                coeff *= pow_rational(v, e.delta0 as i32);
                rest.delta0 = 0;
            }
            if let Some(v) = &bindings.a {
                coeff *= pow_rational(v, e.a as i32);
                rest.a = 0;
            }
            if let Some(v) = &bindings.omega {
                coeff *= pow_rational(v, e.omega);
                rest.omega = 0;
            }
            out.add_term(rest, coeff);
        }
        Ok(out)
    }

    /// Numeric value after every symbol has been bound.
    pub fn to_f64(&self) -> Option<f64> {
        self.as_constant().and_then(|c| c.to_f64())
    }
}

fn pow_rational(base: &Rational, k: i32) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    let p = num_traits::pow(base.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

impl From<Rational> for ValuePoly {
    fn from(c: Rational) -> Self {
        ValuePoly::constant(c)
    }
}

impl From<i64> for ValuePoly {
    fn from(c: i64) -> Self {
        ValuePoly::constant(Rational::from_integer(BigInt::from(c)))
    }
}

impl Neg for ValuePoly {
    type Output = ValuePoly;
    fn neg(mut self) -> ValuePoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &ValuePoly {
    type Output = ValuePoly;
    fn neg(self) -> ValuePoly {
        -self.clone()
    }
}

impl AddAssign<&ValuePoly> for ValuePoly {
    fn add_assign(&mut self, rhs: &ValuePoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl AddAssign for ValuePoly {
    fn add_assign(&mut self, rhs: ValuePoly) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&ValuePoly> for ValuePoly {
    fn sub_assign(&mut self, rhs: &ValuePoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl SubAssign for ValuePoly {
    fn sub_assign(&mut self, rhs: ValuePoly) {
        *self -= &rhs;
    }
}

impl MulAssign<&ValuePoly> for ValuePoly {
    fn mul_assign(&mut self, rhs: &ValuePoly) {
        *self = &*self * rhs;
    }
}

impl Mul for &ValuePoly {
    type Output = ValuePoly;
    fn mul(self, rhs: &ValuePoly) -> ValuePoly {
        let mut out = ValuePoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.combine(*e2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $assign:ident) => {
        impl $tr for ValuePoly {
            type Output = ValuePoly;
            fn $m(mut self, rhs: ValuePoly) -> ValuePoly {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&ValuePoly> for ValuePoly {
            type Output = ValuePoly;
            fn $m(mut self, rhs: &ValuePoly) -> ValuePoly {
                self.$assign(rhs);
                self
            }
        }
        impl $tr for &ValuePoly {
            type Output = ValuePoly;
            fn $m(self, rhs: &ValuePoly) -> ValuePoly {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul for ValuePoly {
    type Output = ValuePoly;
    fn mul(self, rhs: ValuePoly) -> ValuePoly {
        &self * &rhs
    }
}

impl Mul<&ValuePoly> for ValuePoly {
    type Output = ValuePoly;
    fn mul(self, rhs: &ValuePoly) -> ValuePoly {
        &self * rhs
    }
}

impl std::iter::Sum for ValuePoly {
    fn sum<I: Iterator<Item = ValuePoly>>(iter: I) -> ValuePoly {
        iter.fold(ValuePoly::zero(), |acc, x| acc + x)
    }
}

/// Renders the symbol part of a term, e.g. `g^2 d0 w^-1`. Empty for constants.
pub(crate) fn format_symbols(e: &Exponents) -> String {
    let mut parts = Vec::new();
    let mut push = |name: &str, k: i64| match k {
        0 => {}
        1 => parts.push(name.to_string()),
        _ => parts.push(format!("{name}^{k}")),
    };
    push("g", e.g as i64);
    push("d0", e.delta0 as i64);
    push("a", e.a as i64);
    push("w", e.omega as i64);
    parts.join(" ")
}

/// Magnitude of a term without its sign, e.g. `3/32 w^-1` or `d0`.
pub(crate) fn format_term_magnitude(e: &Exponents, c: &Rational) -> String {
    let syms = format_symbols(e);
    let mag = c.abs();
    if syms.is_empty() {
        format_rational(&mag)
    } else if mag.is_one() {
        syms
    } else {
        format!("{} {}", format_rational(&mag), syms)
    }
}

impl fmt::Display for ValuePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&format_term_magnitude(e, c))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ValuePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValuePoly({self})")
    }
}
