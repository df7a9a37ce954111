//! Products of propagator distributions under a single time integral.
//!
//! One vertex time is pinned to the origin, so every integrand is a function of
//! a single variable `τ`:
//!
//! ```text
//! coeff · ∫dτ Δ(τ)^m Δ̇(τ)^n Δ̈(τ)^p δ(τ)^q
//! ```
//!
//! Equal-time factors are never stored as integrand factors. They are folded
//! into the coefficient using [`delta_at_zero`], `Δ̇(0) = 0` and
//! [`ddelta_at_zero`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use crate::ring::{format_term_magnitude, rat, Symbol, ValuePoly};

/// `Δ(0) = 1/(2ω)`.
pub fn delta_at_zero() -> ValuePoly {
    ValuePoly::omega_term(rat(1, 2), -1)
}

/// `Δ̈(0) = -δ₀ + ω²Δ(0)`, the field equation at the origin.
pub fn ddelta_at_zero() -> ValuePoly {
    -ValuePoly::symbol(Symbol::Delta0) + ValuePoly::omega_term(rat(1, 2), 1)
}

/// Exponents `(m, n, p, q)` of `Δ`, `Δ̇`, `Δ̈` and `δ`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Powers {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub q: u32,
}

impl Powers {
    pub const fn new(m: u32, n: u32, p: u32, q: u32) -> Self {
        Powers { m, n, p, q }
    }

    /// The divergent bare measure `∫dτ`.
    pub fn is_bare(&self) -> bool {
        *self == Powers::default()
    }

    pub fn times(self, other: Powers) -> Powers {
        Powers {
            m: self.m + other.m,
            n: self.n + other.n,
            p: self.p + other.p,
            q: self.q + other.q,
        }
    }

    /// Value of `Δ^m Δ̇^n` at the origin. Only meaningful for `p = q = 0`.
    pub fn value_at_zero(&self) -> ValuePoly {
        debug_assert!(self.p == 0 && self.q == 0);
        if self.n > 0 {
            ValuePoly::zero()
        } else {
            delta_at_zero().pow(self.m)
        }
    }
}

impl fmt::Display for Powers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, k) in [("D", self.m), ("dD", self.n), ("ddD", self.p), ("delta", self.q)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrandMonomial {
    pub powers: Powers,
    pub coeff: ValuePoly,
}

impl IntegrandMonomial {
    pub fn new(powers: Powers, coeff: ValuePoly) -> Self {
        IntegrandMonomial { powers, coeff }
    }

    /// Unit coefficient.
    pub fn unit(m: u32, n: u32, p: u32, q: u32) -> Self {
        Self::new(Powers::new(m, n, p, q), ValuePoly::one())
    }

    pub fn scaled(mut self, c: &ValuePoly) -> Self {
        self.coeff = &self.coeff * c;
        self
    }
}

/// Exponents add componentwise, coefficients multiply.
pub fn mul_monomials(x: &IntegrandMonomial, y: &IntegrandMonomial) -> IntegrandMonomial {
    IntegrandMonomial {
        powers: x.powers.times(y.powers),
        coeff: &x.coeff * &y.coeff,
    }
}

/// A finite sum of integrand monomials plus an already-evaluated scalar part.
///
/// `local` collects contributions that no longer carry a time integral, such as
/// the result of evaluating a `δ` factor. The monomial list may hold repeated
/// powers until [`IntegrandSum::normalize`] merges them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegrandSum {
    pub local: ValuePoly,
    pub terms: Vec<IntegrandMonomial>,
}

impl IntegrandSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = IntegrandMonomial>) -> Self {
        IntegrandSum {
            local: ValuePoly::zero(),
            terms: terms.into_iter().collect(),
        }
        .normalize()
    }

    pub fn from_local(local: ValuePoly) -> Self {
        IntegrandSum {
            local,
            terms: Vec::new(),
        }
    }

    pub fn monomial(m: u32, n: u32, p: u32, q: u32, coeff: ValuePoly) -> Self {
        Self::from_terms([IntegrandMonomial::new(Powers::new(m, n, p, q), coeff)])
    }

    pub fn is_zero(&self) -> bool {
        self.local.is_zero() && self.terms.iter().all(|t| t.coeff.is_zero())
    }

    /// True once nothing but the scalar part remains.
    pub fn is_local(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    pub fn push(&mut self, term: IntegrandMonomial) {
        self.terms.push(term);
    }

    /// Merges equal powers, drops zero coefficients and sorts by `(m, n, p, q)`.
    pub fn normalize(&self) -> IntegrandSum {
        let mut merged: BTreeMap<Powers, ValuePoly> = BTreeMap::new();
        for t in &self.terms {
            *merged.entry(t.powers).or_default() += &t.coeff;
        }
        IntegrandSum {
            local: self.local.clone(),
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(powers, coeff)| IntegrandMonomial { powers, coeff })
                .collect(),
        }
    }

    pub fn scale(&self, c: &ValuePoly) -> IntegrandSum {
        IntegrandSum {
            local: &self.local * c,
            terms: self.terms.iter().map(|t| t.clone().scaled(c)).collect(),
        }
        .normalize()
    }

    pub fn add(&self, other: &IntegrandSum) -> IntegrandSum {
        IntegrandSum {
            local: &self.local + &other.local,
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
        .normalize()
    }

    pub fn neg(&self) -> IntegrandSum {
        self.scale(&ValuePoly::from(-1))
    }

    /// Highest exponent of a factor across all terms.
    pub fn max_power(&self, f: impl Fn(&Powers) -> u32) -> u32 {
        self.terms.iter().map(|t| f(&t.powers)).max().unwrap_or(0)
    }
}

impl fmt::Display for IntegrandSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, negative: bool, body: String| -> fmt::Result {
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            f.write_str(&body)
        };
        for t in &self.terms {
            for (e, c) in t.coeff.terms() {
                let mag = format_term_magnitude(e, c);
                let body = if mag == "1" {
                    t.powers.to_string()
                } else {
                    format!("{mag} {}", t.powers)
                };
                emit(f, c.is_negative(), body)?;
            }
        }
        for (e, c) in self.local.terms() {
            emit(f, c.is_negative(), format_term_magnitude(e, c))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl IntegrandMonomial {
    pub fn is_unit_coeff(&self) -> bool {
        self.coeff.as_constant().is_some_and(|c| c.is_one())
    }
}
