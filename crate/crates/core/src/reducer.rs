//! Rule engine reducing singular integrals to exact scalars.
//!
//! The rewrite order is fixed:
//!
//! 1. field equation `Δ̈ → -δ + ω²Δ`;
//! 2. `∫f δ² = f(0) δ₀`;
//! 3. `∫f δ = f(0)` with `Δ̇(0) = 0`;
//! 4. terms odd in `Δ̇` integrate to zero;
//! 5. integration by parts lowers the power of `Δ̇` by two, no boundary terms;
//! 6. `∫Δ^m` in closed form.
//!
//! Other orders can give different answers for the same product (e.g. a naive
//! evaluation of `∫Δ̇⁴`), so the pipeline is the definition.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::integrand::{IntegrandMonomial, IntegrandSum, Powers};
use crate::ring::{rat, Rational, Symbol, ValuePoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    FieldEquation,
    DiracSquared,
    Dirac,
    Parity,
    IntegrationByParts,
    BaseIntegral,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::FieldEquation => "field-equation",
            Rule::DiracSquared => "dirac-squared",
            Rule::Dirac => "dirac",
            Rule::Parity => "parity",
            Rule::IntegrationByParts => "integration-by-parts",
            Rule::BaseIntegral => "base-integral",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub before: IntegrandSum,
    pub after: IntegrandSum,
}

/// Every rewrite applied by [`reduce`], in order. Each step's `before` equals
/// the previous step's `after`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    fn record(&mut self, rule: Rule, before: &IntegrandSum, after: &IntegrandSum) {
        if before != after {
            self.steps.push(TraceStep {
                rule,
                before: before.clone(),
                after: after.clone(),
            });
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Replaces every `Δ̈` by `-δ + ω²Δ` and expands.
pub fn substitute_field_equation(s: &IntegrandSum) -> IntegrandSum {
    let mut out = IntegrandSum::from_local(s.local.clone());
    for t in &s.terms {
        let p = t.powers.p;
        if p == 0 {
            out.push(t.clone());
            continue;
        }
        // (-δ + ω²Δ)^p = Σ_k C(p,k) (-δ)^k (ω²Δ)^(p-k)
        for k in 0..=p {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let c = ValuePoly::omega_term(rat(sign * binomial(p, k), 1), 2 * (p - k) as i32);
            let powers = Powers {
                m: t.powers.m + (p - k),
                n: t.powers.n,
                p: 0,
                q: t.powers.q + k,
            };
            out.push(IntegrandMonomial::new(powers, &t.coeff * &c));
        }
    }
    out.normalize()
}

fn require_no_ddelta(s: &IntegrandSum, op: &'static str) -> Result<()> {
    if let Some(t) = s.terms.iter().find(|t| t.powers.p > 0) {
        return Err(Error::Precondition {
            op,
            detail: format!("term {} still contains ddD", t.powers),
        });
    }
    Ok(())
}

/// `∫f δ² = f(0) δ₀`. Terms with fewer `δ` factors pass through.
pub fn eval_dirac_squared(s: &IntegrandSum) -> Result<IntegrandSum> {
    require_no_ddelta(s, "eval_dirac_squared")?;
    if let Some(t) = s.terms.iter().find(|t| t.powers.q >= 3) {
        return Err(Error::RuleDomain(format!("delta^{}", t.powers.q)));
    }
    let delta0 = ValuePoly::symbol(Symbol::Delta0);
    let mut out = IntegrandSum::from_local(s.local.clone());
    for t in &s.terms {
        if t.powers.q == 2 {
            let rest = Powers { q: 0, ..t.powers };
            out.local += &t.coeff * &rest.value_at_zero() * &delta0;
        } else {
            out.push(t.clone());
        }
    }
    Ok(out.normalize())
}

/// `∫f δ = f(0)`, with `Δ̇(0) = 0`.
pub fn eval_dirac(s: &IntegrandSum) -> Result<IntegrandSum> {
    require_no_ddelta(s, "eval_dirac")?;
    if let Some(t) = s.terms.iter().find(|t| t.powers.q >= 2) {
        return Err(Error::Precondition {
            op: "eval_dirac",
            detail: format!("term {} needs the delta^2 rule first", t.powers),
        });
    }
    let mut out = IntegrandSum::from_local(s.local.clone());
    for t in &s.terms {
        if t.powers.q == 1 {
            let rest = Powers { q: 0, ..t.powers };
            out.local += &t.coeff * &rest.value_at_zero();
        } else {
            out.push(t.clone());
        }
    }
    Ok(out.normalize())
}

/// Drops terms with an odd power of `Δ̇`; they are odd under `τ → -τ`.
pub fn drop_odd(s: &IntegrandSum) -> IntegrandSum {
    IntegrandSum {
        local: s.local.clone(),
        terms: s.terms.iter().filter(|t| t.powers.n % 2 == 0).cloned().collect(),
    }
}

/// One partial integration of `∫Δ̇ⁿ Δ^m` (n even, n ≥ 2):
///
/// ```text
/// (m+1) ∫Δ̇ⁿΔ^m = (n-1) [Δ̇^{n-2} Δ^{m+1}](0) - (n-1) ω² ∫Δ̇^{n-2} Δ^{m+2}
/// ```
pub fn ibp_step(t: &IntegrandMonomial) -> Result<IntegrandSum> {
    let Powers { m, n, p, q } = t.powers;
    if p != 0 || q != 0 {
        return Err(Error::Precondition {
            op: "ibp_step",
            detail: format!("term {} has singular factors", t.powers),
        });
    }
    if n == 0 || n % 2 == 1 {
        return Err(Error::Precondition {
            op: "ibp_step",
            detail: format!("power of dD must be even and positive, got {n}"),
        });
    }
    let factor = rat((n - 1) as i64, (m + 1) as i64);
    let bracket = Powers::new(m + 1, n - 2, 0, 0).value_at_zero();
    let mut out = IntegrandSum::from_local(t.coeff.scale(&factor) * bracket);
    out.push(IntegrandMonomial::new(
        Powers::new(m + 2, n - 2, 0, 0),
        &t.coeff * &ValuePoly::omega_term(-factor, 2),
    ));
    Ok(out.normalize())
}

/// `∫dτ Δ^m = 2^{1-m} m⁻¹ ω^{-(m+1)}`.
pub fn base_integral(m: u32) -> Result<ValuePoly> {
    if m == 0 {
        return Err(Error::BareMeasure("1".into()));
    }
    let den = num_traits::pow(Rational::from_integer(2.into()), (m - 1) as usize) * Rational::from_integer(m.into());
    Ok(ValuePoly::omega_term(Rational::one() / den, -(m as i32 + 1)))
}

fn apply_ibp(s: &IntegrandSum) -> Result<IntegrandSum> {
    let mut out = IntegrandSum::from_local(s.local.clone());
    for t in &s.terms {
        if t.powers.n >= 2 {
            out = out.add(&ibp_step(t)?);
        } else {
            out.push(t.clone());
        }
    }
    Ok(out.normalize())
}

fn apply_base(s: &IntegrandSum) -> Result<IntegrandSum> {
    let mut out = IntegrandSum::from_local(s.local.clone());
    for t in &s.terms {
        if t.powers != Powers::new(t.powers.m, 0, 0, 0) {
            return Err(Error::Precondition {
                op: "base_integral",
                detail: format!("term {} is not a pure power of D", t.powers),
            });
        }
        out.local += &t.coeff * &base_integral(t.powers.m)?;
    }
    Ok(out)
}

/// Reduces a sum of integrals to an exact scalar.
pub fn reduce(s: &IntegrandSum) -> Result<(ValuePoly, ReductionTrace)> {
    let start = s.normalize();
    if let Some(t) = start.terms.iter().find(|t| t.powers.is_bare()) {
        return Err(Error::BareMeasure(t.coeff.to_string()));
    }
    let mut trace = ReductionTrace::default();

    let mut cur = start;
    let next = substitute_field_equation(&cur);
    trace.record(Rule::FieldEquation, &cur, &next);
    cur = next;

    let next = eval_dirac_squared(&cur)?;
    trace.record(Rule::DiracSquared, &cur, &next);
    cur = next;

    let next = eval_dirac(&cur)?;
    trace.record(Rule::Dirac, &cur, &next);
    cur = next;

    let next = drop_odd(&cur);
    trace.record(Rule::Parity, &cur, &next);
    cur = next;

    // each pass lowers the highest power of dD by two
    while cur.terms.iter().any(|t| t.powers.n >= 2) {
        let next = apply_ibp(&cur)?;
        trace.record(Rule::IntegrationByParts, &cur, &next);
        cur = next;
    }

    let next = apply_base(&cur)?;
    trace.record(Rule::BaseIntegral, &cur, &next);
    debug_assert!(next.is_local());
    Ok((next.local, trace))
}

/// [`reduce`] without the trace.
pub fn reduce_value(s: &IntegrandSum) -> Result<ValuePoly> {
    reduce(s).map(|(v, _)| v)
}

/// Reduces a single unit-coefficient monomial.
pub fn reduce_monomial(m: u32, n: u32, p: u32, q: u32) -> Result<ValuePoly> {
    reduce_value(&IntegrandSum::monomial(m, n, p, q, ValuePoly::one()))
}
