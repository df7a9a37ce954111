//! End-to-end checks: reduction identities, partial sums of diagram classes,
//! cancellation of the order-`g` and order-`g²` contributions, and a numeric
//! quadrature oracle for the products where the rules agree with ordinary
//! Lebesgue integration.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::integrand::{delta_at_zero, IntegrandMonomial, IntegrandSum, Powers};
use crate::reducer::{base_integral, reduce, reduce_value, ReductionTrace};
use crate::ring::{rat, Bindings, Rational, Symbol, ValuePoly};
use crate::wick::{class_sum, order_contribution, DiagramClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub expected: ValuePoly,
    pub actual: ValuePoly,
    pub passed: bool,
    pub trace: Option<ReductionTrace>,
}

impl CheckResult {
    pub fn compare(name: impl Into<String>, expected: ValuePoly, actual: ValuePoly) -> Self {
        let passed = (&expected - &actual).is_zero();
        CheckResult {
            name: name.into(),
            expected,
            actual,
            passed,
            trace: None,
        }
    }

    pub fn with_trace(mut self, trace: ReductionTrace) -> Self {
        self.trace = Some(trace);
        self
    }
}

fn w(c: Rational, k: i32) -> ValuePoly {
    ValuePoly::omega_term(c, k)
}

fn term(m: u32, n: u32, p: u32, q: u32, coeff: ValuePoly) -> IntegrandMonomial {
    IntegrandMonomial::new(Powers::new(m, n, p, q), coeff)
}

fn unit(m: u32, n: u32, p: u32, q: u32) -> IntegrandMonomial {
    IntegrandMonomial::unit(m, n, p, q)
}

fn with_local(local: ValuePoly, terms: impl IntoIterator<Item = IntegrandMonomial>) -> IntegrandSum {
    let mut s = IntegrandSum::from_terms(terms);
    s.local = local;
    s
}

/// Named pairs `(left, right)` of integral relations that must reduce to the
/// same value.
pub fn identities() -> Vec<(&'static str, IntegrandSum, IntegrandSum)> {
    let d0 = ValuePoly::symbol(Symbol::Delta0);
    let at0 = delta_at_zero();
    let one = || ValuePoly::one();
    vec![
        (
            "dD^2 + w^2 D^2 = D(0)",
            IntegrandSum::from_terms([unit(0, 2, 0, 0), term(2, 0, 0, 0, w(rat(1, 1), 2))]),
            IntegrandSum::from_local(at0.clone()),
        ),
        (
            "dD^2 = -D ddD",
            IntegrandSum::from_terms([unit(0, 2, 0, 0)]),
            IntegrandSum::from_terms([term(1, 0, 1, 0, -one())]),
        ),
        (
            "ddD^2 + 2 w^2 dD^2 + w^4 D^2 = delta^2",
            IntegrandSum::from_terms([
                unit(0, 0, 2, 0),
                term(0, 2, 0, 0, w(rat(2, 1), 2)),
                term(2, 0, 0, 0, w(rat(1, 1), 4)),
            ]),
            IntegrandSum::from_terms([unit(0, 0, 0, 2)]),
        ),
        (
            "-ddD D^3 = D(0)^3 - w^2 D^4",
            IntegrandSum::from_terms([term(3, 0, 1, 0, -one())]),
            with_local(at0.pow(3), [term(4, 0, 0, 0, w(rat(-1, 1), 2))]),
        ),
        (
            "ddD D^3 = -3 dD^2 D^2",
            IntegrandSum::from_terms([unit(3, 0, 1, 0)]),
            IntegrandSum::from_terms([term(2, 2, 0, 0, ValuePoly::from(-3))]),
        ),
        (
            "dD^2 D^2 = 1/3 D(0)^3 - 1/3 w^2 D^4",
            IntegrandSum::from_terms([unit(2, 2, 0, 0)]),
            with_local(at0.pow(3).scale(&rat(1, 3)), [term(4, 0, 0, 0, w(rat(-1, 3), 2))]),
        ),
        (
            "ddD^2 D^2 = D^2 delta^2 - 2 w^2 D(0)^3 + w^4 D^4",
            IntegrandSum::from_terms([unit(2, 0, 2, 0)]),
            with_local(
                at0.pow(3) * w(rat(-2, 1), 2),
                [unit(2, 0, 0, 2), term(4, 0, 0, 0, w(rat(1, 1), 4))],
            ),
        ),
        (
            "ddD dD^2 D = w^2 dD^2 D^2",
            IntegrandSum::from_terms([unit(1, 2, 1, 0)]),
            IntegrandSum::from_terms([term(2, 2, 0, 0, w(rat(1, 1), 2))]),
        ),
        (
            "ddD dD^2 D = 1/3 w^2 D(0)^3 - 1/3 w^4 D^4",
            IntegrandSum::from_terms([unit(1, 2, 1, 0)]),
            with_local(at0.pow(3) * w(rat(1, 3), 2), [term(4, 0, 0, 0, w(rat(-1, 3), 4))]),
        ),
        (
            "dD^4 = -3 D dD^2 ddD",
            IntegrandSum::from_terms([unit(0, 4, 0, 0)]),
            IntegrandSum::from_terms([term(1, 2, 1, 0, ValuePoly::from(-3))]),
        ),
        (
            "dD^4 = -w^2 D(0)^3 + w^4 D^4",
            IntegrandSum::from_terms([unit(0, 4, 0, 0)]),
            with_local(at0.pow(3) * w(rat(-1, 1), 2), [term(4, 0, 0, 0, w(rat(1, 1), 4))]),
        ),
        (
            "delta^2 = d0",
            IntegrandSum::from_terms([unit(0, 0, 0, 2)]),
            IntegrandSum::from_local(d0.clone()),
        ),
        (
            "D^2 delta^2 = D(0)^2 d0",
            IntegrandSum::from_terms([unit(2, 0, 0, 2)]),
            IntegrandSum::from_local(at0.pow(2) * d0),
        ),
    ]
}

/// Each identity as an exact equality of the reduced sides, symbolic in `ω`.
pub fn identity_suite() -> Result<Vec<CheckResult>> {
    identities()
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let (actual, trace) = reduce(&lhs)?;
            let expected = reduce_value(&rhs)?;
            Ok(CheckResult::compare(name, expected, actual).with_trace(trace))
        })
        .collect()
}

fn g2() -> ValuePoly {
    ValuePoly::symbol_pow(Symbol::G, 2)
}

fn reduced_class(class: DiagramClass) -> Result<ValuePoly> {
    reduce_value(&class_sum(class)?)
}

/// Partial sums over diagram classes against their closed forms, with
/// `Δ(0) = 1/(2ω)` and `∫Δ² = 1/(4ω³)`.
pub fn diagram_identities() -> Result<Vec<CheckResult>> {
    let d0 = ValuePoly::symbol(Symbol::Delta0);
    let at0 = delta_at_zero();
    let int2 = base_integral(2)?;

    let first = reduced_class(DiagramClass::FirstOrder)?;
    let local = reduced_class(DiagramClass::Local)?;
    let jacobian = reduced_class(DiagramClass::JacobianBubbles)?;
    let three = reduced_class(DiagramClass::ThreeBubbles)?;
    let melons = reduced_class(DiagramClass::Watermelons)?;

    let bubbles = &jacobian + &three;
    let local_melons = &local + &melons;

    Ok(vec![
        CheckResult::compare("first-order diagrams vanish", ValuePoly::zero(), first),
        CheckResult::compare(
            "local diagrams = 3 d0 D(0)^2 - 2/3 w^2 D(0)^3",
            g2() * (&d0 * &at0.pow(2).scale(&rat(3, 1)) - w(rat(2, 3), 2) * at0.pow(3)),
            local,
        ),
        CheckResult::compare(
            "jacobian bubbles = 2 d0 D(0)^2 + d0^2 D^2",
            g2() * (&d0 * &at0.pow(2).scale(&rat(2, 1)) + d0.pow(2) * &int2),
            jacobian,
        ),
        CheckResult::compare(
            "all bubbles = -D(0)^2 delta^2",
            -(g2() * &d0 * at0.pow(2)),
            bubbles.clone(),
        ),
        CheckResult::compare(
            "local + watermelons = d0 D(0)^2",
            g2() * &d0 * at0.pow(2),
            local_melons.clone(),
        ),
        CheckResult::compare("singular terms cancel", ValuePoly::zero(), bubbles + local_melons),
    ])
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderCheckOptions {
    /// Numeric value for `a`; symbolic when absent.
    pub a: Option<Rational>,
    /// Apply `δ₀ := 0` to the couplings and to every `δ(0)` the rules produce.
    pub veltman: bool,
}

/// Reduced order-`g^n` total (local plus reduced single-integral part).
pub fn order_total(n: u32, opts: &OrderCheckOptions) -> Result<ValuePoly> {
    let contribution = order_contribution(n)?;
    let mut local = contribution.local;
    let mut nonlocal = contribution.nonlocal;
    if opts.veltman {
        let b = Bindings::veltman();
        local = local.substitute(&b)?;
        nonlocal = IntegrandSum::from_terms(
            nonlocal
                .terms
                .iter()
                .map(|t| Ok(IntegrandMonomial::new(t.powers, t.coeff.substitute(&b)?)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let mut total = local + reduce_value(&nonlocal)?;
    if opts.veltman {
        total = total.substitute(&Bindings::veltman())?;
    }
    if let Some(a) = &opts.a {
        total = total.substitute(&Bindings::new().with(Symbol::A, a.clone()))?;
    }
    Ok(total)
}

/// The order-`g^n` contribution must vanish identically.
///
/// Without `--veltman` the total is checked as a polynomial in `δ₀` (and in `a`
/// unless a value is given). With it, the unsubstituted total must vanish as
/// well as the substituted one.
pub fn order_check(n: u32, opts: &OrderCheckOptions) -> Result<CheckResult> {
    let total = order_total(n, opts)?;
    let mut name = format!("order g^{n} total");
    if let Some(a) = &opts.a {
        name.push_str(&format!(" at a = {}", crate::ring::format_rational(a)));
    }
    if opts.veltman {
        name.push_str(" with d0 = 0");
        let symbolic = order_total(
            n,
            &OrderCheckOptions {
                veltman: false,
                ..opts.clone()
            },
        )?;
        let mut check = CheckResult::compare(name, ValuePoly::zero(), total);
        check.passed &= symbolic.is_zero();
        return Ok(check);
    }
    Ok(CheckResult::compare(name, ValuePoly::zero(), total))
}

/// Numeric `∫dτ Δ^m Δ̇ⁿ` over the real line for `n ∈ {0, 2}`, from the explicit
/// exponential `(2ω)^{-m} (1/4)^{n/2} e^{-(m+n)ω|τ|}`.
pub fn quadrature_oracle(m: u32, n: u32, omega: &Rational) -> Result<f64> {
    if n != 0 && n != 2 {
        return Err(Error::Precondition {
            op: "quadrature_oracle",
            detail: format!("dD^{n} is outside the sector where the rules match Lebesgue integration"),
        });
    }
    if m + n == 0 {
        return Err(Error::BareMeasure("1".into()));
    }
    if omega <= &Rational::zero() {
        return Err(Error::NonPositiveOmega(crate::ring::format_rational(omega)));
    }
    let w = omega.to_f64().expect("finite omega");
    let k = (m + n) as f64;
    let amplitude = (2.0 * w).powi(-(m as i32)) * 0.25f64.powi((n / 2) as i32);
    let upper = 64.0 / (k * w);
    // the half-line integral is at most amplitude · upper / 64
    let target = 1e-12 * amplitude * upper / 64.0;
    let out = quadrature::integrate(|t| amplitude * (-k * w * t).exp(), 0.0, upper, target);
    Ok(2.0 * out.integral)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub m: u32,
    pub n: u32,
    pub omega: Rational,
    pub numeric: f64,
    pub exact: f64,
    pub relative_error: f64,
}

impl OracleComparison {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.relative_error <= tolerance
    }
}

/// Quadrature of `Δ^m Δ̇ⁿ` against the reduced value at `ω`.
pub fn oracle_check(m: u32, n: u32, omega: &Rational) -> Result<OracleComparison> {
    let numeric = quadrature_oracle(m, n, omega)?;
    let reduced = reduce_value(&IntegrandSum::monomial(m, n, 0, 0, ValuePoly::one()))?;
    let exact = reduced
        .substitute(&Bindings::new().with(Symbol::Omega, omega.clone()))?
        .to_f64()
        .expect("fully bound");
    Ok(OracleComparison {
        m,
        n,
        omega: omega.clone(),
        numeric,
        exact,
        relative_error: ((numeric - exact) / exact).abs(),
    })
}

/// Exact Lebesgue value of `∫Δ^m Δ̇ⁿ` for even `n`, reading `Δ̇² = e^{-2ω|τ|}/4`
/// almost everywhere: `2^{1-m-n} / (m+n) · ω^{-(m+1)}`.
pub fn lebesgue_value(m: u32, n: u32) -> Result<ValuePoly> {
    if n % 2 == 1 {
        return Ok(ValuePoly::zero());
    }
    if m + n == 0 {
        return Err(Error::BareMeasure("1".into()));
    }
    let two = Rational::from_integer(2.into());
    let c = num_traits::pow(two.clone(), (m + n) as usize).recip() * two / Rational::from_integer((m + n).into());
    Ok(w(c, -(m as i32) - 1))
}

/// Reduced value minus the Lebesgue value; zero on the `n ∈ {0, 2}` sector.
pub fn rule_minus_lebesgue(m: u32, n: u32) -> Result<ValuePoly> {
    let rule = reduce_value(&IntegrandSum::monomial(m, n, 0, 0, ValuePoly::one()))?;
    Ok(rule - lebesgue_value(m, n)?)
}
