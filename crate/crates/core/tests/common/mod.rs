#![allow(dead_code)]

use distcalc::{rat, Exponents, IntegrandMonomial, IntegrandSum, Powers, ValuePoly};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = distcalc::Rational> {
    (-12i64..=12, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

pub fn exponents() -> impl Strategy<Value = Exponents> {
    (0u32..3, 0u32..3, 0u32..3, -4i32..=4).prop_map(|(g, delta0, a, omega)| Exponents { g, delta0, a, omega })
}

pub fn value_poly() -> impl Strategy<Value = ValuePoly> {
    prop::collection::vec((rational(), exponents()), 0..5)
        .prop_map(|terms| terms.into_iter().map(|(c, e)| ValuePoly::monomial(c, e)).sum())
}

/// Values without `δ₀`.
pub fn regular_value_poly() -> impl Strategy<Value = ValuePoly> {
    prop::collection::vec((rational(), exponents()), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, mut e)| {
                e.delta0 = 0;
                ValuePoly::monomial(c, e)
            })
            .sum()
    })
}

/// Powers the reducer accepts: not the bare measure, and at most two `δ`
/// factors after the field equation.
pub fn reducible_powers() -> impl Strategy<Value = Powers> {
    (0u32..=4, 0u32..=4, 0u32..=2, 0u32..=2)
        .prop_filter("delta^3 has no rule", |(_, _, p, q)| p + q <= 2)
        .prop_map(|(m, n, p, q)| {
            let mut powers = Powers::new(m, n, p, q);
            if powers.is_bare() {
                powers.m = 1;
            }
            powers
        })
}

pub fn reducible_sum() -> impl Strategy<Value = IntegrandSum> {
    prop::collection::vec((reducible_powers(), value_poly()), 0..4)
        .prop_map(|terms| IntegrandSum::from_terms(terms.into_iter().map(|(p, c)| IntegrandMonomial::new(p, c))))
}

/// Any non-bare product, including ones the reducer rejects.
pub fn renderable_sum() -> impl Strategy<Value = IntegrandSum> {
    let powers = (0u32..=5, 0u32..=5, 0u32..=5, 0u32..=5).prop_map(|(m, n, p, q)| {
        let mut powers = Powers::new(m, n, p, q);
        if powers.is_bare() {
            powers.q = 1;
        }
        powers
    });
    prop::collection::vec((powers, value_poly()), 0..5)
        .prop_map(|terms| IntegrandSum::from_terms(terms.into_iter().map(|(p, c)| IntegrandMonomial::new(p, c))))
}

pub fn unnormalized_sum() -> impl Strategy<Value = IntegrandSum> {
    let powers = (0u32..=2, 0u32..=2, 0u32..=2, 0u32..=2).prop_map(|(m, n, p, q)| Powers::new(m, n, p, q));
    prop::collection::vec((powers, value_poly()), 0..8).prop_map(|terms| IntegrandSum {
        local: ValuePoly::zero(),
        terms: terms.into_iter().map(|(p, c)| IntegrandMonomial::new(p, c)).collect(),
    })
}
