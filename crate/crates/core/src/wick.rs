//! Vertices of the transformed oscillator and their Wick contractions.
//!
//! The coordinate change `x = q - g q³/3 + g² a q⁵/5` turns the free action into
//! interaction vertices (plus a Jacobian part carrying `δ₀`). Vacuum diagrams
//! are produced by brute-force enumeration of all perfect matchings of the
//! vertex legs. For two vertices the second one is pinned at `τ = 0` and the
//! first one sits at `τ`, so every connected diagram is a single integral over
//! `τ`; the overall volume factor is divided out.
//!
//! Line values:
//!
//! | pair                        | equal time      | `τ` to `0`   |
//! |-----------------------------|-----------------|--------------|
//! | `q q`                       | `Δ(0)`          | `Δ`          |
//! | `q̇ q`  (dot on `τ` vertex)  | `Δ̇(0) = 0`      | `+Δ̇`         |
//! | `q q̇`  (dot on `0` vertex)  | `Δ̇(0) = 0`      | `-Δ̇`         |
//! | `q̇ q̇`                       | `-Δ̈(0)`         | `-Δ̈`         |
//!
//! Contributions are those of `-log(Z/Z_ω)` per unit time: the first cumulant
//! of the action at each order, minus half the connected second cumulant of the
//! first-order action at order `g²`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::integrand::{ddelta_at_zero, delta_at_zero, IntegrandSum, Powers};
use crate::ring::{rat, Symbol, ValuePoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leg {
    Q,
    QDot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub legs: Vec<Leg>,
    /// Sign, symmetry prefactor and powers of `g`, `a`, `ω`, `δ₀`.
    pub coupling: ValuePoly,
    pub jacobian: bool,
}

impl Vertex {
    pub fn new(dots: usize, plain: usize, coupling: ValuePoly) -> Self {
        let mut legs = vec![Leg::QDot; dots];
        legs.extend(std::iter::repeat_n(Leg::Q, plain));
        let jacobian = coupling.degree(Symbol::Delta0).unwrap_or(0) > 0;
        Vertex {
            legs,
            coupling,
            jacobian,
        }
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn dot_count(&self) -> usize {
        self.legs.iter().filter(|l| **l == Leg::QDot).count()
    }

    /// Field content such as `dq^2 q^2`.
    pub fn label(&self) -> String {
        let dots = self.dot_count();
        let plain = self.leg_count() - dots;
        let mut parts = Vec::new();
        for (name, k) in [("dq", dots), ("q", plain)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.coupling, self.label())
    }
}

/// Interaction vertices carrying exactly `g^order`.
pub fn action_vertices(order: u32) -> Result<Vec<Vertex>> {
    let g = |k: i32| ValuePoly::symbol_pow(Symbol::G, k);
    let w2 = ValuePoly::omega_term(rat(1, 1), 2);
    let a = ValuePoly::symbol(Symbol::A);
    let d0 = ValuePoly::symbol(Symbol::Delta0);
    let c = |n, d| ValuePoly::constant(rat(n, d));
    match order {
        1 => Ok(vec![
            // -(g/2)·2 q̇²q²
            Vertex::new(2, 2, -g(1)),
            // -(g/2)(2ω²/3) q⁴
            Vertex::new(0, 4, g(1) * &w2 * c(-1, 3)),
            // Jacobian: +g δ₀ q²
            Vertex::new(0, 2, g(1) * &d0),
        ]),
        2 => Ok(vec![
            // (g²/2)(1 + 2a) q̇²q⁴
            Vertex::new(2, 4, g(2) * (c(1, 2) + a.clone())),
            // (g²/2) ω² (1/9 + 2a/5) q⁶
            Vertex::new(0, 6, g(2) * &w2 * (c(1, 18) + a.scale(&rat(1, 5)))),
            // Jacobian: -g² (a - 1/2) δ₀ q⁴
            Vertex::new(0, 4, -(g(2) * (a - c(1, 2)) * &d0)),
        ]),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// All perfect matchings of `0..n`, each as a list of `(i, j)` with `i < j`.
pub fn perfect_matchings(n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n % 2 == 1 {
        return Err(Error::OddLegCount(n));
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    let mut current = Vec::with_capacity(n / 2);
    extend_matchings(&mut used, &mut current, &mut out);
    Ok(out)
}

fn extend_matchings(used: &mut [bool], current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(current.clone());
        return;
    };
    used[first] = true;
    for partner in first + 1..used.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        current.push((first, partner));
        extend_matchings(used, current, out);
        current.pop();
        used[partner] = false;
    }
    used[first] = false;
}

/// `(2k - 1)!!` for `n = 2k` legs.
pub fn matching_count(n: usize) -> u64 {
    (1..n as u64).step_by(2).product()
}

/// Equal-time self-loop counts of a contraction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loops {
    /// `⟨q q⟩ = Δ(0)`
    pub plain: u32,
    /// `⟨q̇ q̇⟩ = -Δ̈(0)`
    pub dotted: u32,
    /// `⟨q̇ q⟩ = 0`
    pub mixed: u32,
}

impl Loops {
    pub fn value(&self) -> ValuePoly {
        if self.mixed > 0 {
            return ValuePoly::zero();
        }
        delta_at_zero().pow(self.plain) * (-ddelta_at_zero()).pow(self.dotted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    /// Pairs of leg indices; the legs of the second vertex follow those of the first.
    pub pairing: Vec<(usize, usize)>,
    pub connected: bool,
    /// Number of pairs joining the two vertices.
    pub cross_lines: u32,
    pub loops: Loops,
    /// Product of the equal-time lines.
    pub local_factor: ValuePoly,
    /// Signed product of the lines between the vertices, or the scalar `1`
    /// for a single vertex. A disconnected pair of vertices leaves the bare
    /// measure.
    pub integrand: IntegrandSum,
    /// Product of the vertex couplings.
    pub coupling: ValuePoly,
}

impl Contraction {
    /// `±1` from the orientation of `Δ̇` lines and the sign of `⟨q̇q̇⟩ = -Δ̈`.
    pub fn sign(&self) -> i64 {
        match self.integrand.terms.first() {
            Some(t) if t.coeff.as_constant().is_some_and(|c| c.is_negative()) => -1,
            _ => 1,
        }
    }

    /// Cross-line powers `(m, n, p)`.
    pub fn cross_powers(&self) -> Powers {
        self.integrand.terms.first().map(|t| t.powers).unwrap_or_default()
    }

    /// Full value: couplings times local lines times the integrand.
    pub fn value(&self) -> IntegrandSum {
        self.integrand.scale(&(&self.coupling * &self.local_factor))
    }
}

/// Every perfect matching of the legs of one vertex, or of two vertices with the
/// second pinned at the origin.
pub fn enumerate_contractions(v1: &Vertex, v2: Option<&Vertex>) -> Result<Vec<Contraction>> {
    let split = v1.leg_count();
    let mut legs = v1.legs.clone();
    if let Some(v2) = v2 {
        legs.extend(&v2.legs);
    }
    let coupling = match v2 {
        Some(v2) => &v1.coupling * &v2.coupling,
        None => v1.coupling.clone(),
    };

    let matchings = perfect_matchings(legs.len())?;
    let mut out = Vec::with_capacity(matchings.len());
    for pairing in matchings {
        let mut loops = Loops::default();
        let mut cross = Powers::default();
        let mut sign = 1i64;
        let mut cross_lines = 0;
        for &(i, j) in &pairing {
            let same_vertex = (i < split) == (j < split);
            if same_vertex {
                match (legs[i], legs[j]) {
                    (Leg::Q, Leg::Q) => loops.plain += 1,
                    (Leg::QDot, Leg::QDot) => loops.dotted += 1,
                    _ => loops.mixed += 1,
                }
                continue;
            }
            cross_lines += 1;
            // i < j, so i sits on the first vertex (time τ) and j on the pinned one
            match (legs[i], legs[j]) {
                (Leg::Q, Leg::Q) => cross.m += 1,
                (Leg::QDot, Leg::Q) => cross.n += 1,
                (Leg::Q, Leg::QDot) => {
                    cross.n += 1;
                    sign = -sign;
                }
                (Leg::QDot, Leg::QDot) => {
                    cross.p += 1;
                    sign = -sign;
                }
            }
        }
        let integrand = if v2.is_some() {
            IntegrandSum::monomial(cross.m, cross.n, cross.p, 0, ValuePoly::from(sign))
        } else {
            IntegrandSum::from_local(ValuePoly::one())
        };
        out.push(Contraction {
            pairing,
            connected: v2.is_none() || cross_lines > 0,
            cross_lines,
            loops,
            local_factor: loops.value(),
            integrand,
            coupling: coupling.clone(),
        });
    }
    Ok(out)
}

/// Topological class of a vacuum diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagramClass {
    /// Single first-order vertex.
    FirstOrder,
    /// Single second-order vertex, no time integral.
    Local,
    /// Two first-order vertices, at least one from the Jacobian.
    JacobianBubbles,
    /// Two interaction vertices joined by two lines.
    ThreeBubbles,
    /// Two interaction vertices joined by four lines.
    Watermelons,
}

impl DiagramClass {
    pub fn name(self) -> &'static str {
        match self {
            DiagramClass::FirstOrder => "first-order",
            DiagramClass::Local => "local",
            DiagramClass::JacobianBubbles => "jacobian-bubbles",
            DiagramClass::ThreeBubbles => "three-bubbles",
            DiagramClass::Watermelons => "watermelons",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            DiagramClass::FirstOrder => 1,
            _ => 2,
        }
    }

    /// Factor multiplying the summed diagrams of this class: `1` for single
    /// vertices, `-1/2!` for the second cumulant.
    pub fn prefactor(self) -> ValuePoly {
        match self {
            DiagramClass::FirstOrder | DiagramClass::Local => ValuePoly::one(),
            _ => ValuePoly::constant(rat(-1, 2)),
        }
    }

    pub fn all() -> [DiagramClass; 5] {
        [
            DiagramClass::FirstOrder,
            DiagramClass::Local,
            DiagramClass::JacobianBubbles,
            DiagramClass::ThreeBubbles,
            DiagramClass::Watermelons,
        ]
    }

    fn of_pair(v1: &Vertex, v2: &Vertex, cross_lines: u32) -> DiagramClass {
        if v1.jacobian || v2.jacobian {
            DiagramClass::JacobianBubbles
        } else if cross_lines == 2 {
            DiagramClass::ThreeBubbles
        } else {
            DiagramClass::Watermelons
        }
    }
}

impl fmt::Display for DiagramClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One diagram of a class: `coeff · Δ(0)^plain · (-Δ̈(0))^dotted · ∫Δ^m Δ̇^n Δ̈^p`,
/// with the couplings' power of `g` stripped from `coeff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramTerm {
    pub class: DiagramClass,
    pub loops: Loops,
    /// `None` for diagrams without a time integral.
    pub cross: Option<Powers>,
    pub coeff: ValuePoly,
    /// Number of contractions merged into this diagram.
    pub multiplicity: usize,
}

impl DiagramTerm {
    /// True for diagrams with an equal-time `⟨q̇q⟩` loop.
    pub fn vanishes(&self) -> bool {
        self.loops.mixed > 0
    }

    /// Human-readable factor list, e.g. `D(0) L0 * dD^2`.
    pub fn shape(&self) -> String {
        let mut parts = Vec::new();
        for (name, k) in [("D(0)", self.loops.plain), ("L0", self.loops.dotted), ("dD(0)", self.loops.mixed)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        match (parts.is_empty(), self.cross) {
            (true, Some(p)) => p.to_string(),
            (false, Some(p)) => format!("{} * {p}", parts.join(" ")),
            (true, None) => "1".to_string(),
            (false, None) => parts.join(" "),
        }
    }

    /// Contribution including the class prefactor and `g^order`.
    pub fn value(&self) -> IntegrandSum {
        let scalar = self.class.prefactor()
            * ValuePoly::symbol_pow(Symbol::G, self.class.order() as i32)
            * &self.coeff
            * self.loops.value();
        match self.cross {
            Some(p) => IntegrandSum::monomial(p.m, p.n, p.p, 0, scalar),
            None => IntegrandSum::from_local(scalar),
        }
    }
}

fn strip_g(v: &ValuePoly, order: u32) -> ValuePoly {
    let mut out = ValuePoly::zero();
    for (e, c) in v.terms() {
        debug_assert_eq!(e.g, order);
        let mut e = *e;
        e.g -= order;
        out += ValuePoly::monomial(c.clone(), e);
    }
    out
}

type DiagramKey = (DiagramClass, Loops, Option<Powers>);

fn accumulate(table: &mut BTreeMap<DiagramKey, (ValuePoly, usize)>, key: DiagramKey, coeff: ValuePoly) {
    let entry = table.entry(key).or_insert_with(|| (ValuePoly::zero(), 0));
    entry.0 += coeff;
    entry.1 += 1;
}

/// Connected diagrams at order `g^order`, merged by class and line content.
///
/// Diagrams with an equal-time `⟨q̇q⟩` loop are kept (and reported as vanishing)
/// rather than omitted.
pub fn diagram_table(order: u32) -> Result<Vec<DiagramTerm>> {
    let mut table = BTreeMap::new();
    match order {
        1 | 2 => {
            let class = if order == 1 { DiagramClass::FirstOrder } else { DiagramClass::Local };
            for v in action_vertices(order)? {
                for c in enumerate_contractions(&v, None)? {
                    accumulate(&mut table, (class, c.loops, None), strip_g(&c.coupling, order));
                }
            }
        }
        other => return Err(Error::UnsupportedOrder(other)),
    }
    if order == 2 {
        let first = action_vertices(1)?;
        for v1 in &first {
            for v2 in &first {
                for c in enumerate_contractions(v1, Some(v2))? {
                    if !c.connected {
                        continue;
                    }
                    let class = DiagramClass::of_pair(v1, v2, c.cross_lines);
                    let coeff = strip_g(&c.coupling, 2).scale(&rat(c.sign(), 1));
                    accumulate(&mut table, (class, c.loops, Some(c.cross_powers())), coeff);
                }
            }
        }
    }
    Ok(table
        .into_iter()
        .map(|((class, loops, cross), (coeff, multiplicity))| DiagramTerm {
            class,
            loops,
            cross,
            coeff,
            multiplicity,
        })
        .collect())
}

/// Summed value of every diagram of one class, prefactor and `g` included.
pub fn class_sum(class: DiagramClass) -> Result<IntegrandSum> {
    Ok(diagram_table(class.order())?
        .iter()
        .filter(|d| d.class == class)
        .fold(IntegrandSum::new(), |acc, d| acc.add(&d.value())))
}

/// Order-`g^n` contribution to the free-energy density, split into the part
/// without a time integral and the single-integral remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderContribution {
    pub local: ValuePoly,
    pub nonlocal: IntegrandSum,
}

/// Built directly from the contractions, independently of [`diagram_table`].
pub fn order_contribution(n: u32) -> Result<OrderContribution> {
    let mut total = IntegrandSum::new();
    for v in action_vertices(n)? {
        for c in enumerate_contractions(&v, None)? {
            total = total.add(&c.value());
        }
    }
    if n == 2 {
        let first = action_vertices(1)?;
        let half = ValuePoly::constant(rat(-1, 2));
        for v1 in &first {
            for v2 in &first {
                for c in enumerate_contractions(v1, Some(v2))? {
                    if c.connected {
                        total = total.add(&c.value().scale(&half));
                    }
                }
            }
        }
    }
    let local = total.local.clone();
    Ok(OrderContribution {
        local,
        nonlocal: IntegrandSum {
            local: ValuePoly::zero(),
            terms: total.terms,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d0() -> ValuePoly {
        ValuePoly::symbol(Symbol::Delta0)
    }

    #[test]
    fn vertex_sets() {
        let v1 = action_vertices(1).unwrap();
        assert_eq!(v1.iter().map(Vertex::leg_count).collect::<Vec<_>>(), vec![4, 4, 2]);
        assert_eq!(v1[0].dot_count(), 2);
        assert_eq!(v1.iter().map(|v| v.jacobian).collect::<Vec<_>>(), vec![false, false, true]);

        let v2 = action_vertices(2).unwrap();
        assert_eq!(v2.iter().map(Vertex::leg_count).collect::<Vec<_>>(), vec![6, 6, 4]);
        assert_eq!(v2[0].dot_count(), 2);
        let at_half = v2[2]
            .coupling
            .substitute(&crate::ring::Bindings::new().with(Symbol::A, rat(1, 2)))
            .unwrap();
        assert!(at_half.is_zero());

        assert!(matches!(action_vertices(3), Err(Error::UnsupportedOrder(3))));
    }

    #[test]
    fn matching_counts() {
        for n in [0, 2, 4, 6, 8, 10, 12] {
            assert_eq!(perfect_matchings(n).unwrap().len() as u64, matching_count(n), "n = {n}");
        }
        assert_eq!(matching_count(12), 10395);
        assert!(matches!(perfect_matchings(5), Err(Error::OddLegCount(5))));
    }

    #[test]
    fn single_q4_vertex() {
        let v = Vertex::new(0, 4, ValuePoly::one());
        let cs = enumerate_contractions(&v, None).unwrap();
        assert_eq!(cs.len(), 3);
        for c in cs {
            assert_eq!(c.local_factor, delta_at_zero().pow(2));
        }
    }

    #[test]
    fn single_dq2_q2_vertex() {
        let v = Vertex::new(2, 2, ValuePoly::one());
        let cs = enumerate_contractions(&v, None).unwrap();
        assert_eq!(cs.len(), 3);
        let nonzero: Vec<_> = cs.iter().filter(|c| !c.local_factor.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].local_factor, -ddelta_at_zero() * delta_at_zero());
        assert_eq!(cs.iter().filter(|c| c.loops.mixed == 2).count(), 2);
    }

    #[test]
    fn crossed_dq2_q2_pair() {
        let v = Vertex::new(2, 2, ValuePoly::one());
        let cs = enumerate_contractions(&v, Some(&v)).unwrap();
        assert_eq!(cs.len(), 105);
        let full: Vec<_> = cs.iter().filter(|c| c.cross_lines == 4).collect();
        assert_eq!(full.len(), 24);
        let mut by_shape = BTreeMap::new();
        for c in full {
            *by_shape.entry(c.cross_powers()).or_insert(0i64) += c.sign();
        }
        assert_eq!(by_shape[&Powers::new(2, 0, 2, 0)], 4);
        assert_eq!(by_shape[&Powers::new(1, 2, 1, 0)], 16);
        assert_eq!(by_shape[&Powers::new(0, 4, 0, 0)], 4);
        // disconnected: each vertex closes on itself
        assert_eq!(cs.iter().filter(|c| !c.connected).count(), 9);
    }

    #[test]
    fn orientation_signs() {
        let dotted = Vertex::new(1, 0, ValuePoly::one());
        let plain = Vertex::new(0, 1, ValuePoly::one());
        let c = &enumerate_contractions(&dotted, Some(&plain)).unwrap()[0];
        assert_eq!((c.sign(), c.cross_powers()), (1, Powers::new(0, 1, 0, 0)));
        let c = &enumerate_contractions(&plain, Some(&dotted)).unwrap()[0];
        assert_eq!((c.sign(), c.cross_powers()), (-1, Powers::new(0, 1, 0, 0)));
        let c = &enumerate_contractions(&dotted, Some(&dotted)).unwrap()[0];
        assert_eq!((c.sign(), c.cross_powers()), (-1, Powers::new(0, 0, 1, 0)));
    }

    #[test]
    fn first_order_local_part() {
        let c = order_contribution(1).unwrap();
        assert!(c.nonlocal.is_zero());
        // -g [-Δ̈(0) + ω²Δ(0) - δ₀] Δ(0) with the field equation at the origin
        let bracket = -ddelta_at_zero() + ValuePoly::omega_term(rat(1, 1), 2) * delta_at_zero() - d0();
        let expected = -(ValuePoly::symbol(Symbol::G) * bracket * delta_at_zero());
        assert_eq!(c.local, expected);
        assert!(c.local.is_zero());
    }

    #[test]
    fn class_and_contribution_agree() {
        for order in [1, 2] {
            let direct = order_contribution(order).unwrap();
            let by_class = DiagramClass::all()
                .into_iter()
                .filter(|c| c.order() == order)
                .fold(IntegrandSum::new(), |acc, c| acc.add(&class_sum(c).unwrap()));
            assert_eq!(by_class.local, direct.local);
            assert_eq!(by_class.terms, direct.nonlocal.terms);
        }
    }

    #[test]
    fn nonlocal_part_stays_in_reducer_closure() {
        let c = order_contribution(2).unwrap();
        for t in &c.nonlocal.terms {
            let p = t.powers;
            assert!(p.m <= 4 && p.n <= 4 && p.p <= 4 && p.q == 0, "{p}");
        }
    }
}
