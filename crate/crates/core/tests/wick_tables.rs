use distcalc::integrand::{ddelta_at_zero, delta_at_zero};
use distcalc::reducer::reduce_value;
use distcalc::wick::{action_vertices, class_sum, diagram_table, order_contribution, DiagramClass, Loops};
use distcalc::{rat, IntegrandSum, Powers, Symbol, ValuePoly};

fn w(n: i64, d: i64, k: i32) -> ValuePoly {
    ValuePoly::omega_term(rat(n, d), k)
}

fn d0() -> ValuePoly {
    ValuePoly::symbol(Symbol::Delta0)
}

fn a() -> ValuePoly {
    ValuePoly::symbol(Symbol::A)
}

fn g(k: i32) -> ValuePoly {
    ValuePoly::symbol_pow(Symbol::G, k)
}

fn l0() -> ValuePoly {
    -ddelta_at_zero()
}

type Row = (u32, u32, Option<(u32, u32, u32)>, ValuePoly);

fn surviving(order: u32, class: DiagramClass) -> Vec<Row> {
    diagram_table(order)
        .unwrap()
        .into_iter()
        .filter(|d| d.class == class && !d.vanishes() && !d.coeff.is_zero())
        .map(|d| (d.loops.plain, d.loops.dotted, d.cross.map(|p| (p.m, p.n, p.p)), d.coeff))
        .collect()
}

fn assert_rows(order: u32, class: DiagramClass, mut expected: Vec<Row>) {
    let mut got = surviving(order, class);
    let key = |r: &Row| (r.0, r.1, r.2);
    expected.sort_by_key(key);
    got.sort_by_key(key);
    assert_eq!(got, expected, "{class}");
}

#[test]
fn vertices() {
    let one: Vec<String> = action_vertices(1).unwrap().iter().map(|v| v.label()).collect();
    assert_eq!(one.len(), 3);
    let two = action_vertices(2).unwrap();
    assert_eq!(two.len(), 3);
    assert_eq!(two.iter().filter(|v| v.jacobian).count(), 1);
    assert!(action_vertices(3).is_err());
}

#[test]
fn first_order_table() {
    assert_rows(
        1,
        DiagramClass::FirstOrder,
        vec![
            (1, 0, None, d0()),
            (1, 1, None, ValuePoly::from(-1)),
            (2, 0, None, w(-1, 1, 2)),
        ],
    );
    let expected = &g(1) * &(d0() * delta_at_zero() - delta_at_zero() * l0() - w(1, 1, 2) * delta_at_zero().pow(2));
    let sum = class_sum(DiagramClass::FirstOrder).unwrap();
    assert!(sum.is_local());
    assert_eq!(sum.local, expected);
    assert!(expected.is_zero());
}

#[test]
fn local_table() {
    assert_rows(
        2,
        DiagramClass::Local,
        vec![
            (2, 0, None, -(a() - ValuePoly::constant(rat(1, 2))).scale(&rat(3, 1)) * d0()),
            (2, 1, None, a().scale(&rat(3, 1)) + ValuePoly::constant(rat(3, 2))),
            (3, 0, None, a() * w(3, 1, 2) + w(5, 6, 2)),
        ],
    );
}

#[test]
fn jacobian_bubble_table() {
    assert_rows(
        2,
        DiagramClass::JacobianBubbles,
        vec![
            (0, 0, Some((2, 0, 0)), d0().pow(2).scale(&rat(2, 1))),
            (0, 1, Some((2, 0, 0)), d0().scale(&rat(-4, 1))),
            (1, 0, Some((0, 2, 0)), d0().scale(&rat(-4, 1))),
            (1, 0, Some((2, 0, 0)), d0() * w(-8, 1, 2)),
        ],
    );
}

#[test]
fn three_bubble_table() {
    assert_rows(
        2,
        DiagramClass::ThreeBubbles,
        vec![
            (0, 2, Some((2, 0, 0)), ValuePoly::from(2)),
            (1, 1, Some((0, 2, 0)), ValuePoly::from(4)),
            (1, 1, Some((2, 0, 0)), w(8, 1, 2)),
            (2, 0, Some((0, 0, 2)), ValuePoly::from(2)),
            (2, 0, Some((0, 2, 0)), w(8, 1, 2)),
            (2, 0, Some((2, 0, 0)), w(8, 1, 4)),
        ],
    );
}

#[test]
fn watermelon_table() {
    assert_rows(
        2,
        DiagramClass::Watermelons,
        vec![
            (0, 0, Some((0, 4, 0)), ValuePoly::from(4)),
            (0, 0, Some((1, 2, 1)), ValuePoly::from(16)),
            (0, 0, Some((2, 0, 2)), ValuePoly::from(4)),
            (0, 0, Some((2, 2, 0)), w(16, 1, 2)),
            (0, 0, Some((4, 0, 0)), w(8, 3, 4)),
        ],
    );
}

#[test]
fn vanishing_diagrams_carry_a_mixed_loop() {
    let table = diagram_table(2).unwrap();
    let vanishing: Vec<_> = table.iter().filter(|d| d.vanishes()).collect();
    assert_eq!(vanishing.len(), 7);
    for d in vanishing {
        assert!(d.loops.mixed > 0);
        assert!(d.value().is_zero(), "{}", d.shape());
    }
    let mixed_free = Loops { plain: 1, dotted: 1, mixed: 0 };
    assert!(!mixed_free.value().is_zero());
}

fn sum(terms: &[(Powers, ValuePoly)]) -> IntegrandSum {
    IntegrandSum::from_terms(
        terms
            .iter()
            .map(|(p, c)| distcalc::IntegrandMonomial::new(*p, c.clone())),
    )
}

#[test]
fn analytic_class_forms() {
    let dz = delta_at_zero();
    let half = ValuePoly::constant(rat(-1, 2)) * g(2);
    let p = |m, n, pp| Powers::new(m, n, pp, 0);

    let melons = sum(&[
        (p(2, 0, 2), ValuePoly::from(4)),
        (p(1, 2, 1), ValuePoly::from(16)),
        (p(0, 4, 0), ValuePoly::from(4)),
        (p(2, 2, 0), w(16, 1, 2)),
        (p(4, 0, 0), w(8, 3, 4)),
    ])
    .scale(&half);
    assert_eq!(class_sum(DiagramClass::Watermelons).unwrap(), melons);

    let bubbles = sum(&[
        (p(0, 2, 0), dz.clone() * l0() * ValuePoly::from(4) + dz.pow(2) * w(8, 1, 2)),
        (p(0, 0, 2), dz.pow(2).scale(&rat(2, 1))),
        (
            p(2, 0, 0),
            l0().pow(2).scale(&rat(2, 1)) + dz.clone() * l0() * w(8, 1, 2) + dz.pow(2) * w(8, 1, 4),
        ),
    ])
    .scale(&half);
    assert_eq!(class_sum(DiagramClass::ThreeBubbles).unwrap(), bubbles);

    let jacobian = sum(&[
        (p(2, 0, 0), d0().pow(2).scale(&rat(2, 1)) - d0() * l0().scale(&rat(4, 1)) - d0() * dz.clone() * w(8, 1, 2)),
        (p(0, 2, 0), -(d0() * dz.clone()).scale(&rat(4, 1))),
    ])
    .scale(&half);
    assert_eq!(class_sum(DiagramClass::JacobianBubbles).unwrap(), jacobian);

    let local = &g(2)
        * &((a().scale(&rat(3, 1)) + ValuePoly::constant(rat(3, 2))) * dz.pow(2) * l0()
            + (a() * w(3, 1, 2) + w(5, 6, 2)) * dz.pow(3)
            - (a() - ValuePoly::constant(rat(1, 2))).scale(&rat(3, 1)) * d0() * dz.pow(2));
    assert_eq!(class_sum(DiagramClass::Local).unwrap(), IntegrandSum::from_local(local));
}

#[test]
fn reduced_class_sums() {
    let expect = [
        (DiagramClass::Local, d0() * w(3, 4, -2) + w(-1, 12, -1)),
        (DiagramClass::JacobianBubbles, d0().pow(2) * w(1, 4, -3) + d0() * w(1, 2, -2)),
        (DiagramClass::ThreeBubbles, d0().pow(2) * w(-1, 4, -3) + d0() * w(-3, 4, -2)),
        (DiagramClass::Watermelons, d0() * w(-1, 2, -2) + w(1, 12, -1)),
    ];
    let mut total = ValuePoly::zero();
    for (class, value) in expect {
        let reduced = reduce_value(&class_sum(class).unwrap()).unwrap();
        assert_eq!(reduced, &g(2) * &value, "{class}");
        total += reduced;
    }
    assert!(total.is_zero());
}

#[test]
fn contraction_sum_matches_table() {
    for n in [1, 2] {
        let direct = order_contribution(n).unwrap();
        let direct = reduce_value(&IntegrandSum {
            local: direct.local,
            terms: direct.nonlocal.terms,
        })
        .unwrap();
        let tabulated: ValuePoly = DiagramClass::all()
            .into_iter()
            .filter(|c| c.order() == n)
            .map(|c| reduce_value(&class_sum(c).unwrap()).unwrap())
            .sum();
        assert_eq!(direct, tabulated);
        assert!(direct.is_zero());
    }
}
