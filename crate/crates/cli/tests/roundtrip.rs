use proptest::prelude::*;
use starforge_cli::{lower, parse_expression, render, Expr, Value};
use starforge_core::closed_form::ActionDisplay;
use starforge_core::complex::Rational;
use starforge_core::functional::FunctionalDisplay;
use starforge_core::phase::{Coord, PhaseContext};
use starforge_core::series::FunctionDisplay;

const CORPUS: [&str; 50] = [
    "q",
    "p",
    "0",
    "1/2",
    "I",
    "lam",
    "pi",
    "q + I*p",
    "q - I*p",
    "lam^-1 * q * gauss(1)",
    "gauss(1/2)",
    "gauss(0)",
    "q^2 + p^2",
    "(q + p)^3",
    "-q",
    "--q",
    "-q^2",
    "(-q)^2",
    "q*-p",
    "q - (p - 1)",
    "(q - p) - 1",
    "1 - lam + lam^2 - lam^3",
    "lam^-2*(q*p - p*q)",
    "(1/3)*q*gauss(2)*p",
    "2/4*q",
    "I*I",
    "(I + 1)*(I - 1)",
    "q*(p*(q*(p)))",
    "((((q))))",
    "1/2*(q^2 + p^2)",
    "(q - 1) + 2*I*(p + 1/2)",
    "gauss(1)*(2*q^2 + 2*p^2 - 1)",
    "lam*gauss(1) + gauss(2)",
    "(2*lam)^-1",
    "(3*I*lam^2)^-2",
    "q^0",
    "lam^0*p",
    "pi^2",
    "pi^-1*lam",
    "(1 + pi)*(1 - pi)",
    "delta(0,0)",
    "delta(1,-1/2; 0,2)",
    "-3*delta(1/3,0)",
    "density(gauss(1))",
    "pi^-1*lam*density(gauss(1))",
    "delta(0,0) + lam*density(q*gauss(1))",
    "2*delta(0,0) - lam^-1*density(q^2*gauss(1/2) + p)",
    "(1 + lam)*delta(0,0; 1,0)",
    "density(lam*q^2 - p)",
    "I*pi*delta(0,0) - density((q + I*p)^2*gauss(3))",
];

fn ctx() -> PhaseContext {
    PhaseContext::new(1).unwrap()
}

fn shown(v: &Value) -> String {
    match v {
        Value::Function(f) => FunctionDisplay(f).to_string(),
        Value::Action(a) => ActionDisplay(a).to_string(),
        Value::Functional(t) => FunctionalDisplay(t).to_string(),
    }
}

#[test]
fn corpus_round_trips() {
    let c = ctx();
    for src in CORPUS {
        let e = parse_expression(src, &c).unwrap_or_else(|err| panic!("{src}: {err}"));
        let text = render(&e, &c);
        assert_eq!(parse_expression(&text, &c).unwrap(), e, "{src} rendered as {text}");
        let v = lower(&e, &c).unwrap_or_else(|err| panic!("{src}: {err}"));
        // engine rendering is itself valid input for the same value
        let again = lower(&parse_expression(&shown(&v), &c).unwrap(), &c).unwrap();
        assert_eq!(again, v, "{src} shown as {}", shown(&v));
    }
}

#[test]
fn multi_pair_names() {
    let c = PhaseContext::new(3).unwrap();
    let e = parse_expression("q1*p3 - lam*q2^2", &c).unwrap();
    assert_eq!(render(&e, &c), "q1*p3 - lam*q2^2");
}

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..20, 1i64..6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        rational().prop_map(Expr::Num),
        Just(Expr::I),
        Just(Expr::Lam),
        Just(Expr::Coord(Coord::Q(0))),
        Just(Expr::Coord(Coord::P(0))),
        rational().prop_map(Expr::Gauss),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, 0i64..4).prop_map(|(e, n)| Expr::Pow(Box::new(e), n)),
        ]
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(e in expr()) {
        let c = ctx();
        let text = render(&e, &c);
        prop_assert_eq!(parse_expression(&text, &c).unwrap(), e, "{}", text);
    }
}
