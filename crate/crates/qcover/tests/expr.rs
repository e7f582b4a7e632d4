use proptest::prelude::*;
use qcover::braid::Braid;
use qcover::cover::Cover;
use qcover::expr::{parse, Evaluator, Expr, ExprError, GenKind, QFunc, Value};
use qcover::root::CartanDatum;
use qcover::scalar::QPiScalar;
use std::sync::Arc;

const CORPUS: [&str; 50] = [
    "1",
    "0",
    "q",
    "pi",
    "q^-1",
    "q^3",
    "2*q^-3",
    "-q",
    "-q^4 + 1",
    "q - q^-1",
    "pi*q - q^-1",
    "(q^2 - 1)/(q - 1)",
    "(pi*q - q^-1)^2",
    "qint(3)",
    "qint(-2)",
    "qfact(4)",
    "qbinom(4,2)",
    "qbinom(-3,2)",
    "qbinom(4,2,2)",
    "qint(5,1)",
    "E_1",
    "F_2",
    "E_1^(2)",
    "F_2^(3)",
    "E_1^2",
    "K{1,-1}",
    "J{0,1}",
    "K{0,0}",
    "E_1*F_1 - F_1*E_1",
    "E_1*F_1^(2)",
    "E_2*E_1*E_1 - qint(2)*E_1*E_2*E_1 + E_1*E_1*E_2",
    "(E_1 - F_1)*(E_1 + F_1)",
    "-(E_1 + F_2)",
    "K{1,0}*E_1*K{-1,0}",
    "J{1,0}*K{1,0}*E_2",
    "T1(E_2)",
    "T1^-1(E_2)",
    "T2(T1(E_2))",
    "T1(F_1^(2))",
    "T2^-1(K{1,1})",
    "T1(E_1 + E_2)",
    "th_1",
    "th_1*th_2 - th_2*th_1",
    "th_1^(2)*th_2",
    "form(th_1, th_1)",
    "form(th_1*th_2, th_2*th_1)",
    "bar(q)",
    "bar(E_1*K{1,0})",
    "(pi + 1)*E_1/2",
    "pi*(q^6 - q^2) + 1",
];

fn b2() -> Braid {
    Braid::new(Arc::new(Cover::new(Arc::new(CartanDatum::b2_super()))))
}

#[test]
fn corpus_round_trips() {
    for s in CORPUS {
        let e = parse(s, 2).unwrap_or_else(|err| panic!("{s}: {err}"));
        assert_eq!(e.to_string(), s);
        assert_eq!(parse(&e.to_string(), 2).unwrap(), e);
    }
}

#[test]
fn loose_spacing_normalizes() {
    let e = parse("  E_1 *F_1-F_1* E_1 ", 2).unwrap();
    assert_eq!(e.to_string(), "E_1*F_1 - F_1*E_1");
    assert_eq!(parse("T1 ^ -1 ( E_2 )", 2).unwrap().to_string(), "T1^-1(E_2)");
    assert_eq!(parse("E_1^(1)", 2).unwrap().to_string(), "E_1");
}

#[test]
fn corpus_values_render_and_reparse() {
    let b = b2();
    let ev = Evaluator::new(&b);
    for s in CORPUS {
        let v = ev.eval_str(s).unwrap_or_else(|err| panic!("{s}: {err}"));
        let text = ev.render(&v);
        let w = ev.eval_str(&text).unwrap_or_else(|err| panic!("{s} -> {text}: {err}"));
        match (&v, &w) {
            (Value::Cover(x), Value::Cover(y)) => assert!(b.cover().equals(x, y), "{s}"),
            (Value::Cover(x), Value::Scalar(c)) | (Value::Scalar(c), Value::Cover(x)) => {
                assert!(b.cover().equals(x, &b.cover().scalar(c.clone())), "{s}")
            }
            (Value::Half(x), Value::Half(y)) => assert!(b.cover().half().is_zero(&x.sub(y)), "{s}"),
            (Value::Half(x), Value::Scalar(c)) => {
                assert!(x.len() <= 1 && x.iter().all(|(w, d)| w.0.is_empty() && d == c), "{s}")
            }
            (a, c) => assert_eq!(a, c, "{s}"),
        }
    }
}

#[test]
fn evaluation_matches_library() {
    let b = b2();
    let ev = Evaluator::new(&b);
    let u = b.cover();
    let Value::Cover(x) = ev.eval_str("T1(E_2)").unwrap() else { panic!() };
    assert!(u.equals(&x, &b.apply(0, 1, &u.e(1))));
    let Value::Scalar(c) = ev.eval_str("qbinom(4,2)").unwrap() else { panic!() };
    assert_eq!(c, qcover::scalar::qbinom(4, 2, 1));
    let Value::Scalar(c) = ev.eval_str("form(th_1, th_1)").unwrap() else { panic!() };
    assert_eq!(&c, u.half().norm(0));
    let Value::Cover(z) = ev.eval_str("E_1*F_1 - pi*F_1*E_1").unwrap() else { panic!() };
    let expected = u.jk_tilde(0, 1, 1).sub(&u.jk_tilde(0, 0, -1)).scale(u.commutator_denominator(0));
    assert!(u.equals(&z, &expected));
}

#[test]
fn type_errors() {
    let b = b2();
    let ev = Evaluator::new(&b);
    assert!(matches!(ev.eval_str("th_1*E_1"), Err(ExprError::Type(_))));
    assert!(matches!(ev.eval_str("E_1/E_1"), Err(ExprError::Type(_))));
    assert!(matches!(ev.eval_str("T1(th_1)"), Err(ExprError::Type(_))));
    assert!(matches!(ev.eval_str("1/(1 + pi)"), Err(ExprError::Arithmetic(_))));
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(Expr::Int),
        Just(Expr::Q),
        Just(Expr::Pi),
        (0usize..2, 1u32..4, 0usize..3).prop_map(|(index, power, k)| Expr::Gen {
            kind: [GenKind::E, GenKind::F, GenKind::Theta][k],
            index,
            power
        }),
        prop::collection::vec(-3i64..4, 2).prop_map(Expr::K),
        prop::collection::vec(0i64..2, 2).prop_map(Expr::J),
        (-4i64..6, 0i64..4, prop::option::of(0usize..2)).prop_map(|(n, k, index)| Expr::Quantum {
            func: QFunc::Binom,
            args: vec![n, k],
            index
        }),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            prop::collection::vec((any::<bool>(), inner.clone()), 2..4).prop_map(Expr::Sum),
            inner.clone().prop_map(|e| Expr::Sum(vec![(true, e)])),
            prop::collection::vec((any::<bool>(), inner.clone()), 2..4).prop_map(|mut fs| {
                fs[0].0 = false;
                Expr::Product(fs)
            }),
            (inner.clone(), -3i64..4).prop_map(|(e, n)| Expr::Pow(Box::new(e), n)),
            (0usize..2, prop_oneof![Just(1i8), Just(-1i8)], inner.clone())
                .prop_map(|(index, sign, e)| Expr::Braid { index, sign, arg: Box::new(e) }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Form(Box::new(a), Box::new(b))),
            inner.prop_map(|e| Expr::Bar(Box::new(e))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_trees_parse_back(e in arb_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse(&text, 2).unwrap(), e);
    }

    #[test]
    fn scalar_text_parses_back(a in -5i64..6, k in -4i64..5, b in -5i64..6, m in -4i64..5, d in 0i64..3) {
        let c = (&QPiScalar::monomial(a, k, 0) + &QPiScalar::monomial(b, m, 1)).div(&(&QPiScalar::one() - &QPiScalar::q_pow(2 * d + 1))).unwrap();
        let b2 = b2();
        let ev = Evaluator::new(&b2);
        let Value::Scalar(back) = ev.eval_str(&c.to_string()).unwrap() else { panic!() };
        prop_assert_eq!(back, c);
    }
}
