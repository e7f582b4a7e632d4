use proptest::prelude::*;
use qcover::scalar::{choose2, qbinom, qbinom_at, qfact, qint, QPiScalar};

fn arb_scalar() -> impl Strategy<Value = QPiScalar> {
    prop::collection::vec((-3i64..4, -4i64..5, 0i64..2), 1..4).prop_map(|terms| {
        terms.into_iter().fold(QPiScalar::zero(), |acc, (c, k, e)| &acc + &QPiScalar::monomial(c, k, e))
    })
}

#[test]
fn small_values() {
    // [2] = πq + q^{-1}
    assert_eq!(qint(2, 1), &QPiScalar::monomial(1, 1, 1) + &QPiScalar::q_pow(-1));
    assert_eq!(qint(0, 1), QPiScalar::zero());
    assert_eq!(qbinom(5, 0, 1), QPiScalar::one());
    assert_eq!(qbinom(2, 3, 1), QPiScalar::zero());
    assert_eq!(qfact(3, 1), &(&qint(1, 1) * &qint(2, 1)) * &qint(3, 1));
}

#[test]
fn pi_squares_to_one() {
    assert_eq!(&QPiScalar::pi() * &QPiScalar::pi(), QPiScalar::one());
    assert!((&QPiScalar::one() + &QPiScalar::pi()).inv().is_err());
}

#[test]
fn pascal_rule() {
    // the convolution identity with a'' = 1
    for a in -4..=5i64 {
        for t in 1..=5i64 {
            let lhs = qbinom(a + 1, t, 1);
            let rhs = &(&QPiScalar::monomial(1, -t, 0) * &qbinom(a, t, 1))
                + &(&QPiScalar::monomial(1, a - t + 1, a + t - 1) * &qbinom(a, t - 1, 1));
            assert_eq!(lhs, rhs, "a={a} t={t}");
        }
    }
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn division_inverts_multiplication(a in arb_scalar(), b in arb_scalar()) {
        if let Ok(q) = a.div(&b) {
            prop_assert_eq!(&q * &b, a);
        } else {
            prop_assert!(!b.is_unit());
        }
    }

    #[test]
    fn bar_is_a_ring_involution(a in arb_scalar(), b in arb_scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn specializations_are_homomorphisms(a in arb_scalar(), b in arb_scalar(), s in prop_oneof![Just(1i8), Just(-1i8)]) {
        prop_assert_eq!((&a * &b).specialize(s), a.specialize(s).mul(&b.specialize(s)));
    }

    #[test]
    fn binomial_reflection(a in -8i64..9, t in 0i64..7, d in 1i64..3) {
        let sign = if t % 2 == 0 { 1 } else { -1 };
        let rhs = &QPiScalar::monomial(sign, 0, d * (t * a - choose2(t))) * &qbinom_at(t - a - 1, t, d, d);
        prop_assert_eq!(qbinom_at(a, t, d, d), rhs);
    }

    #[test]
    fn binomial_symmetry(a in 0i64..9, t in 0i64..9) {
        prop_assume!(t <= a);
        prop_assert_eq!(qbinom(a, t, 1), qbinom(a, a - t, 1));
    }
}
