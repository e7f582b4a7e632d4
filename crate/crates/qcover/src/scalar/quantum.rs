//! (q,π)-integers, factorials and binomials with q_i = q^d, π_i = π^d.
//!
//! The `_at` variants take the π-exponent separately, for data where the
//! parity of an index and the parity of d_i disagree (purely even data).

use super::int::Int;
use super::qpi::QPiScalar;
use super::ratfunc::RatFunc;
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

/// One idempotent component of [n]: with x = σq^d, y = q^{-d} (σ = ±1) this is
/// (x^n − y^n)/(x − y).
fn qint_component(n: i64, d: i64, sigma: i64) -> RatFunc {
    if n == 0 {
        return RatFunc::zero();
    }
    let m = n.abs();
    let terms: Vec<(i64, Int)> = (0..m)
        .map(|k| {
            let s = if sigma < 0 && k % 2 == 1 { -1 } else { 1 };
            (d * (2 * k - m + 1), Int::from(s))
        })
        .collect();
    let pos = RatFunc::laurent(&terms);
    if n > 0 {
        pos
    } else {
        // [−m] = −σ^m [m]
        let s = if sigma < 0 && m % 2 == 1 { 1 } else { -1 };
        pos.scale_int(&Int::from(s))
    }
}

fn sigma_for(p: i64) -> i64 {
    if p.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// [n]_{q_i,π_i}.
pub fn qint(n: i64, d: i64) -> QPiScalar {
    qint_at(n, d, d)
}

/// [n] with q_i = q^d and π_i = π^p.
pub fn qint_at(n: i64, d: i64, p: i64) -> QPiScalar {
    QPiScalar::from_components(qint_component(n, d, 1), qint_component(n, d, sigma_for(p)))
}

type FactKey = (i64, i64, i64);
type BinomKey = (i64, i64, i64, i64);

static FACT: LazyLock<Mutex<HashMap<FactKey, QPiScalar>>> = LazyLock::new(|| Mutex::new(HashMap::new()));
static BINOM: LazyLock<Mutex<HashMap<BinomKey, QPiScalar>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// [n]_i! for n ≥ 0.
pub fn qfact(n: i64, d: i64) -> QPiScalar {
    qfact_at(n, d, d)
}

pub fn qfact_at(n: i64, d: i64, p: i64) -> QPiScalar {
    assert!(n >= 0, "qfact of a negative integer");
    let p = p.rem_euclid(2);
    if let Some(v) = FACT.lock().unwrap().get(&(n, d, p)) {
        return v.clone();
    }
    let mut acc = QPiScalar::one();
    for k in 1..=n {
        acc = &acc * &qint_at(k, d, p);
    }
    FACT.lock().unwrap().insert((n, d, p), acc.clone());
    acc
}

/// The binomial [n choose k]_i for any integer n and k ≥ 0.
pub fn qbinom(n: i64, k: i64, d: i64) -> QPiScalar {
    qbinom_at(n, k, d, d)
}

pub fn qbinom_at(n: i64, k: i64, d: i64, p: i64) -> QPiScalar {
    assert!(k >= 0, "qbinom with negative lower index");
    let p = p.rem_euclid(2);
    if let Some(v) = BINOM.lock().unwrap().get(&(n, k, d, p)) {
        return v.clone();
    }
    let mut num = QPiScalar::one();
    for h in 1..=k {
        num = &num * &qint_at(n - h + 1, d, p);
    }
    let v = num.div(&qfact_at(k, d, p)).expect("factorial is a unit");
    BINOM.lock().unwrap().insert((n, k, d, p), v.clone());
    v
}

/// The ordinary binomial coefficient C(n, 2) used in π-exponents, for any integer n.
pub fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_two() {
        // ((πq)^2 − q^{-2})/(πq − q^{-1}) = πq + q^{-1}
        let expect = &QPiScalar::monomial(1, 1, 1) + &QPiScalar::q_pow(-1);
        assert_eq!(qint(2, 1), expect);
        let direct = (&QPiScalar::monomial(1, 2, 0) - &QPiScalar::q_pow(-2))
            .div(&(&QPiScalar::monomial(1, 1, 1) - &QPiScalar::q_pow(-1)))
            .unwrap();
        assert_eq!(qint(2, 1), direct);
    }

    #[test]
    fn qint_negative_matches_formula() {
        for d in 1..=3 {
            for n in -5..=5 {
                let x = QPiScalar::monomial(1, d, d);
                let y = QPiScalar::q_pow(-d);
                let direct = (&x.pow(n).unwrap() - &y.pow(n).unwrap()).div(&(&x - &y)).unwrap();
                assert_eq!(qint(n, d), direct, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn binomial_minus_one() {
        for t in 0..=4 {
            let expect = QPiScalar::monomial(if t % 2 == 0 { 1 } else { -1 }, 0, choose2(t + 1));
            assert_eq!(qbinom(-1, t, 1), expect);
        }
    }

    #[test]
    fn binomial_four_two() {
        let f = qfact(4, 1).div(&(&qfact(2, 1) * &qfact(2, 1))).unwrap();
        assert_eq!(qbinom(4, 2, 1), f);
        assert!(qbinom(5, 2, 1).is_integral());
        assert!(qbinom(3, 5, 2).is_zero());
    }
}
