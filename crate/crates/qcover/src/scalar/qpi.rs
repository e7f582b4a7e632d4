//! The coefficient ring Q^π(q) = Q(q)[π]/(π² − 1).

use super::int::Int;
use super::ratfunc::RatFunc;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    Zero,
    #[error("zero divisor: one idempotent component vanishes")]
    ZeroDivisor,
}

/// An element of Q^π(q), stored through the idempotents ε± = (1 ± π)/2:
/// `plus` is the value at π = 1 and `minus` the value at π = −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPiScalar {
    plus: RatFunc,
    minus: RatFunc,
}

impl QPiScalar {
    pub fn from_components(plus: RatFunc, minus: RatFunc) -> QPiScalar {
        QPiScalar { plus, minus }
    }

    /// f + gπ.
    pub fn from_f_g(f: RatFunc, g: RatFunc) -> QPiScalar {
        QPiScalar {
            plus: f.add(&g),
            minus: f.sub(&g),
        }
    }

    pub fn zero() -> QPiScalar {
        QPiScalar::default()
    }

    pub fn one() -> QPiScalar {
        QPiScalar::int(1)
    }

    pub fn int(c: i64) -> QPiScalar {
        let r = RatFunc::from_int(Int::from(c));
        QPiScalar {
            plus: r.clone(),
            minus: r,
        }
    }

    pub fn pi() -> QPiScalar {
        QPiScalar::monomial(1, 0, 1)
    }

    pub fn q() -> QPiScalar {
        QPiScalar::monomial(1, 1, 0)
    }

    /// c · q^k · π^e.
    pub fn monomial(c: i64, k: i64, e: i64) -> QPiScalar {
        let r = RatFunc::monomial(Int::from(c), k);
        if e.rem_euclid(2) == 0 {
            QPiScalar {
                plus: r.clone(),
                minus: r,
            }
        } else {
            QPiScalar {
                minus: r.neg(),
                plus: r,
            }
        }
    }

    pub fn q_pow(k: i64) -> QPiScalar {
        QPiScalar::monomial(1, k, 0)
    }

    pub fn pi_pow(e: i64) -> QPiScalar {
        QPiScalar::monomial(1, 0, e)
    }

    /// (πq)^k.
    pub fn piq_pow(k: i64) -> QPiScalar {
        QPiScalar::monomial(1, k, k)
    }

    pub fn sign(e: i64) -> QPiScalar {
        QPiScalar::int(if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn plus(&self) -> &RatFunc {
        &self.plus
    }

    pub fn minus(&self) -> &RatFunc {
        &self.minus
    }

    /// The component at π = sign.
    pub fn specialize(&self, sign: i8) -> RatFunc {
        if sign >= 0 {
            self.plus.clone()
        } else {
            self.minus.clone()
        }
    }

    /// f in x = f + gπ.
    pub fn f_part(&self) -> RatFunc {
        self.plus.add(&self.minus).mul(&half())
    }

    /// g in x = f + gπ.
    pub fn g_part(&self) -> RatFunc {
        self.plus.sub(&self.minus).mul(&half())
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.plus.is_one() && self.minus.is_one()
    }

    /// Invertible iff both components are nonzero.
    pub fn is_unit(&self) -> bool {
        !self.plus.is_zero() && !self.minus.is_zero()
    }

    pub fn inv(&self) -> Result<QPiScalar, ScalarError> {
        match (self.plus.inv(), self.minus.inv()) {
            (Some(plus), Some(minus)) => Ok(QPiScalar { plus, minus }),
            (None, None) => Err(ScalarError::Zero),
            _ => Err(ScalarError::ZeroDivisor),
        }
    }

    pub fn div(&self, o: &QPiScalar) -> Result<QPiScalar, ScalarError> {
        Ok(self * &o.inv()?)
    }

    /// The bar involution f(q) ↦ f(πq^{-1}).
    pub fn bar(&self) -> QPiScalar {
        QPiScalar {
            plus: self.plus.invert_var(),
            minus: self.minus.negate_var().invert_var(),
        }
    }

    /// Membership in A = Z^π[q, q^{-1}].
    pub fn is_integral(&self) -> bool {
        self.f_part().is_laurent() && self.g_part().is_laurent()
    }

    pub fn pow(&self, n: i64) -> Result<QPiScalar, ScalarError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = QPiScalar::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Multiply by c·q^k·π^e without a general product.
    pub fn scale_monomial(&self, c: i64, k: i64, e: i64) -> QPiScalar {
        let ci = Int::from(c);
        let plus = self.plus.shift(k).scale_int(&ci);
        let mut minus = self.minus.shift(k).scale_int(&ci);
        if e.rem_euclid(2) == 1 {
            minus = minus.neg();
        }
        QPiScalar { plus, minus }
    }
}

fn half() -> RatFunc {
    RatFunc::from_int(Int::from(2)).inv().unwrap()
}

impl<'a> Add<&'a QPiScalar> for &'a QPiScalar {
    type Output = QPiScalar;
    fn add(self, o: &QPiScalar) -> QPiScalar {
        QPiScalar {
            plus: self.plus.add(&o.plus),
            minus: self.minus.add(&o.minus),
        }
    }
}

impl<'a> Sub<&'a QPiScalar> for &'a QPiScalar {
    type Output = QPiScalar;
    fn sub(self, o: &QPiScalar) -> QPiScalar {
        QPiScalar {
            plus: self.plus.sub(&o.plus),
            minus: self.minus.sub(&o.minus),
        }
    }
}

impl<'a> Mul<&'a QPiScalar> for &'a QPiScalar {
    type Output = QPiScalar;
    fn mul(self, o: &QPiScalar) -> QPiScalar {
        QPiScalar {
            plus: self.plus.mul(&o.plus),
            minus: self.minus.mul(&o.minus),
        }
    }
}

impl Neg for &QPiScalar {
    type Output = QPiScalar;
    fn neg(self) -> QPiScalar {
        QPiScalar {
            plus: self.plus.neg(),
            minus: self.minus.neg(),
        }
    }
}

impl Add for QPiScalar {
    type Output = QPiScalar;
    fn add(self, o: QPiScalar) -> QPiScalar {
        &self + &o
    }
}

impl Sub for QPiScalar {
    type Output = QPiScalar;
    fn sub(self, o: QPiScalar) -> QPiScalar {
        &self - &o
    }
}

impl Mul for QPiScalar {
    type Output = QPiScalar;
    fn mul(self, o: QPiScalar) -> QPiScalar {
        &self * &o
    }
}

impl Neg for QPiScalar {
    type Output = QPiScalar;
    fn neg(self) -> QPiScalar {
        -&self
    }
}

impl AddAssign<&QPiScalar> for QPiScalar {
    fn add_assign(&mut self, o: &QPiScalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&QPiScalar> for QPiScalar {
    fn sub_assign(&mut self, o: &QPiScalar) {
        *self = &*self - o;
    }
}

impl fmt::Display for QPiScalar {
    /// Canonical text `f + pi*(g)`; either part is dropped when it is zero.
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.f_part();
        let g = self.g_part();
        match (f.is_zero(), g.is_zero()) {
            (true, true) => write!(fm, "0"),
            (false, true) => write!(fm, "{f}"),
            (true, false) => write!(fm, "pi*({g})"),
            (false, false) => write!(fm, "{f} + pi*({g})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_squared_is_one() {
        let p = QPiScalar::pi();
        assert!((&p * &p).is_one());
    }

    #[test]
    fn idempotents_are_orthogonal() {
        let h = QPiScalar::int(2).inv().unwrap();
        let ep = &(&QPiScalar::one() + &QPiScalar::pi()) * &h;
        let em = &(&QPiScalar::one() - &QPiScalar::pi()) * &h;
        assert!((&ep * &em).is_zero());
        assert!(!ep.is_integral());
        assert_eq!(
            (&QPiScalar::one() + &QPiScalar::pi()).inv(),
            Err(ScalarError::ZeroDivisor)
        );
        assert_eq!(QPiScalar::zero().inv(), Err(ScalarError::Zero));
    }

    #[test]
    fn cancellation() {
        let a = &QPiScalar::q() + &QPiScalar::monomial(1, -1, 1);
        let b = &QPiScalar::q() - &QPiScalar::monomial(1, -1, 1);
        assert_eq!(&a + &b, QPiScalar::monomial(2, 1, 0));
    }

    #[test]
    fn invert_pi_q() {
        let x = QPiScalar::monomial(1, 1, 1);
        assert_eq!(x.inv().unwrap(), QPiScalar::monomial(1, -1, 1));
        let y = &QPiScalar::one() - &QPiScalar::monomial(1, 2, 1);
        assert!((&y * &y.inv().unwrap()).is_one());
        assert!(!y.inv().unwrap().is_integral());
    }

    #[test]
    fn bar_of_q() {
        assert_eq!(QPiScalar::q().bar(), QPiScalar::monomial(1, -1, 1));
        assert_eq!(QPiScalar::pi().bar(), QPiScalar::pi());
    }

    #[test]
    fn text_form() {
        let x = &QPiScalar::monomial(1, 1, 1) + &QPiScalar::q_pow(-1);
        assert_eq!(x.to_string(), "q^-1 + pi*(q)");
        assert_eq!(QPiScalar::pi().to_string(), "pi*(1)");
        assert_eq!(QPiScalar::int(-3).to_string(), "-3");
    }
}
