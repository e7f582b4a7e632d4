//! The field Q(q) of rational functions with integer-coefficient representatives.

use super::int::Int;
use super::poly::Poly;
use std::fmt;

/// `q^val · num / den` with num(0) ≠ 0 and den(0) ≠ 0, gcd(num, den) = 1 in Z[q]
/// (contents included) and a positive leading coefficient on `den`.
///
/// Pulling the power of q out keeps Laurent polynomials denominator-free, and the
/// representation is unique, so derived equality and hashing are semantic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    val: i64,
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> RatFunc {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            val: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_int(Int::ONE)
    }

    pub fn from_int(c: Int) -> RatFunc {
        RatFunc::monomial(c, 0)
    }

    /// c·q^k.
    pub fn monomial(c: Int, k: i64) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            val: k,
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    /// Σ c·q^k over the given terms.
    pub fn laurent(terms: &[(i64, Int)]) -> RatFunc {
        let Some(lo) = terms.iter().filter(|t| !t.1.is_zero()).map(|t| t.0).min() else {
            return RatFunc::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![Int::ZERO; (hi - lo + 1) as usize];
        for (k, v) in terms {
            let i = (k - lo) as usize;
            c[i] = &c[i] + v;
        }
        RatFunc::from_parts(lo, Poly::from_coeffs(c), Poly::one())
    }

    /// General constructor; reduces by the gcd.
    pub fn from_polys(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        RatFunc::from_parts(0, n, d)
    }

    /// Canonicalize `q^val · num/den` assuming num and den are already coprime
    /// apart from powers of q.
    fn from_parts(val: i64, num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (kn, num) = num.strip_low();
        let (kd, den) = den.strip_low();
        let (num, den) = if den.lc().is_negative() {
            (num.neg(), den.neg())
        } else {
            (num, den)
        };
        RatFunc {
            val: val + kn as i64 - kd as i64,
            num,
            den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.val == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Integer-coefficient Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Terms (exponent, coefficient) when the denominator is 1, ascending exponent.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, Int)>> {
        if !self.is_laurent() {
            return None;
        }
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (self.val + k as i64, c.clone()))
                .collect(),
        )
    }

    /// Conventional numerator and denominator polynomials in q.
    pub fn numerator(&self) -> Poly {
        if self.val >= 0 {
            self.num.shift(self.val as usize)
        } else {
            self.num.clone()
        }
    }

    pub fn denominator(&self) -> Poly {
        if self.val < 0 {
            self.den.shift((-self.val) as usize)
        } else {
            self.den.clone()
        }
    }

    /// Power of q pulled out of numerator and denominator.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn reduced_num(&self) -> &Poly {
        &self.num
    }

    pub fn reduced_den(&self) -> &Poly {
        &self.den
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            val: self.val,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.val.min(o.val);
        let a = self.num.shift((self.val - v) as usize);
        let b = o.num.shift((o.val - v) as usize);
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_parts(v, a.add(&b), Poly::one());
        }
        if self.den == o.den {
            let t = a.add(&b);
            if t.is_zero() {
                return RatFunc::zero();
            }
            let g = t.gcd(&self.den);
            if g.is_one() {
                return RatFunc::from_parts(v, t, self.den.clone());
            }
            return RatFunc::from_parts(v, t.div_exact(&g), self.den.div_exact(&g));
        }
        if self.den.is_one() {
            return RatFunc::from_parts(v, a.mul(&o.den).add(&b), o.den.clone());
        }
        if o.den.is_one() {
            return RatFunc::from_parts(v, a.add(&b.mul(&self.den)), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let t = a.mul(&o.den).add(&b.mul(&self.den));
            return RatFunc::from_parts(v, t, self.den.mul(&o.den));
        }
        let d1 = self.den.div_exact(&g);
        let d2 = o.den.div_exact(&g);
        let t = a.mul(&d2).add(&b.mul(&d1));
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = t.gcd(&g);
        let (t, gq) = if g2.is_one() {
            (t, g)
        } else {
            (t.div_exact(&g2), g.div_exact(&g2))
        };
        RatFunc::from_parts(v, t, d1.mul(&d2).mul(&gq))
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let val = self.val + o.val;
        if self.den.is_one() && o.den.is_one() {
            return RatFunc {
                val,
                num: self.num.mul(&o.num),
                den: Poly::one(),
            };
        }
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let (num, den) = if den.lc().is_negative() {
            (num.neg(), den.neg())
        } else {
            (num, den)
        };
        RatFunc { val, num, den }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let (num, den) = if self.num.lc().is_negative() {
            (self.den.neg(), self.num.neg())
        } else {
            (self.den.clone(), self.num.clone())
        };
        Some(RatFunc {
            val: -self.val,
            num,
            den,
        })
    }

    pub fn scale_int(&self, c: &Int) -> RatFunc {
        self.mul(&RatFunc::from_int(c.clone()))
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i64) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            val: self.val + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// f(q) ↦ f(q^{-1}).
    pub fn invert_var(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dn = self.num.degree() as i64;
        let dd = self.den.degree() as i64;
        let num = self.num.reverse();
        let den = self.den.reverse();
        let (num, den) = if den.lc().is_negative() {
            (num.neg(), den.neg())
        } else {
            (num, den)
        };
        RatFunc {
            val: -self.val - dn + dd,
            num,
            den,
        }
    }

    /// f(q) ↦ f(−q).
    pub fn negate_var(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let mut num = self.num.negate_var();
        let mut den = self.den.negate_var();
        if self.val % 2 != 0 {
            num = num.neg();
        }
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatFunc {
            val: self.val,
            num,
            den,
        }
    }

    /// Evaluate at an integer point, None if the denominator vanishes or
    /// the value is not an integer.
    pub fn eval_int(&self, x: i64) -> Option<(Int, Int)> {
        let xi = Int::from(x);
        let mut n = self.num.eval(&xi);
        let mut d = self.den.eval(&xi);
        if self.val >= 0 {
            n = &n * &xi.pow(self.val as u32);
        } else {
            d = &d * &xi.pow((-self.val) as u32);
        }
        if d.is_zero() {
            return None;
        }
        Some((n, d))
    }

    fn fmt_laurent(f: &mut fmt::Formatter<'_>, val: i64, p: &Poly) -> fmt::Result {
        let mut first = true;
        for (k, c) in p.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = val + k as i64;
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{a}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Cancel common factors of a numerator and a denominator.
fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = n.gcd(d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g), d.div_exact(&g))
    }
}

impl fmt::Display for RatFunc {
    /// Laurent polynomials print as `c*q^k` terms in descending order; other
    /// values as `(numerator)/(denominator)` with the denominator a polynomial in q.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return RatFunc::fmt_laurent(f, self.val, &self.num);
        }
        write!(f, "(")?;
        if self.val >= 0 {
            RatFunc::fmt_laurent(f, self.val, &self.num)?;
            write!(f, ")/(")?;
            RatFunc::fmt_laurent(f, 0, &self.den)?;
        } else {
            RatFunc::fmt_laurent(f, 0, &self.num)?;
            write!(f, ")/(")?;
            RatFunc::fmt_laurent(f, -self.val, &self.den)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> RatFunc {
        RatFunc::monomial(Int::ONE, k)
    }

    #[test]
    fn laurent_sums_cancel() {
        let a = q(1).add(&q(-1));
        let b = q(1).sub(&q(-1));
        assert_eq!(a.add(&b), RatFunc::monomial(Int::from(2), 1));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let x = RatFunc::one().sub(&q(2));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert_eq!(y.to_string(), "(-1)/(q^2 - 1)");
    }

    #[test]
    fn fraction_sum_reduces() {
        // 1/(1-q) + 1/(1+q) = 2/(1-q^2)
        let a = RatFunc::one().sub(&q(1)).inv().unwrap();
        let b = RatFunc::one().add(&q(1)).inv().unwrap();
        let c = RatFunc::from_int(Int::from(2))
            .mul(&RatFunc::one().sub(&q(2)).inv().unwrap());
        assert_eq!(a.add(&b), c);
    }

    #[test]
    fn var_substitutions() {
        let x = q(3).add(&RatFunc::from_int(Int::from(2))).mul(&q(-1).add(&q(1)).inv().unwrap());
        assert_eq!(x.invert_var().invert_var(), x);
        assert_eq!(x.negate_var().negate_var(), x);
        assert_eq!(q(3).negate_var(), q(3).neg());
        assert_eq!(q(2).invert_var(), q(-2));
    }

    #[test]
    fn half_is_rational_constant() {
        let h = RatFunc::from_int(Int::from(2)).inv().unwrap();
        assert_eq!(h.to_string(), "(1)/(2)");
        assert!(h.add(&h).is_one());
    }
}
