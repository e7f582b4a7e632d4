//! Dense univariate polynomials over the integers.

use super::int::Int;
use std::fmt;

/// Coefficients low degree first; no trailing zeros, so zero is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Int>,
}

impl Poly {
    pub fn from_coeffs(mut c: Vec<Int>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64s(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![Int::ONE] }
    }

    pub fn constant(v: Int) -> Poly {
        Poly::from_coeffs(vec![v])
    }

    pub fn monomial(v: Int, k: usize) -> Poly {
        let mut c = vec![Int::ZERO; k + 1];
        c[k] = v;
        Poly::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; zero has degree 0 by convention, check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &Int {
        self.c.last().unwrap_or(&Int::ZERO)
    }

    pub fn tc(&self) -> &Int {
        self.c.first().unwrap_or(&Int::ZERO)
    }

    pub fn coeff(&self, k: usize) -> Int {
        self.c.get(k).cloned().unwrap_or(Int::ZERO)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut r = Vec::with_capacity(n);
        for k in 0..n {
            match (self.c.get(k), o.c.get(k)) {
                (Some(a), Some(b)) => r.push(a + b),
                (Some(a), None) => r.push(a.clone()),
                (None, Some(b)) => r.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::from_coeffs(r)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        // Accumulate in i128 while it is safe, fall back to Int otherwise.
        let small: Option<(Vec<i64>, Vec<i64>)> = (|| {
            let a: Option<Vec<i64>> = self.c.iter().map(|x| x.to_i64()).collect();
            let b: Option<Vec<i64>> = o.c.iter().map(|x| x.to_i64()).collect();
            Some((a?, b?))
        })();
        if let Some((a, b)) = small {
            let ma = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
            let mb = b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
            let terms = a.len().min(b.len()) as u128;
            if ma.checked_mul(mb).and_then(|p| p.checked_mul(terms)).is_some_and(|p| p < (1u128 << 126)) {
                let mut r = vec![0i128; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if *x == 0 {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        r[i + j] += *x as i128 * *y as i128;
                    }
                }
                return Poly::from_coeffs(
                    r.into_iter()
                        .map(|v| {
                            if v >= i64::MIN as i128 && v <= i64::MAX as i128 {
                                Int::Small(v as i64)
                            } else {
                                Int::from(num_bigint::BigInt::from(v))
                            }
                        })
                        .collect(),
                );
            }
        }
        let mut r = vec![Int::ZERO; self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
        Poly::from_coeffs(r)
    }

    pub fn scale(&self, v: &Int) -> Poly {
        if v.is_zero() {
            return Poly::zero();
        }
        Poly {
            c: self.c.iter().map(|x| x * v).collect(),
        }
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![Int::ZERO; k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Split off the largest power of q dividing self.
    pub fn strip_low(&self) -> (usize, Poly) {
        let k = self.c.iter().take_while(|x| x.is_zero()).count();
        if k == 0 {
            return (0, self.clone());
        }
        (k, Poly { c: self.c[k..].to_vec() })
    }

    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        Poly {
            c: self.c.iter().map(|x| x.div_exact(&g)).collect(),
        }
    }

    pub fn div_int_exact(&self, v: &Int) -> Poly {
        if v.is_one() {
            return self.clone();
        }
        Poly {
            c: self.c.iter().map(|x| x.div_exact(v)).collect(),
        }
    }

    /// Exact quotient over the integers, or None.
    pub fn checked_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.c.len() == 1 {
            let mut out = Vec::with_capacity(self.c.len());
            for x in &self.c {
                out.push(x.checked_div(&d.c[0])?);
            }
            return Some(Poly { c: out });
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let lc = d.lc().clone();
        let mut q = vec![Int::ZERO; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dl - 1];
            if top.is_zero() {
                continue;
            }
            let f = top.checked_div(&lc)?;
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] = &r[k + j] - &(&f * dj);
                }
            }
            q[k] = f;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(q))
    }

    pub fn div_exact(&self, d: &Poly) -> Poly {
        self.checked_div(d).expect("inexact polynomial division")
    }

    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::ZERO;
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// q^deg · p(1/q).
    pub fn reverse(&self) -> Poly {
        let mut c = self.c.clone();
        c.reverse();
        Poly::from_coeffs(c)
    }

    /// p(−q).
    pub fn negate_var(&self) -> Poly {
        Poly {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(k, x)| if k % 2 == 1 { -x } else { x.clone() })
                .collect(),
        }
    }

    fn max_norm(&self) -> Int {
        self.c.iter().map(|x| x.abs()).max().unwrap_or(Int::ZERO)
    }

    /// Pseudo-remainder lc(b)^(deg a − deg b + 1) · a mod b.
    fn prem(&self, b: &Poly) -> Poly {
        let mut r = self.clone();
        let db = b.degree();
        let lb = b.lc().clone();
        while !r.is_zero() && r.degree() >= db {
            let k = r.degree() - db;
            let lr = r.lc().clone();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(k));
        }
        r
    }

    /// Greatest common divisor in Z[q], normalized to a positive leading coefficient.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.normalize_sign();
        }
        if o.is_zero() {
            return self.normalize_sign();
        }
        let ca = self.content();
        let cb = o.content();
        let c = ca.gcd(&cb);
        if self.c.len() == 1 || o.c.len() == 1 {
            return Poly::constant(c);
        }
        let pa = self.primitive();
        let pb = o.primitive();
        if pa == pb {
            return pa.scale(&c);
        }
        let g = heuristic_gcd(&pa, &pb).unwrap_or_else(|| prs_gcd(&pa, &pb));
        g.scale(&c)
    }

    fn normalize_sign(&self) -> Poly {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

fn interpolate(h: &Int, x: &Int) -> Poly {
    let mut out = Vec::new();
    let mut h = h.clone();
    let half = x.div_mod_floor(&Int::from(2)).0;
    while !h.is_zero() {
        let (_, mut g) = h.div_mod_floor(x);
        if g > half {
            g = &g - x;
        }
        out.push(g.clone());
        h = (&h - &g).div_exact(x);
    }
    Poly::from_coeffs(out)
}

/// Heuristic gcd by evaluation at a large integer, verified by division.
fn heuristic_gcd(f: &Poly, g: &Poly) -> Option<Poly> {
    let fnorm = f.max_norm();
    let gnorm = g.max_norm();
    let b = &(&Int::from(2) * &fnorm.clone().min(gnorm.clone())) + &Int::from(29);
    let lead = fnorm.div_mod_floor(&f.lc().abs()).0
        .clone()
        .min(gnorm.div_mod_floor(&g.lc().abs()).0);
    let mut x = (b.clone().min(&Int::from(99) * &b.isqrt())).max(&(&Int::from(2) * &lead) + &Int::from(2));
    for _ in 0..6 {
        let ff = f.eval(&x);
        let gg = g.eval(&x);
        if !ff.is_zero() && !gg.is_zero() {
            let h = ff.gcd(&gg);
            let hp = interpolate(&h, &x).primitive();
            if !hp.is_zero() && f.checked_div(&hp).is_some() && g.checked_div(&hp).is_some() {
                return Some(hp);
            }
            let cff = interpolate(&ff.div_exact(&h), &x);
            if !cff.is_zero() {
                if let Some(hq) = f.checked_div(&cff) {
                    let hq = hq.primitive();
                    if !hq.is_zero() && g.checked_div(&hq).is_some() {
                        return Some(hq);
                    }
                }
            }
        }
        x = (&(&Int::from(73794) * &x) * &x.isqrt().isqrt()).div_mod_floor(&Int::from(27011)).0;
    }
    None
}

fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        let r = a.prem(&b);
        if r.is_zero() {
            return b.primitive();
        }
        if r.degree() == 0 {
            return Poly::one();
        }
        a = b;
        b = r.primitive();
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.c.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[1, 0, -1]); // 1 - q^2
        let b = p(&[1, 1]); // 1 + q
        let c = p(&[3, 0, 0, 2]);
        let g = a.mul(&c).gcd(&b.mul(&c));
        assert_eq!(g, p(&[1, 1]).mul(&c));
    }

    #[test]
    fn gcd_includes_content() {
        let a = p(&[4, 4]);
        let b = p(&[6, 6]);
        assert_eq!(a.gcd(&b), p(&[2, 2]));
        assert_eq!(p(&[4]).gcd(&p(&[6, 3])), p(&[1]));
    }

    #[test]
    fn prs_agrees_with_heuristic() {
        let f = p(&[1, -3, 0, 2, 5]).mul(&p(&[2, 7, 1]));
        let g = p(&[-4, 1, 9]).mul(&p(&[2, 7, 1]));
        assert_eq!(prs_gcd(&f, &g), heuristic_gcd(&f, &g).unwrap());
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 2, 1]);
        assert_eq!(a.checked_div(&p(&[1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.checked_div(&p(&[1, 2])), None);
        assert_eq!(p(&[2, 4]).checked_div(&p(&[2])), Some(p(&[1, 2])));
    }
}
