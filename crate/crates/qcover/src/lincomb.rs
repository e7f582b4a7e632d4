//! Finite linear combinations with Q^π(q) coefficients.

use crate::scalar::{Poly, QPiScalar, RatFunc};
use std::collections::BTreeMap;

/// A finitely supported map from basis keys to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, QPiScalar>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(k: K, c: QPiScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, QPiScalar::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (K, QPiScalar)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// Structural zero test.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &QPiScalar)> {
        self.terms.iter()
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (K, QPiScalar)> {
        self.terms.into_iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, k: &K) -> QPiScalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: K, c: QPiScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &QPiScalar) {
        if c.is_zero() {
            return;
        }
        let one = c.is_one();
        for (k, v) in &o.terms {
            self.add_term(k.clone(), if one { v.clone() } else { v * c });
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &QPiScalar::one());
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &QPiScalar::int(-1));
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&QPiScalar::int(-1))
    }

    pub fn scale(&self, c: &QPiScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPiScalar) -> QPiScalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), f(v))))
    }

    pub fn filter(&self, keep: impl Fn(&K) -> bool) -> Self {
        LinComb {
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// All coefficients lie in Z^π[q, q^{-1}].
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integral())
    }

    /// A unit c with every coefficient of c·self a Laurent polynomial with
    /// integer coefficients in both idempotent components.
    pub fn denominator_unit(&self) -> QPiScalar {
        let mut lp = Poly::one();
        let mut lm = Poly::one();
        for c in self.terms.values() {
            lp = lcm(&lp, c.plus().reduced_den());
            lm = lcm(&lm, c.minus().reduced_den());
        }
        QPiScalar::from_components(
            RatFunc::from_polys(lp, Poly::one()),
            RatFunc::from_polys(lm, Poly::one()),
        )
    }

    /// c·self with c from [`LinComb::denominator_unit`].
    pub fn clear_denominators(&self) -> Self {
        let c = self.denominator_unit();
        if c.is_one() {
            self.clone()
        } else {
            self.scale(&c)
        }
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    if b.is_one() || a == b {
        return a.clone();
    }
    if a.is_one() {
        return b.clone();
    }
    let g = a.gcd(b);
    a.mul(&b.div_exact(&g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_keys() {
        let mut x: LinComb<u8> = LinComb::basis(1);
        x.add_term(1, QPiScalar::int(-1));
        assert!(x.is_zero());
    }

    #[test]
    fn clearing_denominators() {
        let inv = (&QPiScalar::one() - &QPiScalar::monomial(1, 2, 1)).inv().unwrap();
        let x: LinComb<u8> = LinComb::from_terms([(0, inv.clone()), (1, QPiScalar::int(2).inv().unwrap())]);
        let y = x.clear_denominators();
        assert!(y.iter().all(|(_, c)| c.plus().is_laurent() && c.minus().is_laurent()));
        assert_eq!(y.len(), 2);
    }
}
