//! Braid automorphisms T_i^{±1} of **U**.

use crate::cover::{Cover, CoverElement, Monomial, SerreKind, Torus};
use crate::root::{Coweight, Index};
use crate::scalar::{choose2, QPiScalar};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("braid order of ({0}, {1}) is infinite")]
    InfiniteOrder(usize, usize),
    #[error("malformed braid word: {0}")]
    Parse(String),
    #[error("index {0} out of range")]
    Index(usize),
}

/// T_i (sign +1) or T_i^{-1} (sign −1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    pub index: Index,
    pub sign: i8,
}

impl BraidLetter {
    pub fn new(index: Index, sign: i8) -> BraidLetter {
        BraidLetter { index, sign }
    }

    pub fn inverse(self) -> BraidLetter {
        BraidLetter { index: self.index, sign: -self.sign }
    }
}

/// Letters act right to left: the last letter is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BraidWord(pub Vec<BraidLetter>);

impl BraidWord {
    pub fn positive(indices: &[Index]) -> BraidWord {
        BraidWord(indices.iter().map(|&i| BraidLetter::new(i, 1)).collect())
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Parses `T1 T2^-1 T1` with 1-based indices.
    pub fn parse(text: &str, rank: usize) -> Result<BraidWord, BraidError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            let body = tok.strip_prefix('T').ok_or_else(|| BraidError::Parse(tok.into()))?;
            let (idx, sign) = match body.split_once('^') {
                Some((a, "-1")) => (a, -1),
                Some((a, "1")) => (a, 1),
                Some(_) => return Err(BraidError::Parse(tok.into())),
                None => (body, 1),
            };
            let i: usize = idx.parse().map_err(|_| BraidError::Parse(tok.into()))?;
            if i == 0 || i > rank {
                return Err(BraidError::Index(i));
            }
            out.push(BraidLetter::new(i - 1, sign));
        }
        Ok(BraidWord(out))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.sign < 0 { format!("T{}^-1", l.index + 1) } else { format!("T{}", l.index + 1) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Outcome of comparing the two alternating products on one generator.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub generator: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub i: Index,
    pub j: Index,
    pub order: u32,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

type GenKey = (Index, i8, bool, Index, usize);

pub struct Braid {
    cover: Arc<Cover>,
    gens: Mutex<HashMap<GenKey, CoverElement>>,
}

impl Braid {
    pub fn new(cover: Arc<Cover>) -> Braid {
        Braid { cover, gens: Mutex::new(HashMap::new()) }
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn cover_arc(&self) -> Arc<Cover> {
        self.cover.clone()
    }

    /// Table image of E_j^{(n)} (`is_e`) or F_j^{(n)} under T_i^{sign}.
    pub fn generator_image(&self, i: Index, sign: i8, is_e: bool, j: Index, n: usize) -> CoverElement {
        let key = (i, sign, is_e, j, n);
        if let Some(v) = self.gens.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.table(i, sign, is_e, j, n);
        self.gens.lock().unwrap().insert(key, v.clone());
        v
    }

    fn table(&self, i: Index, sign: i8, is_e: bool, j: Index, n: usize) -> CoverElement {
        let u = &*self.cover;
        let datum = u.datum();
        let ni = n as i64;
        if i == j {
            let s = if n.is_multiple_of(2) { 1 } else { -1 };
            return match (is_e, sign > 0) {
                // (−1)^n π_i^n q_i^{n(n−1)} J̃_i^n K̃_i^n F_i^{(n)}
                (true, true) => u
                    .mul(&u.jk_tilde(i, ni, ni), &u.f_div(i, n))
                    .scale(&datum.monomial_i(i, s, ni * (ni - 1), ni)),
                // (−1)^n q_i^{n(n−1)} F_i^{(n)} K̃_i^{−n}
                (true, false) => u
                    .mul(&u.f_div(i, n), &u.jk_tilde(i, 0, -ni))
                    .scale(&datum.monomial_i(i, s, ni * (ni - 1), 0)),
                // (−1)^n q_i^{−n(n−1)} E_i^{(n)} K̃_i^{−n}
                (false, true) => u
                    .mul(&u.e_div(i, n), &u.jk_tilde(i, 0, -ni))
                    .scale(&datum.monomial_i(i, s, -ni * (ni - 1), 0)),
                // (−1)^n π_i^n q_i^{−n(n−1)} J̃_i^n K̃_i^n E_i^{(n)}
                (false, false) => u
                    .mul(&u.jk_tilde(i, ni, ni), &u.e_div(i, n))
                    .scale(&datum.monomial_i(i, s, -ni * (ni - 1), ni)),
            };
        }
        let m = (-ni * datum.a(i, j)) as usize;
        let jt = u.jk_tilde(i, ni * datum.parity(j) as i64, 0);
        let (kind, pre) = match (is_e, sign > 0) {
            (true, true) => (SerreKind::E, choose2(ni * datum.a(i, j))),
            (true, false) => (SerreKind::EPrime, choose2(ni * datum.a(i, j))),
            (false, true) => (SerreKind::F, 0),
            (false, false) => (SerreKind::FPrime, 0),
        };
        u.mul(&jt, &u.higher_serre(kind, i, j, n, m))
            .scale(&datum.monomial_i(i, 1, 0, pre))
    }

    /// K_μ ↦ K_{s_i μ}, J_μ ↦ J_{s_i μ} (for either sign).
    pub fn torus_image(&self, i: Index, t: &Torus) -> Torus {
        let datum = self.cover.datum();
        let j = datum.reflect_coweight(i, &t.j_coweight());
        let k = datum.reflect_coweight(i, &t.k_coweight());
        Torus::new(&j.0, &k.0)
    }

    /// T_i^{sign}(x).
    pub fn apply(&self, i: Index, sign: i8, x: &CoverElement) -> CoverElement {
        let u = &*self.cover;
        u.apply_map(
            x,
            &|j| self.generator_image(i, sign, true, j, 1),
            &|j| self.generator_image(i, sign, false, j, 1),
            &|t| u.torus(self.torus_image(i, t)),
            false,
        )
    }

    pub fn apply_letter(&self, l: BraidLetter, x: &CoverElement) -> CoverElement {
        self.apply(l.index, l.sign, x)
    }

    /// T_{w_1} ⋯ T_{w_k}(x), the last letter first.
    pub fn apply_word(&self, w: &BraidWord, x: &CoverElement) -> CoverElement {
        w.0.iter().rev().fold(x.clone(), |acc, &l| self.apply_letter(l, &acc))
    }

    /// The Chevalley generators E_k, F_k, K_{α_k^∨}, J_{α_k^∨} with names.
    pub fn generators(&self) -> Vec<(String, CoverElement)> {
        let u = &*self.cover;
        let n = u.rank();
        let mut out = Vec::new();
        for k in 0..n {
            out.push((format!("E_{}", k + 1), u.e(k)));
            out.push((format!("F_{}", k + 1), u.f(k)));
            let mut c = vec![0; n];
            c[k] = 1;
            out.push((format!("K_{}", k + 1), u.k(&Coweight(c.clone()))));
            out.push((format!("J_{}", k + 1), u.j(&Coweight(c))));
        }
        out
    }

    /// Both alternating products of length m_ij on each generator.
    pub fn verify_braid_relation(&self, i: Index, j: Index) -> Result<RelationReport, BraidError> {
        let datum = self.cover.datum();
        let order = datum.braid_order(i, j).ok_or(BraidError::InfiniteOrder(i, j))?;
        let alt = |a: Index, b: Index| {
            BraidWord((0..order as usize).map(|k| BraidLetter::new(if k % 2 == 0 { a } else { b }, 1)).collect())
        };
        let (w1, w2) = (alt(i, j), alt(j, i));
        let checks = self
            .generators()
            .into_iter()
            .map(|(name, g)| {
                let holds = self.cover.equals(&self.apply_word(&w1, &g), &self.apply_word(&w2, &g));
                RelationCheck { generator: name, holds }
            })
            .collect();
        Ok(RelationReport { i, j, order, checks })
    }

    /// e(i, j; m) = e_{i,j;1,m}.
    pub fn e_small(&self, i: Index, j: Index, m: usize) -> CoverElement {
        self.cover.higher_serre(SerreKind::E, i, j, 1, m)
    }

    /// e'(i, j; m) = e'_{i,j;1,m}.
    pub fn e_small_prime(&self, i: Index, j: Index, m: usize) -> CoverElement {
        self.cover.higher_serre(SerreKind::EPrime, i, j, 1, m)
    }

    /// x has no F-letters and trivial K-exponent in every monomial, i.e. lies
    /// in the subalgebra generated by the E_i and J̃_i.
    pub fn in_positive_part(&self, x: &CoverElement) -> bool {
        x.iter().all(|(m, _)| is_positive_monomial(m))
    }

    /// T_i^{±1} of E_j^{(n)} and F_j^{(n)} have coefficients in 𝒜 on the
    /// divided-power words of the table form.
    pub fn table_is_integral(&self, i: Index, j: Index, n: usize) -> bool {
        // The table writes each image as an 𝒜-combination of J̃K̃ and products of
        // three divided powers; only the prefactors need checking.
        let datum = self.cover.datum();
        let ni = n as i64;
        let mut coeffs: Vec<QPiScalar> = Vec::new();
        if i == j {
            coeffs.push(datum.monomial_i(i, 1, ni * (ni - 1), ni));
            coeffs.push(datum.monomial_i(i, 1, -ni * (ni - 1), 0));
        } else {
            let a = datum.a(i, j);
            let m = -ni * a;
            for r in 0..=m {
                let e = -r * (ni * a + m - 1);
                coeffs.push(datum.monomial_i(i, 1, e, e));
                coeffs.push(datum.monomial_i(i, 1, -e, -e));
                coeffs.push(datum.monomial_i(i, 1, e, 0));
            }
        }
        coeffs.iter().all(|c| c.is_integral())
    }
}

pub fn is_positive_monomial(m: &Monomial) -> bool {
    m.f.is_empty() && m.t.k.iter().all(|&k| k == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root::CartanDatum;

    fn b2() -> Braid {
        Braid::new(Arc::new(Cover::new(Arc::new(CartanDatum::b2_super()))))
    }

    #[test]
    fn rank_one_entries() {
        let b = b2();
        let u = b.cover();
        // T_i(E_i) = −π_i J̃_iK̃_i F_i
        let expect = u.mul(&u.jk_tilde(0, 1, 1), &u.f(0)).scale(&QPiScalar::monomial(-1, 0, 1));
        assert_eq!(b.apply(0, 1, &u.e(0)), expect);
        // T_i^{-1}(E_i) = −F_iK̃_i^{-1}
        let expect = u.mul(&u.f(0), &u.jk_tilde(0, 0, -1)).scale(&QPiScalar::int(-1));
        assert_eq!(b.apply(0, -1, &u.e(0)), expect);
    }

    #[test]
    fn short_root_image() {
        let b = b2();
        let u = b.cover();
        // T_j(E_i) = E_iE_j − q_i² E_jE_i
        let lhs = b.apply(1, 1, &u.e(0));
        let rhs = u.mul(&u.e(0), &u.e(1)).sub(&u.mul(&u.e(1), &u.e(0)).scale(&QPiScalar::q_pow(2)));
        assert!(u.equals(&lhs, &rhs));
    }

    #[test]
    fn inverse_on_generators() {
        let b = b2();
        for (name, g) in b.generators() {
            for i in 0..2 {
                let y = b.apply(i, -1, &b.apply(i, 1, &g));
                assert!(b.cover().equals(&y, &g), "T{i}^-1 T{i} on {name}");
                let y = b.apply(i, 1, &b.apply(i, -1, &g));
                assert!(b.cover().equals(&y, &g), "T{i} T{i}^-1 on {name}");
            }
        }
    }

    #[test]
    fn parse_words() {
        let w = BraidWord::parse("T1 T2^-1 T1", 2).unwrap();
        assert_eq!(w.0, vec![BraidLetter::new(0, 1), BraidLetter::new(1, -1), BraidLetter::new(0, 1)]);
        assert_eq!(w.to_string(), "T1 T2^-1 T1");
        assert_eq!(BraidWord::parse("T3", 2), Err(BraidError::Index(3)));
    }
}
