//! The half algebra **f** on generators θ_i, kept in the free algebra.
//!
//! Serre relations are never rewritten. Two elements are equal in **f** when
//! their difference lies in the radical of the bilinear form, which is tested
//! by iterating the left derivations down to weight zero.

use crate::lincomb::LinComb;
use crate::root::{CartanDatum, Index, RootVec};
use crate::scalar::{choose2, QPiScalar};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// A word in the generators; letters are 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: Index) -> Word {
        Word(vec![i as u8])
    }

    pub fn repeat(i: Index, n: usize) -> Word {
        Word(vec![i as u8; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + o.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn weight(&self, n: usize) -> RootVec {
        let mut v = vec![0; n];
        for &l in &self.0 {
            v[l as usize] += 1;
        }
        RootVec(v)
    }

    pub fn parity(&self, datum: &CartanDatum) -> u8 {
        (self.0.iter().filter(|&&l| datum.parity(l as usize) == 1).count() % 2) as u8
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// Word with letter `k` removed.
    pub fn without(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(k);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "th_{}", l + 1)?;
        }
        Ok(())
    }
}

pub type HalfElement = LinComb<Word>;
pub type HalfTensor = LinComb<(Word, Word)>;

/// Words and their Gram matrix in one weight space.
#[derive(Clone, Debug)]
pub struct Gram {
    pub words: Vec<Word>,
    pub matrix: Vec<Vec<QPiScalar>>,
}

/// Datum-bound operations on **f**.
pub struct Half {
    datum: Arc<CartanDatum>,
    norms: Vec<QPiScalar>,
    grams: Mutex<HashMap<RootVec, Arc<Gram>>>,
}

impl Half {
    pub fn new(datum: Arc<CartanDatum>) -> Half {
        let norms = (0..datum.rank())
            .map(|i| (&QPiScalar::one() - &datum.monomial_i(i, 1, 2, 1)).inv().unwrap())
            .collect();
        Half {
            datum,
            norms,
            grams: Mutex::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> Arc<CartanDatum> {
        self.datum.clone()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// (θ_i, θ_i) = (1 − π_i q_i²)^{-1}.
    pub fn norm(&self, i: Index) -> &QPiScalar {
        &self.norms[i]
    }

    pub fn weight(&self, w: &Word) -> RootVec {
        w.weight(self.rank())
    }

    pub fn one(&self) -> HalfElement {
        HalfElement::basis(Word::empty())
    }

    pub fn theta(&self, i: Index) -> HalfElement {
        HalfElement::basis(Word::letter(i))
    }

    /// θ_i^{(n)} = θ_i^n / [n]_i!.
    pub fn divided_power(&self, i: Index, n: usize) -> HalfElement {
        let c = self.datum.qfact(i, n as i64).inv().unwrap();
        HalfElement::term(Word::repeat(i, n), c)
    }

    pub fn mul(&self, x: &HalfElement, y: &HalfElement) -> HalfElement {
        let mut out = HalfElement::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }

    pub fn product(&self, xs: &[HalfElement]) -> HalfElement {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Letters of a word as θ-generators in order.
    pub fn word_element(&self, w: &Word) -> HalfElement {
        HalfElement::basis(w.clone())
    }

    /// Weight components of an element.
    pub fn homogeneous_parts(&self, x: &HalfElement) -> Vec<(RootVec, HalfElement)> {
        let mut parts: std::collections::BTreeMap<RootVec, HalfElement> = Default::default();
        for (w, c) in x.iter() {
            parts.entry(self.weight(w)).or_default().add_term(w.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// _i r on a single word, as (coefficient data, word) pairs.
    fn deriv_left_word(&self, i: Index, w: &Word, c: &QPiScalar, out: &mut HalfElement) {
        let pi = self.datum.parity(i) as i64;
        let mut qexp = 0i64;
        let mut par = 0i64;
        for (k, &l) in w.0.iter().enumerate() {
            let l = l as usize;
            if l == i {
                out.add_term(w.without(k), c.scale_monomial(1, -qexp, par * pi));
            }
            qexp += self.datum.sym(l, i);
            par += self.datum.parity(l) as i64;
        }
    }

    /// r_i on a single word.
    fn deriv_right_word(&self, i: Index, w: &Word, c: &QPiScalar, out: &mut HalfElement) {
        let pi = self.datum.parity(i) as i64;
        let mut qexp = 0i64;
        let mut par = 0i64;
        for (k, &l) in w.0.iter().enumerate().rev() {
            let l = l as usize;
            if l == i {
                out.add_term(w.without(k), c.scale_monomial(1, -qexp, par * pi));
            }
            qexp += self.datum.sym(l, i);
            par += self.datum.parity(l) as i64;
        }
    }

    /// The left derivation _i r.
    pub fn deriv_left(&self, i: Index, x: &HalfElement) -> HalfElement {
        let mut out = HalfElement::zero();
        for (w, c) in x.iter() {
            self.deriv_left_word(i, w, c, &mut out);
        }
        out
    }

    /// The right derivation r_i.
    pub fn deriv_right(&self, i: Index, x: &HalfElement) -> HalfElement {
        let mut out = HalfElement::zero();
        for (w, c) in x.iter() {
            self.deriv_right_word(i, w, c, &mut out);
        }
        out
    }

    /// π^{p(x')p(y)} q^{−(|x'|,|y|)} for the twisted product of a⊗b with a'⊗b'.
    fn twist(&self, xp: &Word, y: &Word) -> (i64, i64) {
        let e = self.datum.symmetric_form(&self.weight(xp), &self.weight(y));
        let p = xp.parity(&self.datum) as i64 * y.parity(&self.datum) as i64;
        (-e, p)
    }

    /// Product in f ⊗ f with the twisted multiplication.
    pub fn tensor_mul(&self, x: &HalfTensor, y: &HalfTensor) -> HalfTensor {
        let mut out = HalfTensor::zero();
        for ((a, b), c) in x.iter() {
            for ((a2, b2), c2) in y.iter() {
                let (qe, pe) = self.twist(a2, b);
                out.add_term((a.concat(a2), b.concat(b2)), (c * c2).scale_monomial(1, qe, pe));
            }
        }
        out
    }

    /// The twisted coproduct r: f → f ⊗ f.
    pub fn coproduct(&self, x: &HalfElement) -> HalfTensor {
        let mut out = HalfTensor::zero();
        for (w, c) in x.iter() {
            let mut acc: Vec<(Word, Word, QPiScalar)> = vec![(Word::empty(), Word::empty(), c.clone())];
            for &l in &w.0 {
                let li = l as usize;
                let mut next = Vec::with_capacity(acc.len() * 2);
                for (a, b, cc) in acc {
                    let (qe, pe) = self.twist(&Word::letter(li), &b);
                    let mut a2 = a.clone();
                    a2.0.push(l);
                    next.push((a2, b.clone(), cc.scale_monomial(1, qe, pe)));
                    let mut b2 = b;
                    b2.0.push(l);
                    next.push((a, b2, cc));
                }
                acc = next;
            }
            for (a, b, cc) in acc {
                out.add_term((a, b), cc);
            }
        }
        out
    }

    /// ∏ (θ_i, θ_i)^{ν_i}.
    pub fn norm_product(&self, nu: &RootVec) -> QPiScalar {
        let mut acc = QPiScalar::one();
        for (i, &k) in nu.0.iter().enumerate() {
            for _ in 0..k {
                acc = &acc * &self.norms[i];
            }
        }
        acc
    }

    /// Σ_w x_w [∂_w y]_∅ over a block of words sharing their first `depth` letters.
    fn form_rec(&self, xs: &[(&Word, &QPiScalar)], depth: usize, y: &HalfElement) -> QPiScalar {
        if y.is_zero() || xs.is_empty() {
            return QPiScalar::zero();
        }
        if depth == xs[0].0.len() {
            return xs[0].1 * &y.coeff(&Word::empty());
        }
        let mut acc = QPiScalar::zero();
        let mut start = 0;
        while start < xs.len() {
            let l = xs[start].0 .0[depth];
            let mut end = start;
            while end < xs.len() && xs[end].0 .0[depth] == l {
                end += 1;
            }
            let dy = self.deriv_left(l as usize, y);
            acc += &self.form_rec(&xs[start..end], depth + 1, &dy);
            start = end;
        }
        acc
    }

    /// The symmetric bilinear form on f.
    pub fn form(&self, x: &HalfElement, y: &HalfElement) -> QPiScalar {
        let ys: HashMap<RootVec, HalfElement> = self.homogeneous_parts(y).into_iter().collect();
        let mut acc = QPiScalar::zero();
        for (nu, xp) in self.homogeneous_parts(x) {
            let Some(yp) = ys.get(&nu) else { continue };
            let unit = yp.denominator_unit();
            let ycl = yp.scale(&unit);
            let terms: Vec<(&Word, &QPiScalar)> = xp.iter().collect();
            let v = self.form_rec(&terms, 0, &ycl);
            if v.is_zero() {
                continue;
            }
            let v = &(&v * &self.norm_product(&nu)) * &unit.inv().unwrap();
            acc += &v;
        }
        acc
    }

    /// Form on f ⊗ f: (a⊗b, c⊗d) = (a,c)(b,d).
    pub fn tensor_form(&self, x: &HalfTensor, y: &HalfTensor) -> QPiScalar {
        let mut acc = QPiScalar::zero();
        let mut cache: HashMap<(Word, Word), QPiScalar> = HashMap::new();
        let mut f = |a: &Word, c: &Word| -> QPiScalar {
            cache
                .entry((a.clone(), c.clone()))
                .or_insert_with(|| self.form(&HalfElement::basis(a.clone()), &HalfElement::basis(c.clone())))
                .clone()
        };
        for ((a, b), c1) in x.iter() {
            for ((c, d), c2) in y.iter() {
                if a.len() != c.len() || b.len() != d.len() {
                    continue;
                }
                let v1 = f(a, c);
                if v1.is_zero() {
                    continue;
                }
                let v2 = f(b, d);
                acc += &(&(c1 * c2) * &(&v1 * &v2));
            }
        }
        acc
    }

    fn radical_rec(&self, x: &HalfElement, nu: &RootVec) -> bool {
        if x.is_zero() {
            return true;
        }
        if nu.is_zero() {
            return false;
        }
        for i in 0..self.rank() {
            if nu.0[i] == 0 {
                continue;
            }
            let dx = self.deriv_left(i, x);
            let mut nu2 = nu.clone();
            nu2.0[i] -= 1;
            if !self.radical_rec(&dx, &nu2) {
                return false;
            }
        }
        true
    }

    /// x pairs to zero with every word, i.e. x = 0 in f.
    pub fn is_zero(&self, x: &HalfElement) -> bool {
        self.homogeneous_parts(x)
            .iter()
            .all(|(nu, part)| self.radical_rec(&part.clear_denominators(), nu))
    }

    pub fn equals_mod_serre(&self, x: &HalfElement, y: &HalfElement) -> bool {
        self.is_zero(&x.sub(y))
    }

    /// Zero test in f ⊗ f: derivations are pushed through the first factor until
    /// it is a scalar, then the remaining element of f is tested.
    pub fn tensor_is_zero(&self, x: &HalfTensor) -> bool {
        let mut parts: std::collections::BTreeMap<(RootVec, RootVec), HalfTensor> = Default::default();
        for ((a, b), c) in x.iter() {
            parts
                .entry((self.weight(a), self.weight(b)))
                .or_default()
                .add_term((a.clone(), b.clone()), c.clone());
        }
        parts
            .into_iter()
            .all(|((nu1, _), part)| self.tensor_rad_rec(&part.clear_denominators(), &nu1))
    }

    fn tensor_rad_rec(&self, x: &HalfTensor, nu1: &RootVec) -> bool {
        if x.is_zero() {
            return true;
        }
        if nu1.is_zero() {
            let y = HalfElement::from_terms(x.iter().map(|((_, b), c)| (b.clone(), c.clone())));
            return self.is_zero(&y);
        }
        for i in 0..self.rank() {
            if nu1.0[i] == 0 {
                continue;
            }
            let mut dx = HalfTensor::zero();
            for ((a, b), c) in x.iter() {
                let mut tmp = HalfElement::zero();
                self.deriv_left_word(i, a, c, &mut tmp);
                for (a2, c2) in tmp.into_iter_terms() {
                    dx.add_term((a2, b.clone()), c2);
                }
            }
            let mut nu2 = nu1.clone();
            nu2.0[i] -= 1;
            if !self.tensor_rad_rec(&dx, &nu2) {
                return false;
            }
        }
        true
    }

    /// Zero test in a k-fold tensor power of **f**, one factor at a time.
    pub fn multi_is_zero(&self, x: &LinComb<Vec<Word>>) -> bool {
        let mut parts: std::collections::BTreeMap<Vec<RootVec>, LinComb<Vec<Word>>> = Default::default();
        for (ws, c) in x.iter() {
            let key = ws.iter().map(|w| self.weight(w)).collect();
            parts.entry(key).or_default().add_term(ws.clone(), c.clone());
        }
        parts.into_iter().all(|(mut nus, part)| self.multi_rec(&part.clear_denominators(), &mut nus, 0))
    }

    fn multi_rec(&self, x: &LinComb<Vec<Word>>, nus: &mut Vec<RootVec>, pos: usize) -> bool {
        if x.is_zero() {
            return true;
        }
        let Some(pos) = (pos..nus.len()).find(|&p| !nus[p].is_zero()) else {
            return false;
        };
        for i in 0..self.rank() {
            if nus[pos].0[i] == 0 {
                continue;
            }
            let mut dx = LinComb::zero();
            for (ws, c) in x.iter() {
                let mut tmp = HalfElement::zero();
                self.deriv_left_word(i, &ws[pos], c, &mut tmp);
                for (w2, c2) in tmp.into_iter_terms() {
                    let mut ws2 = ws.clone();
                    ws2[pos] = w2;
                    dx.add_term(ws2, c2);
                }
            }
            nus[pos].0[i] -= 1;
            let ok = self.multi_rec(&dx, nus, pos);
            nus[pos].0[i] += 1;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Σ_k (−1)^k π^{C(k,2)p(i) + k p(i)p(j)} θ_i^{(b−k)} θ_j θ_i^{(k)} with b = 1 − a_ij.
    pub fn serre_element(&self, i: Index, j: Index) -> HalfElement {
        let b = self.datum.b(i, j);
        let pi = self.datum.parity(i) as i64;
        let pj = self.datum.parity(j) as i64;
        let mut out = HalfElement::zero();
        for k in 0..=b {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let c = QPiScalar::monomial(sign, 0, choose2(k) * pi + k * pi * pj);
            let t = self.product(&[
                self.divided_power(i, (b - k) as usize),
                self.theta(j),
                self.divided_power(i, k as usize),
            ]);
            out.add_scaled(&t, &c);
        }
        out
    }

    /// All words of weight ν in lexicographic order.
    pub fn words_of_weight(&self, nu: &RootVec) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut rem = nu.0.clone();
        fn go(rem: &mut Vec<i64>, cur: &mut Vec<u8>, out: &mut Vec<Word>) {
            if rem.iter().all(|&r| r == 0) {
                out.push(Word(cur.clone()));
                return;
            }
            for i in 0..rem.len() {
                if rem[i] > 0 {
                    rem[i] -= 1;
                    cur.push(i as u8);
                    go(rem, cur, out);
                    cur.pop();
                    rem[i] += 1;
                }
            }
        }
        if nu.is_nonneg() {
            go(&mut rem, &mut cur, &mut out);
        }
        out
    }

    /// Gram matrix of all words of weight ν, memoized per weight.
    pub fn gram(&self, nu: &RootVec) -> Arc<Gram> {
        if let Some(g) = self.grams.lock().unwrap().get(nu) {
            return g.clone();
        }
        let words = self.words_of_weight(nu);
        let np = self.norm_product(nu);
        let n = words.len();
        let mut matrix = vec![vec![QPiScalar::zero(); n]; n];
        for (c, wc) in words.iter().enumerate() {
            // One column: derivative tree of the single word wc along every row word.
            let y = HalfElement::basis(wc.clone());
            let mut vals = vec![QPiScalar::zero(); n];
            self.column_rec(&words, 0, n, 0, &y, &mut vals);
            for r in 0..n {
                matrix[r][c] = &vals[r] * &np;
            }
        }
        let g = Arc::new(Gram { words, matrix });
        self.grams.lock().unwrap().insert(nu.clone(), g.clone());
        g
    }

    /// (w, x) for every word w of weight ν, in the order of `words_of_weight`.
    pub fn pairings(&self, nu: &RootVec, x: &HalfElement) -> Vec<QPiScalar> {
        let words = self.words_of_weight(nu);
        let n = words.len();
        let mut vals = vec![QPiScalar::zero(); n];
        let part = x.filter(|w| &self.weight(w) == nu);
        if n > 0 {
            self.column_rec(&words, 0, n, 0, &part, &mut vals);
        }
        let np = self.norm_product(nu);
        vals.iter().map(|v| v * &np).collect()
    }

    fn column_rec(&self, words: &[Word], lo: usize, hi: usize, depth: usize, y: &HalfElement, out: &mut [QPiScalar]) {
        if y.is_zero() || lo >= hi {
            return;
        }
        if depth == words[lo].len() {
            out[lo] = y.coeff(&Word::empty());
            return;
        }
        let mut start = lo;
        while start < hi {
            let l = words[start].0[depth];
            let mut end = start;
            while end < hi && words[end].0[depth] == l {
                end += 1;
            }
            let dy = self.deriv_left(l as usize, y);
            self.column_rec(words, start, end, depth + 1, &dy, out);
            start = end;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> Half {
        Half::new(Arc::new(CartanDatum::b2_super()))
    }

    #[test]
    fn derivations_on_short_words() {
        let h = b2();
        let ij = HalfElement::basis(Word(vec![0, 1]));
        assert_eq!(h.deriv_left(0, &ij), h.theta(1));
        let ji = HalfElement::basis(Word(vec![1, 0]));
        // π^{p(j)p(i)} q^{−(α_j, α_i)} θ_j with (α_j, α_i) = −2
        assert_eq!(h.deriv_left(0, &ji), HalfElement::term(Word::letter(1), QPiScalar::q_pow(2)));
        assert_eq!(h.deriv_left(0, &h.theta(1)), HalfElement::zero());
        assert_eq!(h.deriv_left(0, &h.theta(0)), h.one());
    }

    #[test]
    fn form_on_generators() {
        let h = b2();
        let n0 = (&QPiScalar::one() - &QPiScalar::monomial(1, 2, 1)).inv().unwrap();
        assert_eq!(h.form(&h.theta(0), &h.theta(0)), n0);
        assert!(h.form(&h.theta(0), &h.theta(1)).is_zero());
    }

    #[test]
    fn serre_elements_vanish() {
        for datum in [CartanDatum::a2(), CartanDatum::spin_rank2()] {
            let h = Half::new(Arc::new(datum));
            assert!(h.is_zero(&h.serre_element(0, 1)));
            assert!(h.is_zero(&h.serre_element(1, 0)));
        }
        let h = b2();
        assert_eq!(h.serre_element(0, 1).len(), 4);
        assert!(h.is_zero(&h.serre_element(0, 1)));
        assert!(h.is_zero(&h.serre_element(1, 0)));
        let ij = HalfElement::basis(Word(vec![0, 1]));
        let ji = HalfElement::basis(Word(vec![1, 0]));
        assert!(!h.equals_mod_serre(&ij, &ji));
    }

    #[test]
    fn coproduct_of_divided_square() {
        let h = b2();
        let r = h.coproduct(&h.divided_power(0, 2));
        let mut expect = HalfTensor::zero();
        let t2 = h.divided_power(0, 2);
        for (w, c) in t2.iter() {
            expect.add_term((w.clone(), Word::empty()), c.clone());
            expect.add_term((Word::empty(), w.clone()), c.clone());
        }
        expect.add_term((Word::letter(0), Word::letter(0)), QPiScalar::monomial(1, -1, 1));
        assert_eq!(r, expect);
    }
}
