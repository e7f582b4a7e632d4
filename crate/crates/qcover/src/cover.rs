//! The quantum covering group **U** in triangular normal form F·(J K)·E.
//!
//! Products are straightened by moving E-letters rightwards through F-words
//! with the derivation form of the E/F commutator. Equality is decided by the
//! form on **f** ⊗ **f**, one torus component at a time.

use crate::half::{Half, HalfElement, Word};
use crate::lincomb::LinComb;
use crate::root::{CartanDatum, Coweight, Index, RootVec};
use crate::scalar::{choose2, QPiScalar};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

/// J_a K_b with a taken modulo 2; both in simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Torus {
    pub j: Vec<u8>,
    pub k: Vec<i64>,
}

impl Torus {
    pub fn identity(n: usize) -> Torus {
        Torus { j: vec![0; n], k: vec![0; n] }
    }

    pub fn new(j: &[i64], k: &[i64]) -> Torus {
        Torus {
            j: j.iter().map(|x| x.rem_euclid(2) as u8).collect(),
            k: k.to_vec(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.j.iter().all(|&x| x == 0) && self.k.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &Torus) -> Torus {
        Torus {
            j: self.j.iter().zip(&o.j).map(|(a, b)| (a + b) % 2).collect(),
            k: self.k.iter().zip(&o.k).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn j_coweight(&self) -> Coweight {
        Coweight(self.j.iter().map(|&x| x as i64).collect())
    }

    pub fn k_coweight(&self) -> Coweight {
        Coweight(self.k.clone())
    }
}

/// F_f · J_a K_b · E_e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub f: Word,
    pub t: Torus,
    pub e: Word,
}

impl Monomial {
    pub fn torus(t: Torus) -> Monomial {
        Monomial { f: Word::empty(), t, e: Word::empty() }
    }
}

pub type CoverElement = LinComb<Monomial>;
pub type CoverTensor = LinComb<(Monomial, Monomial)>;

/// Datum-bound arithmetic in **U**.
pub struct Cover {
    half: Arc<Half>,
    // (π_i q_i − q_i^{-1})^{-1}
    denom: Vec<QPiScalar>,
    ef: Mutex<HashMap<(Word, Word), Arc<CoverElement>>>,
}

impl Cover {
    pub fn new(datum: Arc<CartanDatum>) -> Cover {
        Cover::from_half(Arc::new(Half::new(datum)))
    }

    pub fn from_half(half: Arc<Half>) -> Cover {
        let datum = half.datum();
        let denom = (0..datum.rank())
            .map(|i| {
                (&datum.monomial_i(i, 1, 1, 1) - &datum.monomial_i(i, 1, -1, 0))
                    .inv()
                    .expect("π_iq_i − q_i^{-1} is a unit")
            })
            .collect();
        Cover {
            half,
            denom,
            ef: Mutex::new(HashMap::new()),
        }
    }

    pub fn half(&self) -> &Half {
        &self.half
    }

    pub fn half_arc(&self) -> Arc<Half> {
        self.half.clone()
    }

    pub fn datum(&self) -> &CartanDatum {
        self.half.datum()
    }

    pub fn rank(&self) -> usize {
        self.datum().rank()
    }

    /// (π_i q_i − q_i^{-1})^{-1}.
    pub fn commutator_denominator(&self, i: Index) -> &QPiScalar {
        &self.denom[i]
    }

    fn word_weight(&self, w: &Word) -> RootVec {
        self.half.weight(w)
    }

    /// ⟨a, ν⟩ for a torus exponent vector a.
    fn pair(&self, a: &[i64], nu: &RootVec) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += a[i] * self.datum().a(i, j) * nu.0[j];
            }
        }
        s
    }

    fn pair_j(&self, a: &[u8], nu: &RootVec) -> i64 {
        let a: Vec<i64> = a.iter().map(|&x| x as i64).collect();
        self.pair(&a, nu)
    }

    /// (q-exponent, π-exponent) of T X = c X T for X an E-word of weight ν.
    /// For F-words the q-exponent changes sign.
    fn torus_shift(&self, t: &Torus, nu: &RootVec) -> (i64, i64) {
        (self.pair(&t.k, nu), self.pair_j(&t.j, nu))
    }

    // ---- generators -------------------------------------------------------

    pub fn zero(&self) -> CoverElement {
        CoverElement::zero()
    }

    pub fn one(&self) -> CoverElement {
        CoverElement::basis(Monomial::torus(Torus::identity(self.rank())))
    }

    pub fn scalar(&self, c: QPiScalar) -> CoverElement {
        self.one().scale(&c)
    }

    pub fn e(&self, i: Index) -> CoverElement {
        self.plus(&self.half.theta(i))
    }

    pub fn f(&self, i: Index) -> CoverElement {
        self.minus(&self.half.theta(i))
    }

    pub fn e_div(&self, i: Index, n: usize) -> CoverElement {
        self.plus(&self.half.divided_power(i, n))
    }

    pub fn f_div(&self, i: Index, n: usize) -> CoverElement {
        self.minus(&self.half.divided_power(i, n))
    }

    pub fn torus(&self, t: Torus) -> CoverElement {
        CoverElement::basis(Monomial::torus(t))
    }

    pub fn k(&self, mu: &Coweight) -> CoverElement {
        self.torus(Torus::new(&vec![0; self.rank()], &mu.0))
    }

    pub fn j(&self, mu: &Coweight) -> CoverElement {
        self.torus(Torus::new(&mu.0, &vec![0; self.rank()]))
    }

    /// J_a K_b as a torus for coweights a, b.
    pub fn jk(&self, a: &Coweight, b: &Coweight) -> Torus {
        Torus::new(&a.0, &b.0)
    }

    /// J̃_i^a K̃_i^b. The J-exponent d_i is reduced to π_i's exponent, which agrees
    /// with d_i mod 2 under (P2) and keeps purely even data classical.
    pub fn tilde_torus(&self, i: Index, a: i64, b: i64) -> Torus {
        let n = self.rank();
        let mut j = vec![0; n];
        let mut k = vec![0; n];
        j[i] = a * self.datum().pi_exp(i);
        k[i] = b * self.datum().d(i);
        Torus::new(&j, &k)
    }

    /// J̃_i^a K̃_i^b as an element.
    pub fn jk_tilde(&self, i: Index, a: i64, b: i64) -> CoverElement {
        self.torus(self.tilde_torus(i, a, b))
    }

    /// x ↦ x^+ from **f**.
    pub fn plus(&self, x: &HalfElement) -> CoverElement {
        let id = Torus::identity(self.rank());
        CoverElement::from_terms(
            x.iter()
                .map(|(w, c)| (Monomial { f: Word::empty(), t: id.clone(), e: w.clone() }, c.clone())),
        )
    }

    /// x ↦ x^- from **f**.
    pub fn minus(&self, x: &HalfElement) -> CoverElement {
        let id = Torus::identity(self.rank());
        CoverElement::from_terms(
            x.iter()
                .map(|(w, c)| (Monomial { f: w.clone(), t: id.clone(), e: Word::empty() }, c.clone())),
        )
    }

    pub fn monomial_parity(&self, m: &Monomial) -> u8 {
        (m.f.parity(self.datum()) + m.e.parity(self.datum())) % 2
    }

    /// Weight of a monomial in the root lattice: |e| − |f|.
    pub fn monomial_weight(&self, m: &Monomial) -> RootVec {
        self.word_weight(&m.e).sub(&self.word_weight(&m.f))
    }

    // ---- straightening ----------------------------------------------------

    /// E_e F_f in normal form.
    pub fn straighten_ef(&self, e: &Word, f: &Word) -> Arc<CoverElement> {
        let n = self.rank();
        if e.is_empty() || f.is_empty() {
            return Arc::new(CoverElement::basis(Monomial {
                f: f.clone(),
                t: Torus::identity(n),
                e: e.clone(),
            }));
        }
        let key = (e.clone(), f.clone());
        if let Some(v) = self.ef.lock().unwrap().get(&key) {
            return v.clone();
        }
        let b = *e.0.last().unwrap() as usize;
        let rest = Word(e.0[..e.len() - 1].to_vec());
        let step = self.e_letter_past_f(b, f);
        let mut out = CoverElement::zero();
        for (m, c) in step.iter() {
            // E_rest · F_{m.f} · T · E_{m.e}
            let inner = self.straighten_ef(&rest, &m.f);
            for (m2, c2) in inner.iter() {
                let (qe, pe) = self.torus_shift(&m.t, &self.word_weight(&m2.e));
                let coef = (c * c2).scale_monomial(1, -qe, pe);
                out.add_term(
                    Monomial { f: m2.f.clone(), t: m2.t.mul(&m.t), e: m2.e.concat(&m.e) },
                    coef,
                );
            }
        }
        let out = Arc::new(out);
        self.ef.lock().unwrap().insert(key, out.clone());
        out
    }

    /// E_b F_f = π^{p(b)p(f)} F_f E_b + (π_b^{p(f)−p(b)} r_b(f)^- J̃_bK̃_b − K̃_b^{-1} _b r(f)^-)/(π_bq_b − q_b^{-1}).
    fn e_letter_past_f(&self, b: Index, f: &Word) -> CoverElement {
        let datum = self.datum();
        let n = self.rank();
        let pb = datum.parity(b) as i64;
        let pf = f.parity(datum) as i64;
        let mut out = CoverElement::zero();
        out.add_term(
            Monomial { f: f.clone(), t: Torus::identity(n), e: Word::letter(b) },
            QPiScalar::pi_pow(pb * pf),
        );
        let fw = HalfElement::basis(f.clone());
        let den = &self.denom[b];
        let right = self.half.deriv_right(b, &fw);
        let t_plus = self.tilde_torus(b, 1, 1);
        let c1 = den.scale_monomial(1, 0, datum.pi_exp(b) * (pf - pb));
        for (w, c) in right.iter() {
            out.add_term(Monomial { f: w.clone(), t: t_plus.clone(), e: Word::empty() }, c * &c1);
        }
        let left = self.half.deriv_left(b, &fw);
        let t_minus = self.tilde_torus(b, 0, -1);
        for (w, c) in left.iter() {
            // K̃_b^{-1} F_w = q^{(α_b,|w|)} F_w K̃_b^{-1}
            let s = datum.form_with_simple(&self.word_weight(w), b);
            out.add_term(
                Monomial { f: w.clone(), t: t_minus.clone(), e: Word::empty() },
                (c * den).scale_monomial(-1, s, 0),
            );
        }
        out
    }

    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> CoverElement {
        let mid = self.straighten_ef(&a.e, &b.f);
        let mut out = CoverElement::zero();
        for (m, c) in mid.iter() {
            // a.t · F_{m.f}: π^{⟨j,ν⟩} q^{−⟨k,ν⟩}
            let (q1, p1) = self.torus_shift(&a.t, &self.word_weight(&m.f));
            // E_{m.e} · b.t: π^{⟨j,ν⟩} q^{−⟨k,ν⟩}
            let (q2, p2) = self.torus_shift(&b.t, &self.word_weight(&m.e));
            out.add_term(
                Monomial { f: a.f.concat(&m.f), t: a.t.mul(&m.t).mul(&b.t), e: m.e.concat(&b.e) },
                c.scale_monomial(1, -q1 - q2, p1 + p2),
            );
        }
        out
    }

    pub fn mul(&self, x: &CoverElement, y: &CoverElement) -> CoverElement {
        let mut out = CoverElement::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let c = ca * cb;
                out.add_scaled(&self.mul_monomials(a, b), &c);
            }
        }
        out
    }

    pub fn product(&self, xs: &[CoverElement]) -> CoverElement {
        let mut it = xs.iter();
        let Some(first) = it.next() else { return self.one() };
        it.fold(first.clone(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, x: &CoverElement, n: usize) -> CoverElement {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Drop a monomial's E-part into **f** (coefficients of pure E-words at the identity torus).
    pub fn split_torus(&self, x: &CoverElement) -> BTreeMap<Torus, LinComb<(Word, Word)>> {
        let mut out: BTreeMap<Torus, LinComb<(Word, Word)>> = BTreeMap::new();
        for (m, c) in x.iter() {
            out.entry(m.t.clone()).or_default().add_term((m.f.clone(), m.e.clone()), c.clone());
        }
        out
    }

    // ---- equality ---------------------------------------------------------

    /// x = 0 in **U**.
    pub fn is_zero(&self, x: &CoverElement) -> bool {
        self.split_torus(x).values().all(|part| self.half.tensor_is_zero(part))
    }

    pub fn equals(&self, x: &CoverElement, y: &CoverElement) -> bool {
        self.is_zero(&x.sub(y))
    }

    /// Representative with Serre-equivalent words merged is not canonical; this
    /// gives the coefficient of a torus-only part, used for U⁰ projections.
    pub fn torus_part(&self, x: &CoverElement) -> BTreeMap<Torus, QPiScalar> {
        let mut out = BTreeMap::new();
        for (m, c) in x.iter() {
            if m.f.is_empty() && m.e.is_empty() {
                out.insert(m.t.clone(), c.clone());
            }
        }
        out
    }

    // ---- homomorphisms ----------------------------------------------------

    /// Apply the algebra map (or anti-map) determined by generator images.
    pub fn apply_map(
        &self,
        x: &CoverElement,
        img_e: &dyn Fn(Index) -> CoverElement,
        img_f: &dyn Fn(Index) -> CoverElement,
        img_t: &dyn Fn(&Torus) -> CoverElement,
        anti: bool,
    ) -> CoverElement {
        let n = self.rank();
        let es: Vec<CoverElement> = (0..n).map(img_e).collect();
        let fs: Vec<CoverElement> = (0..n).map(img_f).collect();
        let mut word_cache: HashMap<(bool, Word), CoverElement> = HashMap::new();
        let mut word_image = |is_e: bool, w: &Word| -> CoverElement {
            if let Some(v) = word_cache.get(&(is_e, w.clone())) {
                return v.clone();
            }
            let gens = if is_e { &es } else { &fs };
            let mut acc = self.one();
            for &l in &w.0 {
                let g = &gens[l as usize];
                acc = if anti { self.mul(g, &acc) } else { self.mul(&acc, g) };
            }
            word_cache.insert((is_e, w.clone()), acc.clone());
            acc
        };
        let mut out = CoverElement::zero();
        for (m, c) in x.iter() {
            let fi = word_image(false, &m.f);
            let ti = img_t(&m.t);
            let ei = word_image(true, &m.e);
            let v = if anti {
                self.product(&[ei, ti, fi])
            } else {
                self.product(&[fi, ti, ei])
            };
            out.add_scaled(&v, c);
        }
        out
    }

    /// ω(E_i) = π_i J̃_i F_i, ω(F_i) = E_i, ω(K_ν) = K_{−ν}, ω(J_ν) = J_ν.
    pub fn omega(&self, x: &CoverElement) -> CoverElement {
        let datum = self.datum();
        self.apply_map(
            x,
            &|i| self.mul(&self.jk_tilde(i, 1, 0), &self.f(i)).scale(&datum.monomial_i(i, 1, 0, 1)),
            &|i| self.e(i),
            &|t| self.torus(Torus { j: t.j.clone(), k: t.k.iter().map(|v| -v).collect() }),
            false,
        )
    }

    /// The anti-automorphism σ(E_i) = E_i, σ(F_i) = π_i J̃_i F_i, σ(K_ν) = K_{−ν}, σ(J_ν) = J_ν.
    pub fn sigma(&self, x: &CoverElement) -> CoverElement {
        let datum = self.datum();
        self.apply_map(
            x,
            &|i| self.e(i),
            &|i| self.mul(&self.jk_tilde(i, 1, 0), &self.f(i)).scale(&datum.monomial_i(i, 1, 0, 1)),
            &|t| self.torus(Torus { j: t.j.clone(), k: t.k.iter().map(|v| -v).collect() }),
            true,
        )
    }

    /// The bar involution: E, F fixed, K_ν ↦ J_ν K_{−ν}, coefficients barred.
    pub fn bar(&self, x: &CoverElement) -> CoverElement {
        CoverElement::from_terms(x.iter().map(|(m, c)| {
            let j: Vec<i64> = m.t.j.iter().zip(&m.t.k).map(|(&a, &b)| a as i64 + b).collect();
            let k: Vec<i64> = m.t.k.iter().map(|v| -v).collect();
            (Monomial { f: m.f.clone(), t: Torus::new(&j, &k), e: m.e.clone() }, c.bar())
        }))
    }

    // ---- coproduct ----------------------------------------------------------

    /// (x⊗y)(x'⊗y') = π^{p(x')p(y)} xx' ⊗ yy'.
    pub fn tensor_mul(&self, x: &CoverTensor, y: &CoverTensor) -> CoverTensor {
        let mut out = CoverTensor::zero();
        for ((a, b), c) in x.iter() {
            for ((a2, b2), c2) in y.iter() {
                let sign = self.monomial_parity(a2) as i64 * self.monomial_parity(b) as i64;
                let c = (c * c2).scale_monomial(1, 0, sign);
                let left = self.mul_monomials(a, a2);
                let right = self.mul_monomials(b, b2);
                for (l, cl) in left.iter() {
                    for (r, cr) in right.iter() {
                        out.add_term((l.clone(), r.clone()), &(&c * cl) * cr);
                    }
                }
            }
        }
        out
    }

    pub fn tensor_one(&self) -> CoverTensor {
        let id = Monomial::torus(Torus::identity(self.rank()));
        CoverTensor::basis((id.clone(), id))
    }

    /// x ⊗ y for elements.
    pub fn tensor(&self, x: &CoverElement, y: &CoverElement) -> CoverTensor {
        let mut out = CoverTensor::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_term((a.clone(), b.clone()), ca * cb);
            }
        }
        out
    }

    /// Δ on generators extended as an algebra map for the twisted product.
    pub fn coproduct(&self, x: &CoverElement) -> CoverTensor {
        let n = self.rank();
        let one = self.one();
        let de: Vec<CoverTensor> = (0..n)
            .map(|i| self.tensor(&self.e(i), &one).add(&self.tensor(&self.jk_tilde(i, 1, 1), &self.e(i))))
            .collect();
        let df: Vec<CoverTensor> = (0..n)
            .map(|i| self.tensor(&self.f(i), &self.jk_tilde(i, 0, -1)).add(&self.tensor(&one, &self.f(i))))
            .collect();
        let mut out = CoverTensor::zero();
        for (m, c) in x.iter() {
            let mut acc = self.tensor_one();
            for &l in &m.f.0 {
                acc = self.tensor_mul(&acc, &df[l as usize]);
            }
            let t = self.torus(m.t.clone());
            acc = self.tensor_mul(&acc, &self.tensor(&t, &t));
            for &l in &m.e.0 {
                acc = self.tensor_mul(&acc, &de[l as usize]);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// x = 0 in **U** ⊗ **U**.
    pub fn tensor_is_zero(&self, x: &CoverTensor) -> bool {
        let mut groups: BTreeMap<(Torus, Torus), LinComb<Vec<Word>>> = BTreeMap::new();
        for ((a, b), c) in x.iter() {
            groups
                .entry((a.t.clone(), b.t.clone()))
                .or_default()
                .add_term(vec![a.f.clone(), a.e.clone(), b.f.clone(), b.e.clone()], c.clone());
        }
        groups.values().all(|g| self.half.multi_is_zero(g))
    }

    pub fn tensor_equals(&self, x: &CoverTensor, y: &CoverTensor) -> bool {
        self.tensor_is_zero(&x.sub(y))
    }

    // ---- special elements ---------------------------------------------------

    /// [α_i^∨; n] = (π_i^n q_i^n J̃_iK̃_i − K̃_i^{-1} q_i^{-n}) / (π_iq_i − q_i^{-1}).
    pub fn coroot_bracket(&self, i: Index, n: i64) -> CoverElement {
        let datum = self.datum();
        let a = self.jk_tilde(i, 1, 1).scale(&datum.monomial_i(i, 1, n, n));
        let b = self.jk_tilde(i, 0, -1).scale(&datum.monomial_i(i, 1, -n, 0));
        a.sub(&b).scale(&self.denom[i])
    }

    /// [α_i^∨; n choose t] = ∏_{s=1}^t [α_i^∨; n+1−s] / [t]_i!.
    pub fn coroot_binomial(&self, i: Index, n: i64, t: i64) -> CoverElement {
        let mut acc = self.one();
        for s in 1..=t {
            acc = self.mul(&acc, &self.coroot_bracket(i, n + 1 - s));
        }
        acc.scale(&self.datum().qfact(i, t).inv().unwrap())
    }

    /// Serre relation in E's (`plus`) or F's of **U**.
    pub fn serre(&self, i: Index, j: Index, plus: bool) -> CoverElement {
        let s = self.half.serre_element(i, j);
        if plus {
            self.plus(&s)
        } else {
            self.minus(&s)
        }
    }

    /// One of e, e', f, f' with parameters (i, j; n, m):
    /// Σ_{r+s=m} (−1)^r π_i^{p(n,r;i,j)} c^{∓r(na_ij+m−1)} times the divided-power word,
    /// with c = π_iq_i for e, e' and c = q_i for f, f'. Words are E^{(r)}E_j^{(n)}E^{(s)},
    /// E^{(s)}E_j^{(n)}E^{(r)}, F^{(s)}F_j^{(n)}F^{(r)}, F^{(r)}F_j^{(n)}F^{(s)} respectively.
    pub fn higher_serre(&self, kind: SerreKind, i: Index, j: Index, n: usize, m: usize) -> CoverElement {
        let datum = self.datum();
        let half = &self.half;
        let pi = datum.pi_exp(i);
        let pij = datum.parity(i) as i64 * datum.parity(j) as i64;
        let aij = datum.a(i, j);
        let expo = n as i64 * aij + m as i64 - 1;
        let mut out = HalfElement::zero();
        for r in 0..=m {
            let s = m - r;
            let ri = r as i64;
            // π_i^{p(n,r;i,j)}
            let pexp = pi * (ri * n as i64 * pij + choose2(ri) * datum.parity(i) as i64);
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let (qe, pe) = match kind {
                SerreKind::E => (-ri * expo, -ri * expo),
                SerreKind::EPrime => (-ri * expo, -ri * expo),
                SerreKind::F => (ri * expo, 0),
                SerreKind::FPrime => (ri * expo, 0),
            };
            let c = datum.monomial_i(i, sign, qe, pe).scale_monomial(1, 0, pexp);
            let (left, right) = match kind {
                SerreKind::E | SerreKind::FPrime => (r, s),
                SerreKind::EPrime | SerreKind::F => (s, r),
            };
            let w = half.product(&[half.divided_power(i, left), half.divided_power(j, n), half.divided_power(i, right)]);
            out.add_scaled(&w, &c);
        }
        match kind {
            SerreKind::E | SerreKind::EPrime => self.plus(&out),
            SerreKind::F | SerreKind::FPrime => self.minus(&out),
        }
    }

    /// Number of cached E/F straightening results.
    pub fn cache_len(&self) -> usize {
        self.ef.lock().unwrap().len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SerreKind {
    E,
    EPrime,
    F,
    FPrime,
}

impl fmt::Display for Torus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js: Vec<String> = self.j.iter().map(|x| x.to_string()).collect();
        let ks: Vec<String> = self.k.iter().map(|x| x.to_string()).collect();
        write!(f, "J{{{}}}*K{{{}}}", js.join(","), ks.join(","))
    }
}
