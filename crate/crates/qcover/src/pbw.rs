//! The subalgebra U⁺_J generated by the E_i and J̃_i, its U⁰_J-valued form,
//! the subalgebras U⁺_J[i] and ^σU⁺_J[i], admissible sequences and PBW bases.
//!
//! An element of U⁺_J is stored as Σ c·J_a·E_w with J-exponents a taken mod 2
//! in simple-coroot coordinates. Equality and the form go through **f** one
//! J-component at a time.

use crate::braid::Braid;
use crate::cover::{Cover, CoverElement, Monomial, Torus};
use crate::half::{Half, HalfElement, Word};
use crate::lincomb::LinComb;
use crate::linalg::{qpi_kernel, QPiEchelon};
use crate::root::{CartanDatum, Coweight, Index, RootVec};
use crate::scalar::{choose2, QPiScalar};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

pub type JExp = Vec<u8>;
pub type U0JElement = LinComb<JExp>;
pub type UpJElement = LinComb<(JExp, Word)>;
pub type UpJTensor = LinComb<((JExp, Word), (JExp, Word))>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PbwError {
    #[error("element is not in the positive part: {0}")]
    NotPositive(String),
    #[error("sequence {0:?} is not admissible")]
    NotAdmissible(Vec<Index>),
    #[error("element is not adapted to the sequence at position {0}")]
    NotAdapted(usize),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<Index>),
    #[error("datum is not of finite type")]
    NotFiniteType,
    #[error("norm of basis element {0} is a zero divisor")]
    SingularNorm(usize),
    #[error("decomposition along index {0} failed in weight {1:?}")]
    Decomposition(Index, Vec<i64>),
    #[error("sequence and exponents have different lengths")]
    Length,
}

/// Which side a derivation or an E_i-power sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

// ---- U⁰_J -------------------------------------------------------------------

pub fn u0j_mul(x: &U0JElement, y: &U0JElement) -> U0JElement {
    let mut out = U0JElement::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_term(add_j(a, b), ca * cb);
        }
    }
    out
}

fn add_j(a: &JExp, b: &JExp) -> JExp {
    a.iter().zip(b).map(|(x, y)| (x + y) % 2).collect()
}

/// Values of x under the 2^n characters J_a ↦ (−1)^{s·a}.
fn characters(x: &U0JElement, n: usize) -> Vec<QPiScalar> {
    (0..1usize << n)
        .map(|s| {
            let mut acc = QPiScalar::zero();
            for (a, c) in x.iter() {
                let dot: usize = a.iter().enumerate().map(|(k, &v)| ((s >> k) & 1) * v as usize).sum();
                if dot.is_multiple_of(2) {
                    acc += c;
                } else {
                    acc += &(-c);
                }
            }
            acc
        })
        .collect()
}

/// x is not a zero divisor: every character value is a unit in both components.
pub fn u0j_is_regular(x: &U0JElement, n: usize) -> bool {
    characters(x, n).iter().all(QPiScalar::is_unit)
}

pub fn u0j_inverse(x: &U0JElement, n: usize) -> Option<U0JElement> {
    let vals = characters(x, n);
    let inv: Vec<QPiScalar> = vals.iter().map(|v| v.inv().ok()).collect::<Option<_>>()?;
    let scale = QPiScalar::int(1 << n).inv().ok()?;
    let mut out = U0JElement::zero();
    for a in 0..1usize << n {
        let key: JExp = (0..n).map(|k| ((a >> k) & 1) as u8).collect();
        let mut acc = QPiScalar::zero();
        for (s, v) in inv.iter().enumerate() {
            if (s & a).count_ones() % 2 == 0 {
                acc += v;
            } else {
                acc += &(-v);
            }
        }
        out.add_term(key, &acc * &scale);
    }
    Some(out)
}

// ---- admissible sequences and PBW monomials ---------------------------------

/// A sequence with the outcome of the admissibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSequence {
    pub indices: Vec<Index>,
    pub verified: bool,
}

/// E^{(c_1)}_{i_1} T^s_{i_1}(E^{(c_2)}_{i_2}) ⋯ with s = `sign`.
#[derive(Clone, Debug)]
pub struct PbwMonomial {
    pub word: Vec<Index>,
    pub sign: i8,
    pub exponents: Vec<usize>,
    pub weight: RootVec,
    pub element: UpJElement,
}

/// One weight block of a Gram certificate.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub weight: RootVec,
    pub members: Vec<usize>,
    pub word_rank: usize,
    pub orthogonal: bool,
    pub regular: bool,
    /// ℓ with (b, b) = π^ℓ ∏ (E^{(c_s)}, E^{(c_s)}), per member.
    pub pi_powers: Vec<Option<u8>>,
}

impl GramBlock {
    pub fn holds(&self) -> bool {
        self.orthogonal && self.regular && self.members.len() == self.word_rank && self.pi_powers.iter().all(Option::is_some)
    }
}

#[derive(Clone, Debug)]
pub struct GramCertificate {
    pub blocks: Vec<GramBlock>,
    pub matrix: Vec<Vec<U0JElement>>,
}

impl GramCertificate {
    pub fn holds(&self) -> bool {
        self.blocks.iter().all(GramBlock::holds)
    }
}

type ImageKey = (Vec<Index>, i8, Index, usize);

/// Datum-bound arithmetic in U⁺_J.
pub struct PlusJ {
    braid: Braid,
    bases: Mutex<HashMap<RootVec, Arc<Vec<Word>>>>,
    images: Mutex<HashMap<ImageKey, UpJElement>>,
}

impl PlusJ {
    pub fn new(cover: Arc<Cover>) -> PlusJ {
        PlusJ::from_braid(Braid::new(cover))
    }

    pub fn from_braid(braid: Braid) -> PlusJ {
        PlusJ { braid, bases: Mutex::new(HashMap::new()), images: Mutex::new(HashMap::new()) }
    }

    pub fn braid(&self) -> &Braid {
        &self.braid
    }

    pub fn cover(&self) -> &Cover {
        self.braid.cover()
    }

    pub fn half(&self) -> &Half {
        self.cover().half()
    }

    pub fn datum(&self) -> &CartanDatum {
        self.cover().datum()
    }

    pub fn rank(&self) -> usize {
        self.datum().rank()
    }

    pub fn j_zero(&self) -> JExp {
        vec![0; self.rank()]
    }

    /// Exponent of J̃_i.
    pub fn j_tilde(&self, i: Index) -> JExp {
        let mut a = self.j_zero();
        a[i] = self.datum().pi_exp(i) as u8;
        a
    }

    pub fn one(&self) -> UpJElement {
        UpJElement::basis((self.j_zero(), Word::empty()))
    }

    pub fn from_half(&self, x: &HalfElement) -> UpJElement {
        UpJElement::from_terms(x.iter().map(|(w, c)| ((self.j_zero(), w.clone()), c.clone())))
    }

    pub fn e(&self, i: Index) -> UpJElement {
        self.from_half(&self.half().theta(i))
    }

    pub fn e_div(&self, i: Index, n: usize) -> UpJElement {
        self.from_half(&self.half().divided_power(i, n))
    }

    /// J_a · x.
    pub fn j_times(&self, a: &JExp, x: &UpJElement) -> UpJElement {
        UpJElement::from_terms(x.iter().map(|((b, w), c)| ((add_j(a, b), w.clone()), c.clone())))
    }

    /// u · x for u ∈ U⁰_J.
    pub fn u0j_times(&self, u: &U0JElement, x: &UpJElement) -> UpJElement {
        let mut out = UpJElement::zero();
        for (a, c) in u.iter() {
            out.add_scaled(&self.j_times(a, x), c);
        }
        out
    }

    /// x = Σ_a J_a x_a.
    pub fn components(&self, x: &UpJElement) -> BTreeMap<JExp, HalfElement> {
        let mut out: BTreeMap<JExp, HalfElement> = BTreeMap::new();
        for ((a, w), c) in x.iter() {
            out.entry(a.clone()).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    /// Weights occurring in x.
    pub fn weights(&self, x: &UpJElement) -> Vec<RootVec> {
        let mut ws: Vec<RootVec> = x.keys().map(|(_, w)| self.half().weight(w)).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// The weight-ν part of x.
    pub fn weight_part(&self, x: &UpJElement, nu: &RootVec) -> UpJElement {
        x.filter(|(_, w)| &self.half().weight(w) == nu)
    }

    pub fn embed(&self, x: &UpJElement) -> CoverElement {
        let k = vec![0; self.rank()];
        CoverElement::from_terms(x.iter().map(|((a, w), c)| {
            (Monomial { f: Word::empty(), t: Torus { j: a.clone(), k: k.clone() }, e: w.clone() }, c.clone())
        }))
    }

    /// The U⁺_J-part of x; fails unless the rest of x vanishes in **U**.
    pub fn project(&self, x: &CoverElement) -> Result<UpJElement, PbwError> {
        let datum = self.datum();
        let mut inside = UpJElement::zero();
        let mut rest = CoverElement::zero();
        for (m, c) in x.iter() {
            let ok = m.f.is_empty()
                && m.t.k.iter().all(|&v| v == 0)
                && m.t.j.iter().enumerate().all(|(i, &v)| v == 0 || datum.pi_exp(i) == 1);
            if ok {
                inside.add_term((m.t.j.clone(), m.e.clone()), c.clone());
            } else {
                rest.add_term(m.clone(), c.clone());
            }
        }
        if !rest.is_zero() && !self.cover().is_zero(&rest) {
            return Err(PbwError::NotPositive(format!("{} stray terms", rest.len())));
        }
        Ok(inside)
    }

    /// (J_a u)(J_b v) = π^{⟨b,|u|⟩} J_{a+b} uv.
    pub fn mul(&self, x: &UpJElement, y: &UpJElement) -> UpJElement {
        let datum = self.datum();
        let mut out = UpJElement::zero();
        for ((a, u), cx) in x.iter() {
            let wu = self.half().weight(u);
            for ((b, v), cy) in y.iter() {
                let e = datum.pair_root(&jexp_coweight(b), &wu);
                out.add_term((add_j(a, b), u.concat(v)), (cx * cy).scale_monomial(1, 0, e));
            }
        }
        out
    }

    pub fn product(&self, xs: &[UpJElement]) -> UpJElement {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn is_zero(&self, x: &UpJElement) -> bool {
        self.components(x).values().all(|h| self.half().is_zero(h))
    }

    pub fn equals(&self, x: &UpJElement, y: &UpJElement) -> bool {
        self.is_zero(&x.sub(y))
    }

    /// (J_a x, J_b y) = J_{a+b}(x, y).
    pub fn form(&self, x: &UpJElement, y: &UpJElement) -> U0JElement {
        let cy = self.components(y);
        let mut out = U0JElement::zero();
        for (a, xa) in self.components(x) {
            for (b, yb) in &cy {
                let v = self.half().form(&xa, yb);
                if !v.is_zero() {
                    out.add_term(add_j(&a, b), v);
                }
            }
        }
        out
    }

    /// _i r (left) or r_i (right), acting on the **f**-part of each J-component.
    pub fn deriv(&self, i: Index, side: Side, x: &UpJElement) -> UpJElement {
        let mut out = UpJElement::zero();
        for (a, xa) in self.components(x) {
            let d = match side {
                Side::Left => self.half().deriv_left(i, &xa),
                Side::Right => self.half().deriv_right(i, &xa),
            };
            out = out.add(&self.j_times(&a, &self.from_half(&d)));
        }
        out
    }

    /// Membership in U⁺_J[i] (left, kernel of _i r) or ^σU⁺_J[i] (right, kernel of r_i).
    pub fn in_kernel(&self, i: Index, side: Side, x: &UpJElement) -> bool {
        self.is_zero(&self.deriv(i, side, x))
    }

    /// r(J_a x) = J_a · r(x). Tensors are taken over U⁰_J and kept with the
    /// J-exponent on the left factor.
    pub fn coproduct(&self, x: &UpJElement) -> UpJTensor {
        let mut out = UpJTensor::zero();
        let zero = self.j_zero();
        for (a, xa) in self.components(x) {
            for ((u, v), c) in self.half().coproduct(&xa).iter() {
                out.add_term(((a.clone(), u.clone()), (zero.clone(), v.clone())), c.clone());
            }
        }
        out
    }

    pub fn tensor_is_zero(&self, x: &UpJTensor) -> bool {
        let mut parts: BTreeMap<JExp, crate::half::HalfTensor> = BTreeMap::new();
        for (((a, u), (b, v)), c) in x.iter() {
            parts.entry(add_j(a, b)).or_default().add_term((u.clone(), v.clone()), c.clone());
        }
        parts.values().all(|p| self.half().tensor_is_zero(p))
    }

    pub fn tensor_equals(&self, x: &UpJTensor, y: &UpJTensor) -> bool {
        self.tensor_is_zero(&x.sub(y))
    }

    /// x ⊗ y over U⁰_J.
    pub fn tensor(&self, x: &UpJElement, y: &UpJElement) -> UpJTensor {
        let mut out = UpJTensor::zero();
        let zero = self.j_zero();
        for ((a, u), c1) in x.iter() {
            for ((b, v), c2) in y.iter() {
                out.add_term(((add_j(a, b), u.clone()), (zero.clone(), v.clone())), c1 * c2);
            }
        }
        out
    }

    /// T_i^{sign}(x), which must stay in U⁺_J.
    pub fn apply_braid(&self, i: Index, sign: i8, x: &UpJElement) -> Result<UpJElement, PbwError> {
        self.project(&self.braid.apply(i, sign, &self.embed(x)))
    }

    /// Apply T^{sign}_{w_1} ⋯ T^{sign}_{w_k} with the last letter first.
    pub fn apply_braid_word(&self, word: &[Index], sign: i8, x: &UpJElement) -> Result<UpJElement, PbwError> {
        let mut v = self.embed(x);
        for &i in word.iter().rev() {
            v = self.braid.apply(i, sign, &v);
        }
        self.project(&v)
    }

    /// T^{sign}_{w_1} ⋯ T^{sign}_{w_k}(E_j^{(n)}), memoized.
    fn braided_power(&self, word: &[Index], sign: i8, j: Index, n: usize) -> Result<UpJElement, PbwError> {
        let key = (word.to_vec(), sign, j, n);
        if let Some(v) = self.images.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = self.apply_braid_word(word, sign, &self.e_div(j, n))?;
        self.images.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    pub fn e_small(&self, i: Index, j: Index, m: usize) -> UpJElement {
        self.project(&self.braid.e_small(i, j, m)).expect("e(i,j;m) is positive")
    }

    pub fn e_small_prime(&self, i: Index, j: Index, m: usize) -> UpJElement {
        self.project(&self.braid.e_small_prime(i, j, m)).expect("e'(i,j;m) is positive")
    }

    // ---- weight-space linear algebra ------------------------------------------

    /// Words forming a basis of f_ν, chosen greedily in lexicographic order.
    pub fn word_basis(&self, nu: &RootVec) -> Arc<Vec<Word>> {
        if let Some(b) = self.bases.lock().unwrap().get(nu) {
            return b.clone();
        }
        let g = self.half().gram(nu);
        let mut ech = QPiEchelon::new(g.words.len());
        let mut out = Vec::new();
        for (k, w) in g.words.iter().enumerate() {
            let col: Vec<QPiScalar> = g.matrix.iter().map(|row| row[k].clone()).collect();
            if ech.insert(&col) {
                out.push(w.clone());
            }
        }
        let out = Arc::new(out);
        self.bases.lock().unwrap().insert(nu.clone(), out.clone());
        out
    }

    /// A basis of the kernel of _i r (left) or r_i (right) on f_ν.
    pub fn kernel_basis(&self, i: Index, side: Side, nu: &RootVec) -> Vec<HalfElement> {
        let half = self.half();
        let basis = self.word_basis(nu);
        if nu.0[i] == 0 {
            return basis.iter().map(|w| half.word_element(w)).collect();
        }
        let mut lower = nu.clone();
        lower.0[i] -= 1;
        let cols: Vec<Vec<QPiScalar>> = basis
            .iter()
            .map(|w| {
                let b = half.word_element(w);
                let d = match side {
                    Side::Left => half.deriv_left(i, &b),
                    Side::Right => half.deriv_right(i, &b),
                };
                half.pairings(&lower, &d)
            })
            .collect();
        let kernel = qpi_kernel(&cols).expect("kernel ranks agree at π = ±1");
        kernel
            .into_iter()
            .map(|z| HalfElement::from_terms(basis.iter().cloned().zip(z)))
            .collect()
    }

    /// The basis E_i^{(t)} k (`e_side = Left`) or k E_i^{(t)} (`Right`) of f_ν, with k
    /// running over a basis of the kernel of the derivation on `kernel_side`.
    /// Entries are (t, k, product).
    pub fn adapted_basis(
        &self,
        i: Index,
        e_side: Side,
        kernel_side: Side,
        nu: &RootVec,
    ) -> Result<Vec<(usize, HalfElement, HalfElement)>, PbwError> {
        let half = self.half();
        let mut out = Vec::new();
        let mut ech = QPiEchelon::new(half.words_of_weight(nu).len());
        for t in 0..=nu.0[i].max(0) as usize {
            let mut mu = nu.clone();
            mu.0[i] -= t as i64;
            let d = half.divided_power(i, t);
            for k in self.kernel_basis(i, kernel_side, &mu) {
                let c = match e_side {
                    Side::Left => half.mul(&d, &k),
                    Side::Right => half.mul(&k, &d),
                };
                if !ech.insert(&half.pairings(nu, &c)) {
                    return Err(PbwError::Decomposition(i, nu.0.clone()));
                }
                out.push((t, k, c));
            }
        }
        if out.len() != self.word_basis(nu).len() {
            return Err(PbwError::Decomposition(i, nu.0.clone()));
        }
        Ok(out)
    }

    /// Coordinates of a weight-ν element x of **f** on a basis of f_ν.
    fn coordinates_on(&self, nu: &RootVec, basis: &[HalfElement], x: &HalfElement) -> Option<Vec<QPiScalar>> {
        let half = self.half();
        let mut ech = QPiEchelon::new(half.words_of_weight(nu).len());
        for b in basis {
            if !ech.insert(&half.pairings(nu, b)) {
                return None;
            }
        }
        ech.coordinates(&half.pairings(nu, x))
    }

    /// x = Σ_t E_i^{(t)} x_t (`e_side = Left`) or Σ_t x_t E_i^{(t)} (`Right`), with
    /// each x_t in the kernel of the derivation on `kernel_side`.
    pub fn split(
        &self,
        x: &UpJElement,
        i: Index,
        e_side: Side,
        kernel_side: Side,
    ) -> Result<Vec<(usize, UpJElement)>, PbwError> {
        let half = self.half();
        let datum = self.datum();
        let mut parts: BTreeMap<usize, UpJElement> = BTreeMap::new();
        for (a, xa) in self.components(x) {
            for (nu, part) in half.homogeneous_parts(&xa) {
                let basis = self.adapted_basis(i, e_side, kernel_side, &nu)?;
                let products: Vec<HalfElement> = basis.iter().map(|(_, _, c)| c.clone()).collect();
                let coords = self
                    .coordinates_on(&nu, &products, &part)
                    .ok_or_else(|| PbwError::Decomposition(i, nu.0.clone()))?;
                for ((t, k, _), c) in basis.iter().zip(coords) {
                    if c.is_zero() {
                        continue;
                    }
                    // J_a E^{(t)} = π^{t⟨a,α_i⟩} E^{(t)} J_a
                    let c = match e_side {
                        Side::Left => {
                            let e = *t as i64 * datum.pair_root(&jexp_coweight(&a), &RootVec::simple(self.rank(), i));
                            c.scale_monomial(1, 0, e)
                        }
                        Side::Right => c,
                    };
                    let piece = self.j_times(&a, &self.from_half(k)).scale(&c);
                    let slot = parts.entry(*t).or_default();
                    *slot = slot.add(&piece);
                }
            }
        }
        Ok(parts.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    /// The t = 0 part of r(x) along U = ⊕_t U[i] E_i^t in the right factor
    /// (`factor = Right`) or along U = ⊕_t E_i^t σU[i] in the left factor (`Left`),
    /// as pairs (left, right) whose kernel-side member is a basis element.
    pub fn truncated_coproduct(
        &self,
        x: &UpJElement,
        i: Index,
        factor: Side,
    ) -> Result<Vec<(UpJElement, UpJElement)>, PbwError> {
        let half = self.half();
        let (e_side, kernel_side) = match factor {
            Side::Right => (Side::Right, Side::Left),
            Side::Left => (Side::Left, Side::Right),
        };
        // group by the J-exponent and weight of the truncated factor
        let mut groups: BTreeMap<(JExp, RootVec), Vec<(Word, (JExp, Word), QPiScalar)>> = BTreeMap::new();
        for ((l, r), c) in self.coproduct(x).iter() {
            let (cut, other) = match factor {
                Side::Right => (r, l),
                Side::Left => (l, r),
            };
            groups
                .entry((cut.0.clone(), half.weight(&cut.1)))
                .or_default()
                .push((cut.1.clone(), other.clone(), c.clone()));
        }
        let mut out = Vec::new();
        for ((a, nu), terms) in groups {
            let basis = self.adapted_basis(i, e_side, kernel_side, &nu)?;
            let products: Vec<HalfElement> = basis.iter().map(|(_, _, c)| c.clone()).collect();
            let mut others = vec![UpJElement::zero(); basis.len()];
            for (w, other, c) in terms {
                let coords = self
                    .coordinates_on(&nu, &products, &half.word_element(&w))
                    .ok_or_else(|| PbwError::Decomposition(i, nu.0.clone()))?;
                for (k, v) in coords.iter().enumerate() {
                    if !v.is_zero() && basis[k].0 == 0 {
                        others[k].add_term(other.clone(), &c * v);
                    }
                }
            }
            for (k, y) in others.into_iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let b = self.j_times(&a, &self.from_half(&basis[k].1));
                out.push(match factor {
                    Side::Right => (y, b),
                    Side::Left => (b, y),
                });
            }
        }
        Ok(out)
    }

    /// (T_i^{-1} ⊗ T_i^{-1}) applied to the right-truncated r(x) equals the
    /// left-truncated r(T_i^{-1} x), for x in U⁺_J[i].
    pub fn truncated_coproduct_intertwines(&self, x: &UpJElement, i: Index) -> Result<bool, PbwError> {
        let mut lhs = UpJTensor::zero();
        for (y, b) in self.truncated_coproduct(x, i, Side::Right)? {
            lhs = lhs.add(&self.tensor(&self.apply_braid(i, -1, &y)?, &self.apply_braid(i, -1, &b)?));
        }
        let mut rhs = UpJTensor::zero();
        for (b, y) in self.truncated_coproduct(&self.apply_braid(i, -1, x)?, i, Side::Left)? {
            rhs = rhs.add(&self.tensor(&b, &y));
        }
        Ok(self.tensor_equals(&lhs, &rhs))
    }

    /// The decomposition along E_i on `side`, with kernels of the derivation on
    /// the same side.
    pub fn i_decompose(&self, x: &UpJElement, i: Index, side: Side) -> Result<Vec<(usize, UpJElement)>, PbwError> {
        self.split(x, i, side, side)
    }

    /// Σ_t E_i^{(t)} x_t or Σ_t x_t E_i^{(t)}.
    pub fn recombine(&self, parts: &[(usize, UpJElement)], i: Index, e_side: Side) -> UpJElement {
        let mut out = UpJElement::zero();
        for (t, xt) in parts {
            let d = self.e_div(i, *t);
            let v = match e_side {
                Side::Left => self.mul(&d, xt),
                Side::Right => self.mul(xt, &d),
            };
            out = out.add(&v);
        }
        out
    }

    // ---- checks on e(i, j; m) -------------------------------------------------

    /// ∏_{h=0}^{m−t−1} (1 − π_i^{h+1−m} q_i^{2h+2−2m−2a_ij}).
    fn coproduct_factor(&self, i: Index, j: Index, m: i64, t: i64) -> QPiScalar {
        let datum = self.datum();
        let aij = datum.a(i, j);
        let mut acc = QPiScalar::one();
        for h in 0..m - t {
            acc = &acc * &(&QPiScalar::one() - &datum.monomial_i(i, 1, 2 * h + 2 - 2 * m - 2 * aij, h + 1 - m));
        }
        acc
    }

    /// r(e(i,j;m)) = 1⊗e(m) + Σ_t (π_iq_i)^{−t(m−t)} P(t) e(t)⊗E_i^{(m−t)}, or for
    /// `primed` r(e'(m)) = e'(m)⊗1 + Σ_t (π_iq_i)^{−t(m−t)} P(t) E_i^{(m−t)}⊗e'(t).
    pub fn coproduct_e_small_check(&self, i: Index, j: Index, m: usize, primed: bool) -> bool {
        let datum = self.datum();
        let mi = m as i64;
        let e = |t: usize| if primed { self.e_small_prime(i, j, t) } else { self.e_small(i, j, t) };
        let lhs = self.coproduct(&e(m));
        let mut rhs = if primed { self.tensor(&e(m), &self.one()) } else { self.tensor(&self.one(), &e(m)) };
        for t in 0..=m {
            let ti = t as i64;
            let c = &datum.monomial_i(i, 1, -ti * (mi - ti), ti * (mi - ti)) * &self.coproduct_factor(i, j, mi, ti);
            let d = self.e_div(i, m - t);
            let term = if primed { self.tensor(&d, &e(t)) } else { self.tensor(&e(t), &d) };
            rhs.add_scaled(&term, &c);
        }
        self.tensor_equals(&lhs, &rhs)
    }

    /// π_i^{C(m,2)}(e(m), e(m)) = π_i^{C(m′,2)}(e′(m′), e′(m′)) with m + m′ = −a_ij.
    pub fn norm_symmetry(&self, i: Index, j: Index, m: usize) -> bool {
        let datum = self.datum();
        let mp = (-datum.a(i, j)) as usize - m;
        let lhs = self.form(&self.e_small(i, j, m), &self.e_small(i, j, m));
        let rhs = self.form(&self.e_small_prime(i, j, mp), &self.e_small_prime(i, j, mp));
        let pl = datum.monomial_i(i, 1, 0, choose2(m as i64));
        let pr = datum.monomial_i(i, 1, 0, choose2(mp as i64));
        lhs.scale(&pl) == rhs.scale(&pr)
    }

    /// T_i(e′(i,j;m)) and T_i^{-1}(e(i,j;m)) against
    /// π_i^{C(a_ij,2) + p(j)(−a_ij−m)} J̃_i^{p(j) − a_ij − m} e(i,j;−a_ij−m) (resp. e′).
    pub fn braid_on_e_small(&self, i: Index, j: Index, m: usize, sign: i8) -> Result<bool, PbwError> {
        let datum = self.datum();
        let aij = datum.a(i, j);
        let mi = m as i64;
        let pj = datum.parity(j) as i64;
        let target_m = (-aij - mi) as usize;
        let (src, dst) = if sign > 0 {
            (self.e_small_prime(i, j, m), self.e_small(i, j, target_m))
        } else {
            (self.e_small(i, j, m), self.e_small_prime(i, j, target_m))
        };
        let c = datum.monomial_i(i, 1, 0, choose2(aij) + pj * (-aij - mi));
        let jt = if (pj - aij - mi).rem_euclid(2) == 1 { self.j_tilde(i) } else { self.j_zero() };
        let expected = self.j_times(&jt, &dst).scale(&c);
        let got = self.apply_braid(i, sign, &src)?;
        Ok(self.equals(&got, &expected))
    }

    /// π^{C(ν,2)} with C(ν,2) = Σ C(ν_k,2) for the π-exponents of the indices.
    pub fn pi_binom(&self, nu: &RootVec) -> QPiScalar {
        let datum = self.datum();
        let e: i64 = nu.0.iter().enumerate().map(|(k, &v)| choose2(v) * datum.pi_exp(k)).sum();
        QPiScalar::pi_pow(e)
    }

    /// π^{C(|T_i^{-1}x|,2)}(T_i^{-1}x, T_i^{-1}y) = π^{C(|x|,2)}(x, y) on a basis of
    /// U⁺_J[i] in weight ν.
    pub fn twisted_invariance(&self, i: Index, nu: &RootVec) -> Result<bool, PbwError> {
        let basis: Vec<UpJElement> = self.kernel_basis(i, Side::Left, nu).iter().map(|k| self.from_half(k)).collect();
        let images: Vec<UpJElement> = basis.iter().map(|x| self.apply_braid(i, -1, x)).collect::<Result<_, _>>()?;
        let swept = self.datum().reflect_root(i, nu);
        let (before, after) = (self.pi_binom(nu), self.pi_binom(&swept));
        for (x, tx) in basis.iter().zip(&images) {
            for (y, ty) in basis.iter().zip(&images) {
                if self.form(tx, ty).scale(&after) != self.form(x, y).scale(&before) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    // ---- admissible sequences ---------------------------------------------

    pub fn check_admissible(&self, h: &[Index]) -> AdmissibleSequence {
        let n = h.len();
        let mut ok = true;
        'outer: for a in 0..n {
            for b in a..n {
                if self.braided_power(&h[a..b], 1, h[b], 1).is_err() {
                    ok = false;
                    break 'outer;
                }
                let inv: Vec<Index> = h[a + 1..=b].iter().rev().copied().collect();
                if self.braided_power(&inv, -1, h[a], 1).is_err() {
                    ok = false;
                    break 'outer;
                }
            }
        }
        AdmissibleSequence { indices: h.to_vec(), verified: ok }
    }

    /// Conditions (c), (d): T_{i_a}⋯T_{i_p}(x) and T_{i_b}^{-1}⋯T_{i_{p+1}}^{-1}(x)
    /// stay in U⁺_J. `p` counts the leading letters, 0 ≤ p ≤ n.
    pub fn is_adapted(&self, h: &[Index], p: usize, x: &UpJElement) -> bool {
        for a in 0..p {
            if self.apply_braid_word(&h[a..p], 1, x).is_err() {
                return false;
            }
        }
        for b in p..h.len() {
            let inv: Vec<Index> = h[p..=b].iter().rev().copied().collect();
            if self.apply_braid_word(&inv, -1, x).is_err() {
                return false;
            }
        }
        true
    }

    /// L(h, c, p, x) = E^{(c_{p+1})}_{i_{p+1}} ⋯ [T_{i_{p+1}}⋯T_{i_{n−1}}(E^{(c_n)}_{i_n})] · x ·
    /// [T_{i_p}^{-1}⋯T_{i_2}^{-1}(E^{(c_1)}_{i_1})] ⋯ E^{(c_p)}_{i_p}.
    pub fn l_element(&self, h: &[Index], c: &[usize], p: usize, x: &UpJElement) -> Result<UpJElement, PbwError> {
        let n = h.len();
        if c.len() != n || p > n {
            return Err(PbwError::Length);
        }
        if !self.check_admissible(h).verified {
            return Err(PbwError::NotAdmissible(h.to_vec()));
        }
        if !self.is_adapted(h, p, x) {
            return Err(PbwError::NotAdapted(p));
        }
        let mut factors = Vec::with_capacity(n + 1);
        for k in p..n {
            factors.push(self.braided_power(&h[p..k], 1, h[k], c[k])?);
        }
        factors.push(x.clone());
        for k in 0..p {
            let inv: Vec<Index> = h[k + 1..p].iter().rev().copied().collect();
            factors.push(self.braided_power(&inv, -1, h[k], c[k])?);
        }
        Ok(self.product(&factors))
    }

    // ---- PBW bases ----------------------------------------------------------

    /// For `sign = 1` all E^{(c_1)}_{i_1} T_{i_1}(E^{(c_2)}_{i_2}) ⋯ T_{i_1}⋯T_{i_{n−1}}(E^{(c_n)}_{i_n}),
    /// for `sign = -1` all T^{-1}_{i_n}⋯T^{-1}_{i_2}(E^{(c_1)}_{i_1}) ⋯ T^{-1}_{i_n}(E^{(c_{n−1})}_{i_{n−1}}) E^{(c_n)}_{i_n},
    /// whose weight has height at most `degree`, sorted by weight then exponents.
    pub fn pbw_basis(&self, word: &[Index], sign: i8, degree: usize) -> Result<Vec<PbwMonomial>, PbwError> {
        self.pbw_monomials(word, sign, degree, None)
    }

    /// The members of the PBW basis of weight ν.
    pub fn pbw_basis_of_weight(&self, word: &[Index], sign: i8, nu: &RootVec) -> Result<Vec<PbwMonomial>, PbwError> {
        self.pbw_monomials(word, sign, nu.height().max(0) as usize, Some(nu))
    }

    fn pbw_monomials(
        &self,
        word: &[Index],
        sign: i8,
        degree: usize,
        only: Option<&RootVec>,
    ) -> Result<Vec<PbwMonomial>, PbwError> {
        let datum = self.datum();
        if !datum.is_finite_type() {
            return Err(PbwError::NotFiniteType);
        }
        if !datum.word_is_reduced(word) {
            return Err(PbwError::NotReduced(word.to_vec()));
        }
        let n = self.rank();
        let prefixes: Vec<Vec<Index>> = (0..word.len())
            .map(|s| if sign > 0 { word[..s].to_vec() } else { word[s + 1..].iter().rev().copied().collect() })
            .collect();
        let roots: Vec<RootVec> =
            (0..word.len()).map(|s| datum.apply_word_root(&prefixes[s], &RootVec::simple(n, word[s]))).collect();
        let heights: Vec<usize> = roots.iter().map(|r| r.height() as usize).collect();
        let mut exps = Vec::new();
        let mut cur = vec![0usize; word.len()];
        enumerate_exponents(&heights, degree, 0, &mut cur, &mut exps);
        let mut out = Vec::new();
        for c in exps {
            let weight = c.iter().zip(&roots).fold(RootVec::zero(n), |acc, (&cs, r)| acc.add(&r.scale(cs as i64)));
            if only.is_some_and(|nu| nu != &weight) {
                continue;
            }
            let mut factors = Vec::new();
            for (s, &cs) in c.iter().enumerate() {
                if cs > 0 {
                    factors.push(self.braided_power(&prefixes[s], sign, word[s], cs)?);
                }
            }
            out.push(PbwMonomial {
                word: word.to_vec(),
                sign,
                exponents: c,
                weight,
                element: self.product(&factors),
            });
        }
        out.sort_by(|a, b| (a.weight.height(), &a.weight, &a.exponents).cmp(&(b.weight.height(), &b.weight, &b.exponents)));
        Ok(out)
    }

    /// ∏_s (E^{(c_s)}_{i_s}, E^{(c_s)}_{i_s}).
    pub fn norm_product(&self, m: &PbwMonomial) -> QPiScalar {
        let mut acc = QPiScalar::one();
        for (s, &cs) in m.exponents.iter().enumerate() {
            let d = self.half().divided_power(m.word[s], cs);
            acc = &acc * &self.half().form(&d, &d);
        }
        acc
    }

    /// Pairwise forms, orthogonality, regularity of the norms and their agreement
    /// with the product of divided-power norms up to a power of π.
    pub fn gram_certificate(&self, basis: &[PbwMonomial]) -> GramCertificate {
        let n = self.rank();
        let matrix: Vec<Vec<U0JElement>> = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| if a.weight == b.weight { self.form(&a.element, &b.element) } else { U0JElement::zero() })
                    .collect()
            })
            .collect();
        let mut groups: BTreeMap<RootVec, Vec<usize>> = BTreeMap::new();
        for (k, m) in basis.iter().enumerate() {
            groups.entry(m.weight.clone()).or_default().push(k);
        }
        let blocks = groups
            .into_iter()
            .map(|(weight, members)| {
                let orthogonal =
                    members.iter().all(|&a| members.iter().all(|&b| a == b || matrix[a][b].is_zero()));
                let regular = members.iter().all(|&a| u0j_is_regular(&matrix[a][a], n));
                let pi_powers = members
                    .iter()
                    .map(|&a| {
                        let prod = U0JElement::term(self.j_zero(), self.norm_product(&basis[a]));
                        (0..2u8).find(|&l| matrix[a][a] == prod.scale(&QPiScalar::pi_pow(l as i64)))
                    })
                    .collect();
                let word_rank = self.word_basis(&weight).len();
                GramBlock { weight, members, word_rank, orthogonal, regular, pi_powers }
            })
            .collect();
        GramCertificate { blocks, matrix }
    }

    /// Coordinates (x, b)(b, b)^{-1} of x on each basis element b of a weight
    /// occurring in x. Zero coordinates are dropped.
    pub fn pbw_coordinates(&self, x: &UpJElement, basis: &[PbwMonomial]) -> Result<Vec<(usize, U0JElement)>, PbwError> {
        let n = self.rank();
        let ws = self.weights(x);
        let mut out = Vec::new();
        for (k, b) in basis.iter().enumerate() {
            if !ws.contains(&b.weight) {
                continue;
            }
            let norm = self.form(&b.element, &b.element);
            let inv = u0j_inverse(&norm, n).ok_or(PbwError::SingularNorm(k))?;
            let c = u0j_mul(&self.form(x, &b.element), &inv);
            if !c.is_zero() {
                out.push((k, c));
            }
        }
        Ok(out)
    }

    pub fn reconstruct(&self, coords: &[(usize, U0JElement)], basis: &[PbwMonomial]) -> UpJElement {
        let mut out = UpJElement::zero();
        for (k, c) in coords {
            out = out.add(&self.u0j_times(c, &basis[*k].element));
        }
        out
    }

    /// T_i^{sign}(E_j^{(n)}) (`is_e`) or T_i^{sign}(F_j^{(n)}) has 𝒜-integral
    /// coordinates on the PBW basis of the longest word. Each torus K-component
    /// must be purely E or purely F; an F-part J_a-twisted word F_w is read as
    /// J_a·θ_w in **f**.
    pub fn integral_image(&self, i: Index, sign: i8, j: Index, n: usize, is_e: bool) -> Result<bool, PbwError> {
        let cover = self.cover();
        let datum = self.datum();
        let g = if is_e { cover.e_div(j, n) } else { cover.f_div(j, n) };
        let img = self.braid.apply(i, sign, &g);
        let word = datum.longest_word().map_err(|_| PbwError::NotFiniteType)?;
        let mut groups: BTreeMap<Vec<i64>, (UpJElement, bool, bool)> = BTreeMap::new();
        for (m, c) in img.iter() {
            let entry = groups.entry(m.t.k.clone()).or_insert((UpJElement::zero(), false, false));
            if m.f.is_empty() {
                entry.0.add_term((m.t.j.clone(), m.e.clone()), c.clone());
                entry.1 = true;
            } else if m.e.is_empty() {
                // F_w J_a = π^{⟨a,|w|⟩} J_a F_w
                let e = datum.pair_root(&jexp_coweight(&m.t.j), &self.half().weight(&m.f));
                entry.0.add_term((m.t.j.clone(), m.f.clone()), c.scale_monomial(1, 0, e));
                entry.2 = true;
            } else {
                return Ok(false);
            }
        }
        for (x, has_e, has_f) in groups.values() {
            if *has_e && *has_f {
                return Ok(false);
            }
            for nu in self.weights(x) {
                let basis = self.pbw_basis_of_weight(&word, 1, &nu)?;
                let coords = self.pbw_coordinates(x, &basis)?;
                if !coords.iter().all(|(_, c)| c.is_integral()) {
                    return Ok(false);
                }
                if !self.equals(&self.reconstruct(&coords, &basis), &self.weight_part(x, &nu)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn jexp_coweight(a: &JExp) -> Coweight {
    Coweight(a.iter().map(|&v| v as i64).collect())
}

fn enumerate_exponents(heights: &[usize], budget: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos == heights.len() {
        out.push(cur.clone());
        return;
    }
    let mut c = 0;
    while c * heights[pos] <= budget {
        cur[pos] = c;
        enumerate_exponents(heights, budget - c * heights[pos], pos + 1, cur, out);
        c += 1;
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_j(d: CartanDatum) -> PlusJ {
        PlusJ::new(Arc::new(Cover::new(Arc::new(d))))
    }

    #[test]
    fn multiplication_matches_cover() {
        let p = plus_j(CartanDatum::b2_super());
        let x = p.j_times(&p.j_tilde(0), &p.e(1));
        let y = p.j_times(&p.j_tilde(0), &p.mul(&p.e(0), &p.e(1)));
        let lhs = p.embed(&p.mul(&x, &y));
        let rhs = p.cover().mul(&p.embed(&x), &p.embed(&y));
        assert!(p.cover().equals(&lhs, &rhs));
    }

    #[test]
    fn form_on_generators() {
        let p = plus_j(CartanDatum::b2_super());
        let v = p.form(&p.e(0), &p.e(0));
        assert_eq!(v, U0JElement::term(p.j_zero(), p.half().norm(0).clone()));
        let jx = p.j_times(&p.j_tilde(0), &p.e(1));
        assert_eq!(p.form(&jx, &p.e(1)), U0JElement::term(p.j_tilde(0), p.half().norm(1).clone()));
    }

    #[test]
    fn u0j_inverse_roundtrip() {
        let x = U0JElement::from_terms([(vec![0, 0], QPiScalar::int(2)), (vec![1, 0], QPiScalar::q())]);
        let y = u0j_inverse(&x, 2).unwrap();
        assert_eq!(u0j_mul(&x, &y), U0JElement::basis(vec![0, 0]));
        let z = U0JElement::from_terms([(vec![0, 0], QPiScalar::one()), (vec![1, 0], QPiScalar::one())]);
        assert!(!u0j_is_regular(&z, 2));
    }

    #[test]
    fn exponents_within_budget() {
        let mut out = Vec::new();
        enumerate_exponents(&[1, 2], 2, 0, &mut vec![0, 0], &mut out);
        assert_eq!(out, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![2, 0]]);
    }
}
