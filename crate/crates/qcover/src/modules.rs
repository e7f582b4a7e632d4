//! Highest weight modules: Verma modules, the simple integrable modules V(λ) of
//! finite type, their tensor products, and the operators T_i', T_i'', L_i', L_i''.
//!
//! V(λ) is built top-down by weight. A vector below the top is zero exactly when
//! every E_i kills it, so candidates F_k b are compared through their E-images,
//! which the commutator relation gives from already-built weight spaces.

use crate::cover::{Cover, CoverElement, Monomial, Torus};
use crate::half::{Half, HalfElement, Word};
use crate::lincomb::LinComb;
use crate::linalg::{qpi_kernel, QPiEchelon};
use crate::root::{CartanDatum, Index, RootVec, Weight};
use crate::scalar::{choose2, qbinom_at, QPiScalar};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("highest weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("highest weight has {found} coordinates, the datum has rank {rank}")]
    WeightLength { found: usize, rank: usize },
    #[error("simple modules are only built in finite type")]
    NotFiniteType,
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<Index>),
    #[error("indices {0} and {1} generate an infinite dihedral group")]
    InfiniteOrder(Index, Index),
    #[error("weight space at depth {0:?}: no F-word basis is independent at both π = 1 and π = −1")]
    BasisSelection(Vec<i64>),
    #[error("weight space at depth {depth:?} has dimension {found}, the classical character gives {expected}")]
    CharacterMismatch { depth: Vec<i64>, found: usize, expected: usize },
}

/// π^{⟨j,μ⟩} q^{⟨k,μ⟩}: the scalar by which J_j K_k acts on weight μ.
pub fn torus_scalar(t: &Torus, mu: &Weight) -> QPiScalar {
    let k: i64 = t.k.iter().zip(&mu.0).map(|(a, b)| a * b).sum();
    let j: i64 = t.j.iter().zip(&mu.0).map(|(&a, b)| a as i64 * b).sum();
    QPiScalar::monomial(1, k, j)
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A weight module given by the actions of E_i and F_i on a weight basis.
/// Everything else (divided powers, U-action, braid operators) is derived.
pub trait Representation {
    type Key: Ord + Clone;

    fn cover(&self) -> &Cover;
    fn weight_of(&self, k: &Self::Key) -> Weight;
    fn parity_of(&self, k: &Self::Key) -> u8;
    fn e_on_basis(&self, i: Index, k: &Self::Key) -> LinComb<Self::Key>;
    fn f_on_basis(&self, i: Index, k: &Self::Key) -> LinComb<Self::Key>;

    /// ⟨α_i^∨, weight⟩.
    fn i_weight(&self, i: Index, k: &Self::Key) -> i64 {
        self.weight_of(k).0[i]
    }

    fn act_e(&self, i: Index, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let mut out = LinComb::zero();
        for (k, c) in v.iter() {
            out.add_scaled(&self.e_on_basis(i, k), c);
        }
        out
    }

    fn act_f(&self, i: Index, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let mut out = LinComb::zero();
        for (k, c) in v.iter() {
            out.add_scaled(&self.f_on_basis(i, k), c);
        }
        out
    }

    fn act_e_div(&self, i: Index, n: usize, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let mut x = v.clone();
        for _ in 0..n {
            if x.is_zero() {
                return x;
            }
            x = self.act_e(i, &x);
        }
        x.scale(&self.cover().datum().qfact(i, n as i64).inv().unwrap())
    }

    fn act_f_div(&self, i: Index, n: usize, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let mut x = v.clone();
        for _ in 0..n {
            if x.is_zero() {
                return x;
            }
            x = self.act_f(i, &x);
        }
        x.scale(&self.cover().datum().qfact(i, n as i64).inv().unwrap())
    }

    fn act_torus(&self, t: &Torus, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        LinComb::from_terms(v.iter().map(|(k, c)| (k.clone(), c * &torus_scalar(t, &self.weight_of(k)))))
    }

    fn act_monomial(&self, m: &Monomial, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let mut x = v.clone();
        for &l in m.e.0.iter().rev() {
            x = self.act_e(l as Index, &x);
        }
        if !m.t.is_identity() {
            x = self.act_torus(&m.t, &x);
        }
        for &l in m.f.0.iter().rev() {
            x = self.act_f(l as Index, &x);
        }
        x
    }

    fn act(&self, u: &CoverElement, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let mut out = LinComb::zero();
        for (m, c) in u.iter() {
            out.add_scaled(&self.act_monomial(m, v), c);
        }
        out
    }

    /// Split a vector by ⟨α_i^∨, weight⟩.
    fn by_i_weight(&self, i: Index, v: &LinComb<Self::Key>) -> BTreeMap<i64, LinComb<Self::Key>> {
        let mut out: BTreeMap<i64, LinComb<Self::Key>> = BTreeMap::new();
        for (k, c) in v.iter() {
            out.entry(self.i_weight(i, k)).or_default().add_term(k.clone(), c.clone());
        }
        out
    }

    /// T_i' (`sign = 1`) or T_i'' (`sign = −1`). On z of i-weight t:
    /// T_i'(z) = Σ_{a−b+c=t} (−1)^b π_i^c q_i^{−ac+b} J̃_i^c F^{(a)}E^{(b)}F^{(c)} z,
    /// T_i''(z) = Σ_{−a+b−c=t} (−1)^b π_i^{ac+c+C(t,2)} q_i^{ac−b} J̃_i^a E^{(a)}F^{(b)}E^{(c)} z.
    fn braid(&self, i: Index, sign_: i8, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        let datum = self.cover().datum();
        let mut out = LinComb::zero();
        let pos = sign_ > 0;
        for (t, z) in self.by_i_weight(i, v) {
            // outer = F^{(c)}z (resp. E^{(c)}z), inner = E^{(b)}outer (resp. F^{(b)}outer)
            let mut outer = z;
            let mut c = 0i64;
            while !outer.is_zero() {
                let mut inner = outer.clone();
                let mut b = 0i64;
                while !inner.is_zero() {
                    let a = if pos { t + b - c } else { b - c - t };
                    if a >= 0 {
                        // J̃_i^x on the final weight −t is π_i^{xt}.
                        let coef = if pos {
                            datum.monomial_i(i, sign(b), -a * c + b, c + c * t)
                        } else {
                            datum.monomial_i(i, sign(b), a * c - b, a * c + c + choose2(t) + a * t)
                        };
                        let x = if pos {
                            self.act_f_div(i, a as usize, &inner)
                        } else {
                            self.act_e_div(i, a as usize, &inner)
                        };
                        out.add_scaled(&x, &coef);
                    }
                    b += 1;
                    let next = if pos { self.act_e(i, &inner) } else { self.act_f(i, &inner) };
                    inner = next.scale(&datum.qint(i, b).inv().unwrap());
                }
                c += 1;
                let next = if pos { self.act_f(i, &outer) } else { self.act_e(i, &outer) };
                outer = next.scale(&datum.qint(i, c).inv().unwrap());
            }
        }
        out
    }

    /// T_{h_1} ⋯ T_{h_k} (or with inverses), the rightmost operator first.
    fn braid_word(&self, word: &[Index], sign_: i8, v: &LinComb<Self::Key>) -> LinComb<Self::Key> {
        word.iter().rev().fold(v.clone(), |x, &i| self.braid(i, sign_, &x))
    }
}

// ---- Verma modules ----------------------------------------------------------

/// M(λ), identified with **f** through x ↦ x^- η_λ.
pub struct Verma {
    cover: Arc<Cover>,
    lambda: Weight,
}

impl Verma {
    pub fn new(cover: Arc<Cover>, lambda: Weight) -> Verma {
        Verma { cover, lambda }
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.lambda
    }

    /// Weight of F_w η_λ.
    pub fn word_weight(&self, w: &Word) -> Weight {
        let nu = self.cover.half().weight(w);
        self.lambda.sub(&self.cover.datum().root_to_weight(&nu))
    }

    /// u · v. Terms of E_e F_w with a surviving E-part kill η_λ.
    pub fn act(&self, u: &CoverElement, v: &HalfElement) -> HalfElement {
        let mut out = HalfElement::zero();
        for (m, c) in u.iter() {
            for (w, cw) in v.iter() {
                let st = self.cover.straighten_ef(&m.e, w);
                for (m2, c2) in st.iter() {
                    if !m2.e.is_empty() {
                        continue;
                    }
                    let s1 = torus_scalar(&m2.t, &self.lambda);
                    let s2 = torus_scalar(&m.t, &self.word_weight(&m2.f));
                    let coef = &(&(c * cw) * c2) * &(&s1 * &s2);
                    out.add_term(m.f.concat(&m2.f), coef);
                }
            }
        }
        out
    }

    /// The contravariant pairing ⟨F_xη, F_yη⟩: the η-coefficient of E_{x reversed} F_y η,
    /// i.e. the U⁰-part of the straightened product evaluated at λ.
    pub fn shapovalov(&self, x: &HalfElement, y: &HalfElement) -> QPiScalar {
        let mut out = QPiScalar::zero();
        for (wx, cx) in x.iter() {
            for (wy, cy) in y.iter() {
                if self.cover.half().weight(wx) != self.cover.half().weight(wy) {
                    continue;
                }
                let st = self.cover.straighten_ef(&wx.reversed(), wy);
                for (m, c) in st.iter() {
                    if m.f.is_empty() && m.e.is_empty() {
                        out += &(&(cx * cy) * &(c * &torus_scalar(&m.t, &self.lambda)));
                    }
                }
            }
        }
        out
    }

    /// Bar on M(λ): F-words are fixed, coefficients are barred.
    pub fn bar(&self, v: &HalfElement) -> HalfElement {
        v.map_coeffs(QPiScalar::bar)
    }
}

// ---- simple modules ----------------------------------------------------------

/// Basis key (weight space, position) of a simple module.
pub type ModuleKey = (usize, usize);
pub type ModuleVector = LinComb<ModuleKey>;

/// One weight space of V(λ): basis vectors F_w η_λ for the stored words.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub weight: Weight,
    /// λ − weight in simple-root coordinates.
    pub depth: RootVec,
    pub parity: u8,
    pub words: Vec<Word>,
    e_img: Vec<Vec<ModuleVector>>,
    f_img: Vec<Vec<ModuleVector>>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.words.len()
    }
}

/// The simple integrable module V(λ) of a finite-type datum.
pub struct SimpleModule {
    cover: Arc<Cover>,
    highest: Weight,
    spaces: Vec<WeightSpace>,
    by_weight: HashMap<Weight, usize>,
}

impl SimpleModule {
    pub fn new(cover: Arc<Cover>, lambda: Weight) -> Result<SimpleModule, ModuleError> {
        let datum = cover.datum();
        let n = datum.rank();
        if lambda.0.len() != n {
            return Err(ModuleError::WeightLength { found: lambda.0.len(), rank: n });
        }
        if !datum.is_dominant(&lambda) {
            return Err(ModuleError::NotDominant(lambda.0.clone()));
        }
        if !datum.is_finite_type() {
            return Err(ModuleError::NotFiniteType);
        }
        let expected = classical_multiplicities(datum, &lambda)?;
        let zero_imgs = |dim: usize| vec![vec![ModuleVector::zero(); dim]; n];
        let mut spaces = vec![WeightSpace {
            weight: lambda.clone(),
            depth: RootVec::zero(n),
            parity: 0,
            words: vec![Word::empty()],
            e_img: zero_imgs(1),
            f_img: zero_imgs(1),
        }];
        let mut by_depth: HashMap<RootVec, usize> = HashMap::new();
        by_depth.insert(RootVec::zero(n), 0);
        let mut level = vec![0usize];
        while !level.is_empty() {
            let mut depths = BTreeSet::new();
            for &s in &level {
                for k in 0..n {
                    depths.insert(spaces[s].depth.add(&RootVec::simple(n, k)));
                }
            }
            let mut next = Vec::new();
            for nu in depths {
                let weight = lambda.sub(&datum.root_to_weight(&nu));
                let mut cands = Vec::new();
                for k in 0..n {
                    if let Some(&src) = by_depth.get(&nu.sub(&RootVec::simple(n, k))) {
                        for b in 0..spaces[src].dim() {
                            cands.push((k, src, b));
                        }
                    }
                }
                let mut targets = Vec::new();
                let mut total = 0;
                for i in 0..n {
                    match by_depth.get(&nu.sub(&RootVec::simple(n, i))) {
                        Some(&t) => {
                            targets.push(Some((t, total)));
                            total += spaces[t].dim();
                        }
                        None => targets.push(None),
                    }
                }
                let sigs: Vec<Vec<QPiScalar>> = cands
                    .iter()
                    .map(|&(k, src, b)| e_signature(datum, &spaces, &targets, total, k, src, b))
                    .collect();
                let mut ech = QPiEchelon::new(total);
                let chosen: Vec<usize> = (0..sigs.len()).filter(|&c| ech.insert(&sigs[c])).collect();
                if chosen.is_empty() {
                    continue;
                }
                let idx = spaces.len();
                let words = chosen
                    .iter()
                    .map(|&c| {
                        let (k, src, b) = cands[c];
                        Word::letter(k).concat(&spaces[src].words[b])
                    })
                    .collect();
                let mut e_img = zero_imgs(chosen.len());
                for (beta, &c) in chosen.iter().enumerate() {
                    for (i, t) in targets.iter().enumerate() {
                        if let Some((t, off)) = *t {
                            e_img[i][beta] = LinComb::from_terms(
                                (0..spaces[t].dim()).map(|r| ((t, r), sigs[c][off + r].clone())),
                            );
                        }
                    }
                }
                let mut f_updates = Vec::new();
                for (c, &(k, src, b)) in cands.iter().enumerate() {
                    let coords =
                        ech.coordinates(&sigs[c]).ok_or_else(|| ModuleError::BasisSelection(nu.0.clone()))?;
                    let v = LinComb::from_terms(coords.into_iter().enumerate().map(|(beta, x)| ((idx, beta), x)));
                    f_updates.push((src, k, b, v));
                }
                for (src, k, b, v) in f_updates {
                    spaces[src].f_img[k][b] = v;
                }
                spaces.push(WeightSpace {
                    weight,
                    depth: nu.clone(),
                    parity: datum.root_parity(&nu),
                    words,
                    f_img: zero_imgs(chosen.len()),
                    e_img,
                });
                by_depth.insert(nu, idx);
                next.push(idx);
            }
            level = next;
        }
        for s in &spaces {
            let e = expected.get(&s.depth).copied().unwrap_or(0);
            if e != s.dim() {
                return Err(ModuleError::CharacterMismatch { depth: s.depth.0.clone(), found: s.dim(), expected: e });
            }
        }
        if expected.len() != spaces.len() {
            let missing = expected.keys().find(|d| !by_depth.contains_key(*d)).unwrap();
            return Err(ModuleError::CharacterMismatch {
                depth: missing.0.clone(),
                found: 0,
                expected: expected[missing],
            });
        }
        let by_weight = spaces.iter().enumerate().map(|(i, s)| (s.weight.clone(), i)).collect();
        Ok(SimpleModule { cover, highest: lambda, spaces, by_weight })
    }

    pub fn cover_arc(&self) -> Arc<Cover> {
        self.cover.clone()
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest
    }

    pub fn spaces(&self) -> &[WeightSpace] {
        &self.spaces
    }

    pub fn space(&self, s: usize) -> &WeightSpace {
        &self.spaces[s]
    }

    pub fn space_of(&self, mu: &Weight) -> Option<usize> {
        self.by_weight.get(mu).copied()
    }

    pub fn dim(&self) -> usize {
        self.spaces.iter().map(WeightSpace::dim).sum()
    }

    /// η_λ.
    pub fn highest_vector(&self) -> ModuleVector {
        ModuleVector::basis((0, 0))
    }

    pub fn basis(&self) -> Vec<ModuleKey> {
        self.spaces
            .iter()
            .enumerate()
            .flat_map(|(s, sp)| (0..sp.dim()).map(move |b| (s, b)))
            .collect()
    }

    /// F_w η_λ.
    pub fn word_vector(&self, w: &Word) -> ModuleVector {
        w.0.iter().rev().fold(self.highest_vector(), |v, &l| self.act_f(l as Index, &v))
    }

    /// x^- η_λ for x in **f**.
    pub fn half_vector(&self, x: &HalfElement) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (w, c) in x.iter() {
            out.add_scaled(&self.word_vector(w), c);
        }
        out
    }

    /// Coordinates of the part of v in weight space s.
    pub fn coords(&self, s: usize, v: &ModuleVector) -> Vec<QPiScalar> {
        (0..self.spaces[s].dim()).map(|b| v.coeff(&(s, b))).collect()
    }

    /// Bar: basis vectors F_wη are fixed, coefficients are barred.
    pub fn bar(&self, v: &ModuleVector) -> ModuleVector {
        v.map_coeffs(QPiScalar::bar)
    }

    /// Contravariant Gram matrix of the basis words of weight space s:
    /// entry (r, c) is the η-coefficient of E_{w_r reversed} F_{w_c} η.
    pub fn gram(&self, s: usize) -> Vec<Vec<QPiScalar>> {
        let sp = &self.spaces[s];
        (0..sp.dim())
            .map(|r| {
                (0..sp.dim())
                    .map(|c| {
                        let v = sp.words[r]
                            .0
                            .iter()
                            .fold(ModuleVector::basis((s, c)), |v, &l| self.act_e(l as Index, &v));
                        v.coeff(&(0, 0))
                    })
                    .collect()
            })
            .collect()
    }

    /// Matrix of a weight-homogeneous operator on weight space s: the target space
    /// and the columns of coordinates of the images of the basis vectors.
    pub fn operator_block(
        &self,
        s: usize,
        op: &dyn Fn(&ModuleVector) -> ModuleVector,
    ) -> Option<(usize, Vec<Vec<QPiScalar>>)> {
        let imgs: Vec<ModuleVector> = (0..self.spaces[s].dim()).map(|b| op(&ModuleVector::basis((s, b)))).collect();
        let target = imgs.iter().flat_map(|v| v.keys().map(|k| k.0)).next()?;
        Some((target, imgs.iter().map(|v| self.coords(target, v)).collect()))
    }

    /// Highest weight vectors for E_i in weight space s.
    pub fn i_highest_vectors(&self, i: Index, s: usize) -> Vec<ModuleVector> {
        let sp = &self.spaces[s];
        let target = self.space_of(&sp.weight.add(&self.cover.datum().simple_root(i)));
        let cols: Vec<Vec<QPiScalar>> = (0..sp.dim())
            .map(|b| match target {
                Some(t) => self.coords(t, &sp.e_img[i][b]),
                None => Vec::new(),
            })
            .collect();
        let ker = if target.is_none() {
            (0..sp.dim())
                .map(|b| (0..sp.dim()).map(|r| if r == b { QPiScalar::one() } else { QPiScalar::zero() }).collect())
                .collect()
        } else {
            qpi_kernel(&cols).expect("kernel ranks agree at π = ±1")
        };
        ker.into_iter()
            .map(|k| LinComb::from_terms(k.into_iter().enumerate().map(|(b, c)| ((s, b), c))))
            .collect()
    }

    /// v = Σ F_i^{(k)} η_k with E_i η_k = 0: the string decomposition of a homogeneous
    /// vector, as (k, m, η_k) with m the i-weight of η_k.
    pub fn i_strings(&self, i: Index, s: usize, v: &ModuleVector) -> Vec<(usize, i64, ModuleVector)> {
        let datum = self.cover.datum();
        let alpha = datum.simple_root(i);
        let mut gens = Vec::new();
        let mut mu = self.spaces[s].weight.clone();
        let mut k = 0usize;
        while let Some(sk) = self.space_of(&mu) {
            let m = mu.0[i];
            if m >= k as i64 {
                for eta in self.i_highest_vectors(i, sk) {
                    gens.push((k, m, eta));
                }
            }
            mu = mu.add(&alpha);
            k += 1;
        }
        let cols: Vec<Vec<QPiScalar>> =
            gens.iter().map(|(k, _, eta)| self.coords(s, &self.act_f_div(i, *k, eta))).collect();
        let mut ech = QPiEchelon::new(self.spaces[s].dim());
        for c in &cols {
            let ok = ech.insert(c);
            assert!(ok, "string vectors are a basis");
        }
        let coef = ech.coordinates(&self.coords(s, v)).expect("strings span the weight space");
        gens.into_iter()
            .zip(coef)
            .filter(|(_, c)| !c.is_zero())
            .map(|((k, m, eta), c)| (k, m, eta.scale(&c)))
            .collect()
    }

    /// The rank-one map ω for U(i): ω(F^{(k)}η) = π_i^{C(m,2)} E^{(k)} F^{(m)} η
    /// on each string of highest weight m.
    pub fn rank1_omega(&self, i: Index, v: &ModuleVector) -> ModuleVector {
        let datum = self.cover.datum();
        let mut out = ModuleVector::zero();
        for s in v.keys().map(|k| k.0).collect::<BTreeSet<_>>() {
            let part = v.filter(|k| k.0 == s);
            for (k, m, eta) in self.i_strings(i, s, &part) {
                let xi = self.act_f_div(i, m as usize, &eta);
                let img = self.act_e_div(i, k, &xi);
                out.add_scaled(&img, &datum.monomial_i(i, 1, 0, choose2(m)));
            }
        }
        out
    }
}

/// E-images of the candidate F_k b, concatenated over the target weight spaces:
/// E_i F_k b = π^{p(i)p(k)} F_k E_i b + δ_ik [⟨α_i^∨, wt b⟩]_i b.
fn e_signature(
    datum: &CartanDatum,
    spaces: &[WeightSpace],
    targets: &[Option<(usize, usize)>],
    total: usize,
    k: Index,
    src: usize,
    b: usize,
) -> Vec<QPiScalar> {
    let mut sig = vec![QPiScalar::zero(); total];
    for (i, t) in targets.iter().enumerate() {
        let Some((t, off)) = *t else { continue };
        let sgn = QPiScalar::pi_pow(datum.parity(i) as i64 * datum.parity(k) as i64);
        for ((s2, r2), c) in spaces[src].e_img[i][b].iter() {
            let c = c * &sgn;
            for ((t2, r), f) in spaces[*s2].f_img[k][*r2].iter() {
                debug_assert_eq!(*t2, t);
                sig[off + r] += &(&c * f);
            }
        }
        if i == k {
            debug_assert_eq!(t, src);
            sig[off + b] += &datum.qint(i, spaces[src].weight.0[i]);
        }
    }
    sig
}

impl Representation for SimpleModule {
    type Key = ModuleKey;

    fn cover(&self) -> &Cover {
        &self.cover
    }

    fn weight_of(&self, k: &ModuleKey) -> Weight {
        self.spaces[k.0].weight.clone()
    }

    fn i_weight(&self, i: Index, k: &ModuleKey) -> i64 {
        self.spaces[k.0].weight.0[i]
    }

    fn parity_of(&self, k: &ModuleKey) -> u8 {
        self.spaces[k.0].parity
    }

    fn e_on_basis(&self, i: Index, k: &ModuleKey) -> ModuleVector {
        self.spaces[k.0].e_img[i][k.1].clone()
    }

    fn f_on_basis(&self, i: Index, k: &ModuleKey) -> ModuleVector {
        self.spaces[k.0].f_img[i][k.1].clone()
    }

    fn act_torus(&self, t: &Torus, v: &ModuleVector) -> ModuleVector {
        LinComb::from_terms(v.iter().map(|(k, c)| (*k, c * &torus_scalar(t, &self.spaces[k.0].weight))))
    }
}

/// Weight multiplicities of the classical simple module of highest weight λ by
/// Freudenthal's formula, keyed by depth λ − μ in simple-root coordinates.
pub fn classical_multiplicities(datum: &CartanDatum, lambda: &Weight) -> Result<BTreeMap<RootVec, usize>, ModuleError> {
    let roots = datum.positive_roots().map_err(|_| ModuleError::NotFiniteType)?;
    let n = datum.rank();
    let d = datum.ds();
    // (w, β) for w in fundamental-weight and β in simple-root coordinates
    let pair = |w: &Weight, beta: &RootVec| -> i64 { (0..n).map(|j| beta.0[j] * d[j] * w.0[j]).sum() };
    let mut mult: BTreeMap<RootVec, i64> = BTreeMap::new();
    mult.insert(RootVec::zero(n), 1);
    let mut level = vec![RootVec::zero(n)];
    while !level.is_empty() {
        let cands: BTreeSet<RootVec> =
            level.iter().flat_map(|nu| (0..n).map(move |k| nu.add(&RootVec::simple(n, k)))).collect();
        let mut next = Vec::new();
        for nu in cands {
            let mu = lambda.sub(&datum.root_to_weight(&nu));
            let shifted = Weight((0..n).map(|j| lambda.0[j] + mu.0[j] + 2).collect());
            let den = pair(&shifted, &nu);
            if den <= 0 {
                continue;
            }
            let mut num = 0;
            for beta in &roots {
                let bw = datum.root_to_weight(beta);
                let mut k = 1;
                loop {
                    let up = nu.sub(&beta.scale(k));
                    if !up.is_nonneg() {
                        break;
                    }
                    if let Some(&m) = mult.get(&up) {
                        num += m * pair(&mu.add(&Weight(bw.0.iter().map(|x| x * k).collect())), beta);
                    }
                    k += 1;
                }
            }
            let m = 2 * num / den;
            if m > 0 {
                mult.insert(nu.clone(), m);
                next.push(nu);
            }
        }
        level = next;
    }
    Ok(mult.into_iter().map(|(k, v)| (k, v as usize)).collect())
}

// ---- tensor products ----------------------------------------------------------

pub type TensorKey = (ModuleKey, ModuleKey);
pub type TensorVector = LinComb<TensorKey>;

/// M ⊗ N with U acting through Δ:
/// E_i(x⊗y) = E_ix⊗y + π_i^{p(x)}(π_iq_i)^t x⊗E_iy and
/// F_i(x⊗y) = q_i^{−s}F_ix⊗y + π_i^{p(x)} x⊗F_iy for x of i-weight t, y of i-weight s.
pub struct TensorModule {
    left: Arc<SimpleModule>,
    right: Arc<SimpleModule>,
}

impl TensorModule {
    pub fn new(left: Arc<SimpleModule>, right: Arc<SimpleModule>) -> TensorModule {
        TensorModule { left, right }
    }

    pub fn left(&self) -> &SimpleModule {
        &self.left
    }

    pub fn right(&self) -> &SimpleModule {
        &self.right
    }

    pub fn basis(&self) -> Vec<TensorKey> {
        let r = self.right.basis();
        self.left.basis().into_iter().flat_map(|x| r.iter().map(move |y| (x, *y))).collect()
    }

    /// x ⊗ y.
    pub fn pure(&self, x: &ModuleVector, y: &ModuleVector) -> TensorVector {
        let mut out = TensorVector::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_term((*a, *b), ca * cb);
            }
        }
        out
    }

    /// Σ (a⊗b)(x⊗y) = π^{p(b)p(x)} ax ⊗ by over the terms of a tensor of **U**.
    pub fn act_tensor(&self, u: &crate::cover::CoverTensor, v: &TensorVector) -> TensorVector {
        let mut out = TensorVector::zero();
        for ((a, b), c) in u.iter() {
            let pb = self.cover().monomial_parity(b) as i64;
            for ((x, y), cv) in v.iter() {
                let px = self.left.parity_of(x) as i64;
                let ax = self.left.act_monomial(a, &ModuleVector::basis(*x));
                let by = self.right.act_monomial(b, &ModuleVector::basis(*y));
                let coef = (c * cv).scale_monomial(1, 0, pb * px);
                out.add_scaled(&self.pure(&ax, &by), &coef);
            }
        }
        out
    }

    /// L_i' (`inverse = false`) or L_i'' (`inverse = true`):
    /// Σ_n π_i^{n p(x)} c_n (π_iq_i − q_i^{-1})^n [n]_i! F^{(n)}x ⊗ E^{(n)}y with
    /// c_n = q_i^{C(n,2)} for L_i' and (−1)^n π_i^{C(n,2)} q_i^{−C(n,2)} for L_i''.
    /// The tensor here is the plain x ⊗ y; π_i^{n p(x)} is the sign of E_i^{(n)}
    /// moving past x.
    pub fn quasi_r(&self, i: Index, inverse: bool, v: &TensorVector) -> TensorVector {
        let datum = self.cover().datum();
        let gap = &datum.monomial_i(i, 1, 1, 1) - &datum.monomial_i(i, 1, -1, 0);
        let mut out = TensorVector::zero();
        for ((x, y), c) in v.iter() {
            let px = self.left.parity_of(x) as i64;
            let mut fx = ModuleVector::basis(*x);
            let mut ey = ModuleVector::basis(*y);
            let mut n = 0i64;
            let mut gap_n = QPiScalar::one();
            loop {
                if fx.is_zero() || ey.is_zero() {
                    break;
                }
                let c2 = choose2(n);
                let cn = if inverse {
                    datum.monomial_i(i, sign(n), -c2, n * px + c2)
                } else {
                    datum.monomial_i(i, 1, c2, n * px)
                };
                let coef = &(&cn * &gap_n) * &(c * &datum.qfact(i, n));
                out.add_scaled(&self.pure(&fx, &ey), &coef);
                n += 1;
                gap_n = &gap_n * &gap;
                let inv = datum.qint(i, n).inv().unwrap();
                fx = self.left.act_f(i, &fx).scale(&inv);
                ey = self.right.act_e(i, &ey).scale(&inv);
            }
        }
        out
    }

    /// (T⊗T)(x⊗y) = π_i^{s p(x)} T(x) ⊗ T(y), s the i-weight of y, with T = T_i'
    /// (`sign = 1`) or T_i'' (`sign = −1`) on each factor.
    pub fn factorwise_braid(&self, i: Index, sign_: i8, v: &TensorVector) -> TensorVector {
        let mut out = TensorVector::zero();
        for ((x, y), c) in v.iter() {
            let s = self.right.i_weight(i, y);
            let e = self.cover().datum().pi_exp(i) * s * self.left.parity_of(x) as i64;
            let tx = self.left.braid(i, sign_, &ModuleVector::basis(*x));
            let ty = self.right.braid(i, sign_, &ModuleVector::basis(*y));
            out.add_scaled(&self.pure(&tx, &ty), &c.scale_monomial(1, 0, e));
        }
        out
    }
}

impl Representation for TensorModule {
    type Key = TensorKey;

    fn cover(&self) -> &Cover {
        self.left.cover()
    }

    fn weight_of(&self, k: &TensorKey) -> Weight {
        self.left.weight_of(&k.0).add(&self.right.weight_of(&k.1))
    }

    fn i_weight(&self, i: Index, k: &TensorKey) -> i64 {
        self.left.i_weight(i, &k.0) + self.right.i_weight(i, &k.1)
    }

    fn parity_of(&self, k: &TensorKey) -> u8 {
        (self.left.parity_of(&k.0) + self.right.parity_of(&k.1)) % 2
    }

    fn e_on_basis(&self, i: Index, k: &TensorKey) -> TensorVector {
        let datum = self.cover().datum();
        let (x, y) = k;
        let t = self.left.i_weight(i, x);
        let px = self.left.parity_of(x) as i64;
        let mut out = self.pure(&self.left.e_on_basis(i, x), &ModuleVector::basis(*y));
        let c = datum.monomial_i(i, 1, t, px + t);
        out.add_scaled(&self.pure(&ModuleVector::basis(*x), &self.right.e_on_basis(i, y)), &c);
        out
    }

    fn f_on_basis(&self, i: Index, k: &TensorKey) -> TensorVector {
        let datum = self.cover().datum();
        let (x, y) = k;
        let s = self.right.i_weight(i, y);
        let px = self.left.parity_of(x) as i64;
        let mut out = self
            .pure(&self.left.f_on_basis(i, x), &ModuleVector::basis(*y))
            .scale(&datum.monomial_i(i, 1, -s, 0));
        out.add_scaled(
            &self.pure(&ModuleVector::basis(*x), &self.right.f_on_basis(i, y)),
            &datum.monomial_i(i, 1, 0, px),
        );
        out
    }
}

// ---- braid images of highest weight vectors -----------------------------------

/// Both sides of T_{h_1} ⋯ T_{h_N} η_λ = F_{h_1}^{(a_1)} ⋯ F_{h_N}^{(a_N)} η_λ with
/// a_k = ⟨α_{h_k}^∨, s_{h_{k+1}} ⋯ s_{h_N}(λ)⟩.
#[derive(Clone, Debug)]
pub struct HighestWeightImage {
    pub exponents: Vec<i64>,
    pub braided: ModuleVector,
    pub divided: ModuleVector,
}

impl HighestWeightImage {
    pub fn holds(&self) -> bool {
        self.braided == self.divided
    }
}

/// The exponents a_k attached to a word and a weight.
pub fn extremal_exponents(datum: &CartanDatum, word: &[Index], lambda: &Weight) -> Vec<i64> {
    (0..word.len()).map(|k| datum.apply_word_weight(&word[k + 1..], lambda).0[word[k]]).collect()
}

pub fn highest_weight_braid_image(module: &SimpleModule, word: &[Index]) -> Result<HighestWeightImage, ModuleError> {
    let datum = module.cover().datum();
    if !datum.word_is_reduced(word) {
        return Err(ModuleError::NotReduced(word.to_vec()));
    }
    let exponents = extremal_exponents(datum, word, module.highest_weight());
    let eta = module.highest_vector();
    let braided = module.braid_word(word, 1, &eta);
    let divided = word
        .iter()
        .zip(&exponents)
        .rev()
        .fold(eta, |v, (&i, &a)| module.act_f_div(i, a as usize, &v));
    Ok(HighestWeightImage { exponents, braided, divided })
}

/// The alternating word (i, j, i, …) of length m.
pub fn alternating_word(i: Index, j: Index, m: usize) -> Vec<Index> {
    (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect()
}

/// The two divided-power products x = F_i^{(a_1)}F_j^{(a_2)}⋯ and y = F_j^{(b_1)}F_i^{(b_2)}⋯
/// (m = m_ij factors each) whose equality in **f** is the quantum Verma identity.
/// The exponents are those of the two reduced words of the longest element.
#[derive(Clone, Debug)]
pub struct VermaIdentity {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub x: HalfElement,
    pub y: HalfElement,
}

pub fn quantum_verma_identity(half: &Half, i: Index, j: Index, lambda: &Weight) -> Result<VermaIdentity, ModuleError> {
    let datum = half.datum();
    let m = datum.braid_order(i, j).ok_or(ModuleError::InfiniteOrder(i, j))? as usize;
    let build = |w: &[Index]| -> (Vec<i64>, HalfElement) {
        let ex = extremal_exponents(datum, w, lambda);
        let parts: Vec<HalfElement> = w.iter().zip(&ex).map(|(&l, &a)| half.divided_power(l, a as usize)).collect();
        (ex, half.product(&parts))
    };
    let (a, x) = build(&alternating_word(i, j, m));
    let (b, y) = build(&alternating_word(j, i, m));
    Ok(VermaIdentity { a, b, x, y })
}

/// Both sides of the scalar identity behind T_i'(F^{(k)}η) on an i-string of highest
/// weight m = h + k, for q_i = q^d and π_i = π^p:
/// (−1)^k π_i^{mk+C(k+1,2)} q_i^{hk+k} and
/// Σ_{a−b+c=h−k} (−1)^b π_i^{b(c+k)+C(b+1,2)+c+c(h−k)} q_i^{−ac+b} [c+k;c]_i [a+k;b]_i [h;a]_i.
pub fn string_identity_sides(h: i64, k: i64, d: i64, p: i64) -> (QPiScalar, QPiScalar) {
    let m = h + k;
    let mono = |c: i64, qe: i64, pe: i64| QPiScalar::monomial(c, qe * d, pe * p);
    let lhs = mono(sign(k), h * k + k, m * k + choose2(k + 1));
    let mut rhs = QPiScalar::zero();
    for c in 0..=(m + 1) {
        for a in 0..=h {
            let b = a + c - (h - k);
            if b < 0 {
                continue;
            }
            let coef = mono(sign(b), -a * c + b, b * (c + k) + choose2(b + 1) + c + c * (h - k));
            let binoms =
                &(&qbinom_at(c + k, c, d, p) * &qbinom_at(a + k, b, d, p)) * &qbinom_at(h, a, d, p);
            rhs += &(&coef * &binoms);
        }
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(d: CartanDatum) -> Arc<Cover> {
        Arc::new(Cover::new(Arc::new(d)))
    }

    #[test]
    fn rank_one_string_dimensions() {
        let c = cover(CartanDatum::rank1_odd());
        for m in 0..4 {
            let v = SimpleModule::new(c.clone(), Weight(vec![m])).unwrap();
            assert_eq!(v.dim(), (m + 1) as usize);
            assert!(v.spaces().iter().all(|s| s.dim() == 1));
        }
    }

    #[test]
    fn b2_super_fundamental_dimensions() {
        let c = cover(CartanDatum::b2_super());
        let dims: Vec<usize> = [vec![1, 0], vec![0, 1], vec![1, 1]]
            .into_iter()
            .map(|l| SimpleModule::new(c.clone(), Weight(l)).unwrap().dim())
            .collect();
        let classical: Vec<usize> = [vec![1, 0], vec![0, 1], vec![1, 1]]
            .into_iter()
            .map(|l| classical_multiplicities(c.datum(), &Weight(l)).unwrap().values().sum())
            .collect();
        assert_eq!(dims, classical);
        assert_eq!(classical[0] * classical[1], 20);
    }

    #[test]
    fn trivial_module() {
        let c = cover(CartanDatum::a2());
        let v = SimpleModule::new(c, Weight(vec![0, 0])).unwrap();
        assert_eq!(v.dim(), 1);
    }

    #[test]
    fn rejects_non_dominant() {
        let c = cover(CartanDatum::a2());
        assert!(matches!(SimpleModule::new(c, Weight(vec![-1, 0])), Err(ModuleError::NotDominant(_))));
    }

    #[test]
    fn verma_highest_weight_action() {
        let c = cover(CartanDatum::b2_super());
        let lambda = Weight(vec![2, 1]);
        let m = Verma::new(c.clone(), lambda.clone());
        let eta = HalfElement::basis(Word::empty());
        assert!(m.act(&c.e(0), &eta).is_zero());
        let mu = crate::root::Coweight(vec![1, 2]);
        let k = m.act(&c.k(&mu), &eta);
        assert_eq!(k, eta.scale(&QPiScalar::q_pow(4)));
        for i in 0..2 {
            let ef = c.mul(&c.e(i), &c.f(i));
            let v = m.act(&ef, &eta);
            let expected = c.datum().qint(i, lambda.0[i]);
            assert_eq!(v, eta.scale(&expected));
            let th = c.half().theta(i);
            assert_eq!(m.shapovalov(&th, &th), expected);
        }
        assert!(m.shapovalov(&c.half().theta(0), &c.half().theta(1)).is_zero());
        assert!(m.shapovalov(&eta, &eta).is_one());
    }

    #[test]
    fn string_identity_small() {
        for m in 0..=3 {
            for k in 0..=m {
                let (l, r) = string_identity_sides(m - k, k, 1, 1);
                assert_eq!(l, r, "h={} k={}", m - k, k);
            }
        }
    }
}
