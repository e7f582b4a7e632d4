//! Cartan data with parity, lattices, pairings and Weyl group words.
//!
//! Coordinates: a [`Weight`] is written in the fundamental weights ω_i, so
//! ⟨α_i^∨, λ⟩ is coordinate i and α_j is column j of A. A [`Coweight`] is
//! written in the simple coroots α_i^∨, which makes P^∨ ⊗ P → Z the dot
//! product and keeps J-exponents meaningful modulo 2. Root-lattice vectors
//! ([`RootVec`]) are written in the simple roots.

use crate::scalar::{qbinom_at, qfact_at, qint_at, QPiScalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Index = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("shape: {0}")]
    Shape(String),
    #[error("C1: a_{i}{i} must equal 2", i = .0 + 1)]
    C1(Index),
    #[error("C2: a_{i}{j} must be a non-positive integer", i = .0 + 1, j = .1 + 1)]
    C2(Index, Index),
    #[error("C3: a_{i}{j} = 0 but a_{j}{i} != 0", i = .0 + 1, j = .1 + 1)]
    C3(Index, Index),
    #[error("C4: d must be positive with DA symmetric (fails at {i},{j})", i = .0 + 1, j = .1 + 1)]
    C4(Index, Index),
    #[error("C4: gcd of d must be 1")]
    Gcd,
    #[error("P1: a_{i}{j} must be even for odd index {i}", i = .0 + 1, j = .1 + 1)]
    P1(Index, Index),
    #[error("P2: d_{i} must have the parity of p({i})", i = .0 + 1)]
    P2(Index),
    #[error("no odd index: the datum must have at least one odd simple root")]
    NoOdd,
    #[error("not of finite type")]
    NotFiniteType,
    #[error("json: {0}")]
    Json(String),
}

/// Integer vector in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

/// Integer vector in simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coweight(pub Vec<i64>);

/// Integer vector in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(n: usize) -> RootVec {
        RootVec(vec![0; n])
    }

    pub fn simple(n: usize, i: Index) -> RootVec {
        let mut v = vec![0; n];
        v[i] = 1;
        RootVec(v)
    }

    pub fn add(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * c).collect())
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl Weight {
    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Coweight {
    pub fn zero(n: usize) -> Coweight {
        Coweight(vec![0; n])
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Coweight {
        Coweight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i64) -> Coweight {
        Coweight(self.0.iter().map(|a| a * c).collect())
    }
}

/// m_ij of the braid relations; `None` encodes ∞.
pub type BraidOrder = Option<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Ordinary,
    Spin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    #[serde(rename = "cartan")]
    a: Vec<Vec<i64>>,
    parity: Vec<u8>,
    d: Vec<i64>,
}

impl CartanDatum {
    pub fn new(a: Vec<Vec<i64>>, parity: Vec<u8>, d: Vec<i64>) -> Result<CartanDatum, DatumError> {
        let datum = CartanDatum { a, parity, d };
        datum.validate()?;
        Ok(datum)
    }

    pub fn from_json(text: &str) -> Result<CartanDatum, DatumError> {
        let datum: CartanDatum =
            serde_json::from_str(text).map_err(|e| DatumError::Json(e.to_string()))?;
        datum.validate()?;
        Ok(datum)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("datum serializes")
    }

    /// One odd simple root: the covering group of osp(1|2).
    pub fn rank1_odd() -> CartanDatum {
        CartanDatum::new(vec![vec![2]], vec![1], vec![1]).unwrap()
    }

    /// Two orthogonal odd simple roots.
    pub fn spin_rank2() -> CartanDatum {
        CartanDatum::new(vec![vec![2, 0], vec![0, 2]], vec![1, 1], vec![1, 1]).unwrap()
    }

    /// Type B2 with the short simple root odd (osp(1|4)).
    pub fn b2_super() -> CartanDatum {
        CartanDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 0], vec![1, 2]).unwrap()
    }

    /// Classical A2 with both roots even.
    pub fn a2() -> CartanDatum {
        CartanDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![0, 0], vec![1, 1]).unwrap()
    }

    /// Checks (C1)–(C3), (P1), (P2), then (C4) and gcd(d) = 1. Purely even data
    /// (classical regressions) validate with any d; see [`CartanDatum::has_odd`].
    pub fn validate(&self) -> Result<(), DatumError> {
        let n = self.a.len();
        if n == 0 {
            return Err(DatumError::Shape("empty Cartan matrix".into()));
        }
        if n > 64 {
            return Err(DatumError::Shape("rank above 64".into()));
        }
        if self.a.iter().any(|r| r.len() != n) {
            return Err(DatumError::Shape("Cartan matrix is not square".into()));
        }
        if self.parity.len() != n || self.d.len() != n {
            return Err(DatumError::Shape("parity and d must have the rank's length".into()));
        }
        if self.parity.iter().any(|&p| p > 1) {
            return Err(DatumError::Shape("parity entries must be 0 or 1".into()));
        }
        for i in 0..n {
            if self.a[i][i] != 2 {
                return Err(DatumError::C1(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.a[i][j] > 0 {
                    return Err(DatumError::C2(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if (self.a[i][j] == 0) != (self.a[j][i] == 0) {
                    return Err(DatumError::C3(i, j));
                }
            }
        }
        for i in 0..n {
            if self.parity[i] == 1 {
                for j in 0..n {
                    if self.a[i][j] % 2 != 0 {
                        return Err(DatumError::P1(i, j));
                    }
                }
            }
        }
        // A purely even datum has trivial π-structure; (P2) only binds when I₁ is nonempty.
        for i in 0..n {
            if self.has_odd() && self.d[i].rem_euclid(2) != self.parity[i] as i64 {
                return Err(DatumError::P2(i));
            }
        }
        for i in 0..n {
            if self.d[i] <= 0 {
                return Err(DatumError::C4(i, i));
            }
            for j in 0..n {
                if self.d[i] * self.a[i][j] != self.d[j] * self.a[j][i] {
                    return Err(DatumError::C4(i, j));
                }
            }
        }
        let g = self.d.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g != 1 {
            return Err(DatumError::Gcd);
        }
        Ok(())
    }

    pub fn has_odd(&self) -> bool {
        self.parity.contains(&1)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: Index, j: Index) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn parity(&self, i: Index) -> u8 {
        self.parity[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn d(&self, i: Index) -> i64 {
        self.d[i]
    }

    pub fn ds(&self) -> &[i64] {
        &self.d
    }

    pub fn b(&self, i: Index, j: Index) -> i64 {
        1 - self.a[i][j]
    }

    /// Odd indices.
    pub fn odd(&self) -> Vec<Index> {
        (0..self.rank()).filter(|&i| self.parity[i] == 1).collect()
    }

    /// Exponent e with π_i = π^e. Equal to d_i mod 2 whenever (P2) holds; taken from
    /// the parity so that purely even data give the classical algebra in both components.
    pub fn pi_exp(&self, i: Index) -> i64 {
        self.parity[i] as i64
    }

    /// [n]_i.
    pub fn qint(&self, i: Index, n: i64) -> QPiScalar {
        qint_at(n, self.d[i], self.pi_exp(i))
    }

    /// [n]_i!.
    pub fn qfact(&self, i: Index, n: i64) -> QPiScalar {
        qfact_at(n, self.d[i], self.pi_exp(i))
    }

    /// [n choose k]_i.
    pub fn qbinom(&self, i: Index, n: i64, k: i64) -> QPiScalar {
        qbinom_at(n, k, self.d[i], self.pi_exp(i))
    }

    /// c · q_i^k · π_i^e.
    pub fn monomial_i(&self, i: Index, c: i64, k: i64, e: i64) -> QPiScalar {
        QPiScalar::monomial(c, k * self.d[i], e * self.pi_exp(i))
    }

    /// (α_i, α_j) = d_i a_ij.
    pub fn sym(&self, i: Index, j: Index) -> i64 {
        self.d[i] * self.a[i][j]
    }

    /// (μ, ν) on the root lattice.
    pub fn symmetric_form(&self, mu: &RootVec, nu: &RootVec) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if mu.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += mu.0[i] * self.sym(i, j) * nu.0[j];
            }
        }
        s
    }

    /// (ν, α_i).
    pub fn form_with_simple(&self, nu: &RootVec, i: Index) -> i64 {
        (0..self.rank()).map(|j| nu.0[j] * self.sym(j, i)).sum()
    }

    pub fn root_parity(&self, nu: &RootVec) -> u8 {
        (nu.0.iter().zip(&self.parity).map(|(c, &p)| c * p as i64).sum::<i64>()).rem_euclid(2) as u8
    }

    /// The weight with the same value as a root-lattice vector.
    pub fn root_to_weight(&self, nu: &RootVec) -> Weight {
        let n = self.rank();
        Weight((0..n).map(|i| (0..n).map(|j| self.a[i][j] * nu.0[j]).sum()).collect())
    }

    pub fn simple_root(&self, j: Index) -> Weight {
        self.root_to_weight(&RootVec::simple(self.rank(), j))
    }

    pub fn simple_coroot(&self, i: Index) -> Coweight {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Coweight(c)
    }

    /// d_i α_i^∨.
    pub fn tilde_coroot(&self, i: Index) -> Coweight {
        self.simple_coroot(i).scale(self.d[i])
    }

    /// ν ↦ ν̃ on the coroot lattice.
    pub fn tilde(&self, nu: &Coweight) -> Coweight {
        Coweight(nu.0.iter().zip(&self.d).map(|(a, d)| a * d).collect())
    }

    pub fn fundamental_weight(&self, i: Index) -> Weight {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Weight(c)
    }

    /// ⟨μ, λ⟩.
    pub fn pair(&self, mu: &Coweight, lambda: &Weight) -> i64 {
        mu.0.iter().zip(&lambda.0).map(|(a, b)| a * b).sum()
    }

    /// ⟨μ, ν⟩ for a root-lattice ν.
    pub fn pair_root(&self, mu: &Coweight, nu: &RootVec) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if mu.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += mu.0[i] * self.a[i][j] * nu.0[j];
            }
        }
        s
    }

    /// ⟨μ, α_j⟩.
    pub fn pair_simple(&self, mu: &Coweight, j: Index) -> i64 {
        (0..self.rank()).map(|i| mu.0[i] * self.a[i][j]).sum()
    }

    /// ⟨α_i^∨, ν⟩ for a root-lattice ν.
    pub fn coroot_on_root(&self, i: Index, nu: &RootVec) -> i64 {
        (0..self.rank()).map(|j| self.a[i][j] * nu.0[j]).sum()
    }

    pub fn reflect_weight(&self, i: Index, lambda: &Weight) -> Weight {
        let c = lambda.0[i];
        Weight((0..self.rank()).map(|k| lambda.0[k] - c * self.a[k][i]).collect())
    }

    pub fn reflect_coweight(&self, i: Index, mu: &Coweight) -> Coweight {
        let c = self.pair_simple(mu, i);
        let mut out = mu.0.clone();
        out[i] -= c;
        Coweight(out)
    }

    pub fn reflect_root(&self, i: Index, nu: &RootVec) -> RootVec {
        let c = self.coroot_on_root(i, nu);
        let mut out = nu.0.clone();
        out[i] -= c;
        RootVec(out)
    }

    /// s_{i_1} ⋯ s_{i_k}(ν), the rightmost reflection acting first.
    pub fn apply_word_root(&self, word: &[Index], nu: &RootVec) -> RootVec {
        word.iter().rev().fold(nu.clone(), |v, &i| self.reflect_root(i, &v))
    }

    pub fn apply_word_weight(&self, word: &[Index], lambda: &Weight) -> Weight {
        word.iter().rev().fold(lambda.clone(), |v, &i| self.reflect_weight(i, &v))
    }

    pub fn apply_word_coweight(&self, word: &[Index], mu: &Coweight) -> Coweight {
        word.iter().rev().fold(mu.clone(), |v, &i| self.reflect_coweight(i, &v))
    }

    pub fn braid_order(&self, i: Index, j: Index) -> BraidOrder {
        match self.a[i][j] * self.a[j][i] {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// Positive definiteness of DA by leading principal minors.
    pub fn is_finite_type(&self) -> bool {
        let n = self.rank();
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| self.sym(i, j)).collect()).collect();
        (1..=n).all(|k| leading_minor_sign(&m, k) > 0)
    }

    /// s_{i_1} ⋯ s_{i_k} is reduced iff every s_{i_1} ⋯ s_{i_{t−1}}(α_{i_t}) is positive.
    pub fn word_is_reduced(&self, word: &[Index]) -> bool {
        (0..word.len()).all(|t| {
            let img = self.apply_word_root(&word[..t], &RootVec::simple(self.rank(), word[t]));
            img.is_nonneg()
        })
    }

    /// A reduced expression of w₀: extend w by the smallest s_i with w(α_i) > 0
    /// until none remains.
    pub fn longest_word(&self) -> Result<Vec<Index>, DatumError> {
        if !self.is_finite_type() {
            return Err(DatumError::NotFiniteType);
        }
        let n = self.rank();
        let mut word = Vec::new();
        loop {
            let next = (0..n).find(|&i| self.apply_word_root(&word, &RootVec::simple(n, i)).is_nonneg());
            match next {
                Some(i) => word.push(i),
                None => return Ok(word),
            }
        }
    }

    /// Positive roots of a finite-type datum, in the order they are produced by
    /// the longest word: β_k = s_{i_1} ⋯ s_{i_{k−1}}(α_{i_k}).
    pub fn positive_roots(&self) -> Result<Vec<RootVec>, DatumError> {
        let w = self.longest_word()?;
        Ok((0..w.len())
            .map(|k| self.apply_word_root(&w[..k], &RootVec::simple(self.rank(), w[k])))
            .collect())
    }

    /// spin(λ)_i = ⟨α_i^∨, λ⟩ mod 2 for odd i, 0 for even i.
    pub fn spin(&self, lambda: &Weight) -> Vec<u8> {
        (0..self.rank())
            .map(|i| if self.parity[i] == 1 { lambda.0[i].rem_euclid(2) as u8 } else { 0 })
            .collect()
    }

    /// Spin when both indices have odd ϖ and a_ij = 0.
    pub fn spin_braid_relation_kind(&self, i: Index, j: Index, varpi: &[u8]) -> RelationKind {
        if i != j && varpi[i] == 1 && varpi[j] == 1 && self.a[i][j] == 0 {
            RelationKind::Spin
        } else {
            RelationKind::Ordinary
        }
    }

    /// Restriction to the indices {i, j}.
    pub fn subdatum(&self, i: Index, j: Index) -> Result<CartanDatum, DatumError> {
        let a = vec![vec![2, self.a[i][j]], vec![self.a[j][i], 2]];
        let g = num_integer::gcd(self.d[i], self.d[j]);
        let d = vec![self.d[i] / g, self.d[j] / g];
        let datum = CartanDatum { a, parity: vec![self.parity[i], self.parity[j]], d };
        datum.validate()?;
        Ok(datum)
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.0.iter().all(|&c| c >= 0)
    }
}

fn leading_minor_sign(m: &[Vec<i64>], k: usize) -> i32 {
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    // Fraction-free Bareiss elimination.
    let mut a: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| BigInt::from(m[i][j])).collect()).collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1;
    for c in 0..k {
        if a[c][c].is_zero() {
            let Some(r) = (c + 1..k).find(|&r| !a[r][c].is_zero()) else {
                return 0;
            };
            a.swap(c, r);
            sign = -sign;
        }
        for r in c + 1..k {
            for s in c + 1..k {
                a[r][s] = (&a[r][s] * &a[c][c] - &a[r][c] * &a[c][s]) / &prev;
            }
        }
        prev = a[c][c].clone();
    }
    let det = &a[k - 1][k - 1];
    if det.is_zero() {
        0
    } else if det.is_negative() {
        -sign
    } else {
        sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_names_axioms() {
        assert!(CartanDatum::b2_super().validate().is_ok());
        let e = CartanDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 0], vec![2, 1]);
        assert_eq!(e, Err(DatumError::P2(0)));
        let e = CartanDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], vec![1, 1]);
        assert!(matches!(e, Err(DatumError::P1(0, 1))));
        let e = CartanDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 0], vec![3, 6]);
        assert_eq!(e, Err(DatumError::Gcd));
    }

    #[test]
    fn finite_type_and_longest_words() {
        let b2 = CartanDatum::b2_super();
        assert!(b2.is_finite_type());
        assert_eq!(b2.longest_word().unwrap(), vec![0, 1, 0, 1]);
        let aff = CartanDatum { a: vec![vec![2, -2], vec![-2, 2]], parity: vec![0, 0], d: vec![1, 1] };
        assert!(!aff.is_finite_type());
        assert_eq!(aff.longest_word(), Err(DatumError::NotFiniteType));
        assert_eq!(CartanDatum::spin_rank2().longest_word().unwrap(), vec![0, 1]);
        assert_eq!(CartanDatum::a2().longest_word().unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn reflections() {
        let b2 = CartanDatum::b2_super();
        let aj = RootVec::simple(2, 1);
        assert_eq!(b2.reflect_root(0, &aj), RootVec(vec![2, 1]));
        assert_eq!(b2.reflect_root(0, &RootVec::simple(2, 0)), RootVec(vec![-1, 0]));
        let ai = b2.simple_root(0);
        assert_eq!(b2.reflect_weight(0, &ai), Weight(ai.0.iter().map(|x| -x).collect()));
    }

    #[test]
    fn braid_orders() {
        assert_eq!(CartanDatum::spin_rank2().braid_order(0, 1), Some(2));
        assert_eq!(CartanDatum::a2().braid_order(0, 1), Some(3));
        assert_eq!(CartanDatum::b2_super().braid_order(0, 1), Some(4));
        let aff = CartanDatum { a: vec![vec![2, -2], vec![-2, 2]], parity: vec![0, 0], d: vec![1, 1] };
        assert_eq!(aff.braid_order(0, 1), None);
    }

    #[test]
    fn spin_kinds() {
        let s = CartanDatum::spin_rank2();
        assert_eq!(s.spin_braid_relation_kind(0, 1, &[1, 1]), RelationKind::Spin);
        assert_eq!(s.spin_braid_relation_kind(0, 1, &[1, 0]), RelationKind::Ordinary);
        let b2 = CartanDatum::b2_super();
        assert_eq!(b2.spin(&Weight(vec![1, 0])), vec![1, 0]);
        assert_eq!(b2.spin(&Weight(vec![0, 1])), vec![0, 0]);
    }
}
