//! Exact row reduction over Q(q), and over Q^π(q) one idempotent component at a time.

use crate::scalar::{QPiScalar, RatFunc};

/// Incremental echelon basis of a span in Q(q)^n. Each stored row remembers how
/// it is built from the vectors inserted so far, so membership tests also return
/// coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    // (pivot column, row with pivot entry 1, combination of inserted vectors)
    rows: Vec<(usize, Vec<RatFunc>, Vec<RatFunc>)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(r, c)` with v = Σ c_k v_k + r, where v_k are the inserted vectors and
    /// r is reduced against every pivot.
    pub fn reduce(&self, v: &[RatFunc]) -> (Vec<RatFunc>, Vec<RatFunc>) {
        let mut r = v.to_vec();
        let mut c = vec![RatFunc::zero(); self.rows.len()];
        for (p, row, comb) in &self.rows {
            let f = r[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
            for (x, y) in c.iter_mut().zip(comb) {
                if !y.is_zero() {
                    *x = x.add(&f.mul(y));
                }
            }
        }
        (r, c)
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        self.reduce(v).0.iter().all(RatFunc::is_zero)
    }

    /// Insert v if it is independent of the span; report whether it was.
    pub fn insert(&mut self, v: &[RatFunc]) -> bool {
        let (r, c) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        let n = self.rows.len();
        // r = v_n − Σ c_k v_k
        let mut comb: Vec<RatFunc> = c.iter().map(|x| x.neg().mul(&inv)).collect();
        comb.push(inv.clone());
        let row: Vec<RatFunc> = r.iter().map(|x| x.mul(&inv)).collect();
        for (_, _, old) in self.rows.iter_mut() {
            old.push(RatFunc::zero());
        }
        debug_assert_eq!(comb.len(), n + 1);
        self.rows.push((p, row, comb));
        true
    }
}

/// Rank of a list of vectors over Q(q).
pub fn rank(vectors: &[Vec<RatFunc>]) -> usize {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut e = Echelon::new(dim);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A span in Q^π(q)^n kept as two echelon forms, one per component. Only vectors
/// that are independent in both components are admitted, so the inserted vectors
/// stay a basis over Q^π(q).
#[derive(Clone, Debug)]
pub struct QPiEchelon {
    plus: Echelon,
    minus: Echelon,
}

impl QPiEchelon {
    pub fn new(dim: usize) -> QPiEchelon {
        QPiEchelon { plus: Echelon::new(dim), minus: Echelon::new(dim) }
    }

    pub fn rank(&self) -> usize {
        self.plus.rank()
    }

    /// Insert v when it is independent at π = 1 and at π = −1.
    pub fn insert(&mut self, v: &[QPiScalar]) -> bool {
        let (p, m) = split(v);
        if self.plus.contains(&p) || self.minus.contains(&m) {
            return false;
        }
        self.plus.insert(&p);
        self.minus.insert(&m);
        true
    }

    /// Coordinates of v over the inserted vectors, if v lies in the span.
    pub fn coordinates(&self, v: &[QPiScalar]) -> Option<Vec<QPiScalar>> {
        let (p, m) = split(v);
        let (rp, cp) = self.plus.reduce(&p);
        let (rm, cm) = self.minus.reduce(&m);
        if !rp.iter().all(RatFunc::is_zero) || !rm.iter().all(RatFunc::is_zero) {
            return None;
        }
        Some(cp.into_iter().zip(cm).map(|(a, b)| QPiScalar::from_components(a, b)).collect())
    }

    /// Whether v is in the span in each component separately.
    pub fn contains_componentwise(&self, v: &[QPiScalar]) -> (bool, bool) {
        let (p, m) = split(v);
        (self.plus.contains(&p), self.minus.contains(&m))
    }
}

pub fn split(v: &[QPiScalar]) -> (Vec<RatFunc>, Vec<RatFunc>) {
    (v.iter().map(|x| x.plus().clone()).collect(), v.iter().map(|x| x.minus().clone()).collect())
}

/// Ranks at π = 1 and π = −1 of a list of vectors.
pub fn qpi_rank(vectors: &[Vec<QPiScalar>]) -> (usize, usize) {
    let (p, m): (Vec<_>, Vec<_>) = vectors.iter().map(|v| split(v)).unzip();
    (rank(&p), rank(&m))
}

/// A basis of the kernel of the linear map whose columns are `cols`, computed per
/// component and paired index by index. `None` if the kernel ranks differ.
pub fn qpi_kernel(cols: &[Vec<QPiScalar>]) -> Option<Vec<Vec<QPiScalar>>> {
    let n = cols.len();
    let dim = cols.first().map_or(0, Vec::len);
    let kernel = |sel: &dyn Fn(&QPiScalar) -> RatFunc| -> Vec<Vec<RatFunc>> {
        let mut e = Echelon::new(dim);
        let mut pivots = Vec::new();
        let mut out = Vec::new();
        for (k, col) in cols.iter().enumerate() {
            let v: Vec<RatFunc> = col.iter().map(sel).collect();
            let (r, c) = e.reduce(&v);
            if r.iter().all(RatFunc::is_zero) {
                let mut z = vec![RatFunc::zero(); n];
                z[k] = RatFunc::one();
                for (idx, ck) in pivots.iter().zip(&c) {
                    z[*idx] = ck.neg();
                }
                out.push(z);
            } else {
                e.insert(&v);
                pivots.push(k);
            }
        }
        out
    };
    let kp = kernel(&|x| x.plus().clone());
    let km = kernel(&|x| x.minus().clone());
    if kp.len() != km.len() {
        return None;
    }
    Some(
        kp.into_iter()
            .zip(km)
            .map(|(a, b)| a.into_iter().zip(b).map(|(x, y)| QPiScalar::from_components(x, y)).collect())
            .collect(),
    )
}
