use qcover::braid::Braid;
use qcover::cover::Cover;
use qcover::modules::*;
use qcover::root::{CartanDatum, Weight};
use qcover::scalar::{choose2, QPiScalar};
use std::sync::Arc;

fn cover(d: CartanDatum) -> Arc<Cover> {
    Arc::new(Cover::new(Arc::new(d)))
}

fn module(c: &Arc<Cover>, l: &[i64]) -> SimpleModule {
    SimpleModule::new(c.clone(), Weight(l.to_vec())).unwrap()
}

fn small_weights(rank: usize) -> Vec<Vec<i64>> {
    if rank == 1 {
        (0..=2).map(|a| vec![a]).collect()
    } else {
        let mut out = Vec::new();
        for a in 0..=2 {
            for b in 0..=2 {
                out.push(vec![a, b]);
            }
        }
        out
    }
}

#[test]
fn inverse_braid_operators() {
    for d in [CartanDatum::rank1_odd(), CartanDatum::b2_super()] {
        let c = cover(d);
        for l in small_weights(c.rank()) {
            let v = module(&c, &l);
            for key in v.basis() {
                let x = ModuleVector::basis(key);
                for i in 0..c.rank() {
                    assert_eq!(v.braid(i, -1, &v.braid(i, 1, &x)), x, "λ={l:?} {key:?} i={i}");
                    assert_eq!(v.braid(i, 1, &v.braid(i, -1, &x)), x, "λ={l:?} {key:?} i={i}");
                }
            }
        }
    }
}

#[test]
fn braid_on_strings_from_highest_vectors() {
    for d in [CartanDatum::rank1_odd(), CartanDatum::b2_super()] {
        let c = cover(d);
        let datum = c.datum();
        for l in small_weights(c.rank()) {
            let v = module(&c, &l);
            for i in 0..c.rank() {
                for s in 0..v.spaces().len() {
                    let m = v.space(s).weight.0[i];
                    if m < 0 {
                        continue;
                    }
                    for eta in v.i_highest_vectors(i, s) {
                        let xi = v.act_f_div(i, m as usize, &eta);
                        for k in 0..=m {
                            let h = m - k;
                            let fk = v.act_f_div(i, k as usize, &eta);
                            let fh = v.act_f_div(i, h as usize, &eta);
                            let sgn = if k % 2 == 0 { 1 } else { -1 };
                            let c1 = datum.monomial_i(i, sgn, h * k + k, m * k + choose2(k + 1));
                            assert_eq!(v.braid(i, 1, &fk), fh.scale(&c1));
                            // F^{(k)}η = π_i^{mh+C(h+1,2)} E^{(h)}ξ
                            let eh = v.act_e_div(i, h as usize, &xi);
                            assert_eq!(fk, eh.scale(&datum.monomial_i(i, 1, 0, m * h + choose2(h + 1))));
                            // T''(E^{(k)}ξ) = (−1)^k π_i^{mh+C(h+1,2)} q_i^{−hk−k} E^{(h)}ξ
                            let ek = v.act_e_div(i, k as usize, &xi);
                            let c2 = datum.monomial_i(i, sgn, -h * k - k, m * h + choose2(h + 1));
                            assert_eq!(v.braid(i, -1, &ek), eh.scale(&c2));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn bar_conjugates_braid_operators() {
    let c = cover(CartanDatum::b2_super());
    let datum = c.datum();
    for l in [[1, 1], [2, 0], [0, 2]] {
        let v = module(&c, &l);
        for key in v.basis() {
            let x = ModuleVector::basis(key).scale(&QPiScalar::q());
            for i in 0..2 {
                let t = v.i_weight(i, &key);
                let lhs = v.bar(&v.braid(i, 1, &v.bar(&x)));
                let sgn = if t % 2 == 0 { 1 } else { -1 };
                let rhs = v.braid(i, -1, &x).scale(&datum.monomial_i(i, sgn, t, choose2(t)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn braid_operators_intertwine_e_and_f() {
    let c = cover(CartanDatum::b2_super());
    let datum = c.datum();
    for l in small_weights(2) {
        let v = module(&c, &l);
        for key in v.basis() {
            let z = ModuleVector::basis(key);
            for i in 0..2 {
                let t = v.i_weight(i, &key);
                let ti = |x: &ModuleVector| v.braid(i, 1, x);
                let tinv = |x: &ModuleVector| v.braid(i, -1, x);
                let fz = v.act_f(i, &z);
                let ez = v.act_e(i, &z);
                assert_eq!(ti(&fz), v.act_e(i, &ti(&z)).scale(&datum.monomial_i(i, -1, t, 0)));
                assert_eq!(
                    tinv(&fz),
                    v.act_e(i, &tinv(&z)).scale(&datum.monomial_i(i, -1, -t + 2, t + 1))
                );
                assert_eq!(
                    ti(&ez),
                    v.act_f(i, &ti(&z)).scale(&datum.monomial_i(i, -1, -t - 2, t + 1))
                );
                assert_eq!(tinv(&ez), v.act_f(i, &tinv(&z)).scale(&datum.monomial_i(i, -1, t, 0)));
                let target = datum.reflect_weight(i, &v.space(key.0).weight);
                assert!(ti(&z).keys().all(|k| v.space(k.0).weight == target));
            }
        }
    }
}

#[test]
fn module_operators_realize_algebra_automorphisms() {
    for d in [CartanDatum::b2_super(), CartanDatum::a2(), CartanDatum::spin_rank2()] {
        let c = cover(d);
        let braid = Braid::new(c.clone());
        let gens = braid.generators();
        for l in [[1, 0], [0, 1], [1, 1]] {
            let v = module(&c, &l);
            for key in v.basis() {
                let z = ModuleVector::basis(key);
                for i in 0..2 {
                    for sign in [1i8, -1] {
                        let tz = v.braid(i, sign, &z);
                        for (name, u) in &gens {
                            let lhs = v.braid(i, sign, &v.act(u, &z));
                            let rhs = v.act(&braid.apply(i, sign, u), &tz);
                            assert_eq!(lhs, rhs, "T_{i}^{sign} on {name}, λ={l:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn highest_weight_images_along_reduced_words() {
    let c = cover(CartanDatum::b2_super());
    for l in small_weights(2) {
        let v = module(&c, &l);
        for w in [vec![0], vec![1], vec![0, 1], vec![1, 0, 1], vec![0, 1, 0, 1], vec![1, 0, 1, 0]] {
            let r = highest_weight_braid_image(&v, &w).unwrap();
            assert!(r.holds(), "λ={l:?} word={w:?}");
        }
    }
    let v = module(&c, &[1, 0]);
    assert!(matches!(highest_weight_braid_image(&v, &[0, 0]), Err(ModuleError::NotReduced(_))));
}

#[test]
fn braid_relations_on_modules() {
    for d in [CartanDatum::b2_super(), CartanDatum::a2(), CartanDatum::spin_rank2()] {
        let c = cover(d);
        let datum = c.datum();
        let m = datum.braid_order(0, 1).unwrap() as usize;
        let pij = datum.parity(0) as i64 * datum.parity(1) as i64;
        for l in small_weights(2) {
            let v = module(&c, &l);
            for key in v.basis() {
                let z = ModuleVector::basis(key);
                let w = &v.space(key.0).weight;
                let chi = w.0[0] * w.0[1];
                for sign in [1i8, -1] {
                    let a = v.braid_word(&alternating_word(0, 1, m), sign, &z);
                    let b = v.braid_word(&alternating_word(1, 0, m), sign, &z);
                    assert_eq!(a, b.scale(&QPiScalar::pi_pow(chi * pij)), "λ={l:?} {key:?}");
                }
            }
        }
    }
}

#[test]
fn rank_one_omega() {
    let c = cover(CartanDatum::b2_super());
    let datum = c.datum();
    let v = module(&c, &[1, 1]);
    for key in v.basis() {
        let z = ModuleVector::basis(key).scale(&QPiScalar::q());
        for i in 0..2 {
            let om = |x: &ModuleVector| v.rank1_omega(i, x);
            assert_eq!(om(&om(&om(&om(&z)))), z);
            // T''(z) = π_i^{C(t+1,2)} bar(ω(T'(ω^{-1}(bar z))))
            let t = v.i_weight(i, &key);
            let inner = om(&om(&om(&v.bar(&z))));
            let rhs = v.bar(&om(&v.braid(i, 1, &inner))).scale(&datum.monomial_i(i, 1, 0, choose2(t + 1)));
            assert_eq!(v.braid(i, -1, &z), rhs);
        }
    }
}

fn quasi_r_checks(c: &Arc<Cover>, l: &[i64], mu: &[i64]) {
    let braid = Braid::new(c.clone());
    let m = TensorModule::new(Arc::new(module(c, l)), Arc::new(module(c, mu)));
    for key in m.basis() {
        let z = TensorVector::basis(key);
        for i in 0..c.rank() {
            assert_eq!(m.quasi_r(i, false, &m.quasi_r(i, true, &z)), z);
            assert_eq!(m.quasi_r(i, true, &m.quasi_r(i, false, &z)), z);
            let back = m.factorwise_braid(i, -1, &m.braid(i, 1, &m.quasi_r(i, true, &z)));
            assert_eq!(back, z, "λ={l:?} μ={mu:?} {key:?}");
            let s = m.left().i_weight(i, &key.0);
            let t = m.right().i_weight(i, &key.1);
            let twist = QPiScalar::pi_pow(c.datum().pi_exp(i) * s * t);
            let tt = m.factorwise_braid(i, 1, &z);
            for u in [c.e(i), c.f(i), c.e((i + 1) % c.rank()), c.k(&c.datum().simple_coroot(c.rank() - 1))] {
                let lhs = m.quasi_r(i, false, &m.act(&u, &m.quasi_r(i, true, &z)));
                let rhs = m.factorwise_braid(i, -1, &m.act(&braid.apply(i, 1, &u), &tt)).scale(&twist);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn quasi_r_and_braid_operators_on_tensor_products() {
    let c = cover(CartanDatum::rank1_odd());
    for a in 0..=3 {
        for b in 0..=3 {
            quasi_r_checks(&c, &[a], &[b]);
        }
    }
    quasi_r_checks(&cover(CartanDatum::b2_super()), &[1, 0], &[0, 1]);
}

#[test]
fn tensor_action_matches_coproduct() {
    let c = cover(CartanDatum::b2_super());
    let m = TensorModule::new(Arc::new(module(&c, &[1, 0])), Arc::new(module(&c, &[0, 1])));
    let u = c.mul(&c.e(0), &c.f(1));
    let du = c.coproduct(&u);
    for key in m.basis() {
        let z = TensorVector::basis(key);
        assert_eq!(m.act(&u, &z), m.act_tensor(&du, &z));
    }
}

#[test]
fn verma_identity_in_f() {
    let c = cover(CartanDatum::b2_super());
    for l in [[1, 0], [0, 1], [1, 1], [2, 1]] {
        let r = quantum_verma_identity(c.half(), 0, 1, &Weight(l.to_vec())).unwrap();
        assert!(c.half().equals_mod_serre(&r.x, &r.y), "λ={l:?} a={:?} b={:?}", r.a, r.b);
    }
}

#[test]
fn string_identity_up_to_five() {
    for (d, p) in [(1, 1), (2, 0), (1, 0), (3, 1)] {
        for m in 0..=5 {
            for k in 0..=m {
                let (l, r) = string_identity_sides(m - k, k, d, p);
                assert_eq!(l, r);
            }
        }
    }
}

#[test]
fn gram_matrices_are_invertible() {
    let c = cover(CartanDatum::b2_super());
    let v = module(&c, &[1, 1]);
    let verma = Verma::new(c.clone(), Weight(vec![1, 1]));
    for s in 0..v.spaces().len() {
        let g = v.gram(s);
        let (rp, rm) = qcover::linalg::qpi_rank(&g);
        assert_eq!((rp, rm), (g.len(), g.len()));
        let words = &v.space(s).words;
        for (r, wr) in words.iter().enumerate() {
            for (col, wc) in words.iter().enumerate() {
                let x = qcover::half::HalfElement::basis(wr.clone());
                let y = qcover::half::HalfElement::basis(wc.clone());
                assert_eq!(verma.shapovalov(&x, &y), g[r][col]);
            }
        }
    }
}
