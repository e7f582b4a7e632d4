use qcover::cover::Cover;
use qcover::pbw::{PbwError, PlusJ, Side, U0JElement};
use qcover::root::{CartanDatum, RootVec};
use qcover::scalar::QPiScalar;
use std::sync::Arc;

fn plus_j(d: CartanDatum) -> PlusJ {
    PlusJ::new(Arc::new(Cover::new(Arc::new(d))))
}

/// Rank-2 data with larger off-diagonal entries; not all of finite type.
fn wide() -> Vec<CartanDatum> {
    vec![
        CartanDatum::b2_super(),
        CartanDatum::a2(),
        CartanDatum::spin_rank2(),
        CartanDatum::new(vec![vec![2, -3], vec![-1, 2]], vec![0, 0], vec![1, 3]).unwrap(),
        CartanDatum::new(vec![vec![2, -4], vec![-1, 2]], vec![1, 0], vec![1, 4]).unwrap(),
        CartanDatum::new(vec![vec![2, -2], vec![-2, 2]], vec![1, 1], vec![1, 1]).unwrap(),
        CartanDatum::new(vec![vec![2, -6], vec![-2, 2]], vec![1, 1], vec![1, 3]).unwrap(),
    ]
}

fn pairs(p: &PlusJ) -> Vec<(usize, usize)> {
    let n = p.rank();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect()
}

#[test]
fn generator_norm() {
    let p = plus_j(CartanDatum::rank1_odd());
    let d = p.datum();
    let expected = (&QPiScalar::one() - &d.monomial_i(0, 1, 2, 1)).inv().unwrap();
    assert_eq!(p.form(&p.e(0), &p.e(0)), U0JElement::term(p.j_zero(), expected));
}

#[test]
fn decomposition_is_unique_and_reconstructs() {
    let p = plus_j(CartanDatum::b2_super());
    let x = p.mul(&p.e(0), &p.e(1));
    let y = p.product(&[p.e(1), p.e(0), p.e(0), p.e(1)]);
    let z = p.j_times(&p.j_tilde(0), &p.mul(&p.e(1), &p.e_div(0, 2)));
    for v in [x, y, z] {
        for i in 0..2 {
            for e_side in [Side::Left, Side::Right] {
                for k_side in [Side::Left, Side::Right] {
                    let parts = p.split(&v, i, e_side, k_side).unwrap();
                    assert!(p.equals(&p.recombine(&parts, i, e_side), &v), "i={i} {e_side:?} {k_side:?}");
                    for (_, xt) in &parts {
                        assert!(p.in_kernel(i, k_side, xt));
                    }
                }
            }
        }
    }
}

#[test]
fn coproduct_of_e_small() {
    for d in wide() {
        let p = plus_j(d);
        for (i, j) in pairs(&p) {
            for m in 0..=(-p.datum().a(i, j)) as usize {
                assert!(p.coproduct_e_small_check(i, j, m, false), "e i={i} j={j} m={m}");
                assert!(p.coproduct_e_small_check(i, j, m, true), "e' i={i} j={j} m={m}");
            }
        }
    }
}

#[test]
fn e_small_spans_kernels() {
    let p = plus_j(CartanDatum::b2_super());
    for (i, j) in pairs(&p) {
        for m in 0..=(-p.datum().a(i, j)) as usize {
            assert!(p.in_kernel(i, Side::Left, &p.e_small(i, j, m)));
            assert!(p.in_kernel(i, Side::Right, &p.e_small_prime(i, j, m)));
        }
    }
}

#[test]
fn norms_of_e_small_match() {
    for d in wide() {
        let p = plus_j(d);
        for (i, j) in pairs(&p) {
            for m in 0..=(-p.datum().a(i, j)) as usize {
                assert!(p.norm_symmetry(i, j, m), "i={i} j={j} m={m}");
            }
        }
    }
}

#[test]
fn braid_exchanges_e_small() {
    for d in wide() {
        let p = plus_j(d);
        for (i, j) in pairs(&p) {
            for m in 0..=(-p.datum().a(i, j)) as usize {
                assert!(p.braid_on_e_small(i, j, m, 1).unwrap(), "T i={i} j={j} m={m}");
                assert!(p.braid_on_e_small(i, j, m, -1).unwrap(), "T^-1 i={i} j={j} m={m}");
            }
        }
    }
}

#[test]
fn braid_preserves_twisted_form() {
    let p = plus_j(CartanDatum::b2_super());
    for i in 0..2 {
        for nu in [[0, 1], [1, 1], [0, 2], [1, 2], [2, 1], [2, 2]] {
            assert!(p.twisted_invariance(i, &RootVec(nu.to_vec())).unwrap(), "i={i} nu={nu:?}");
        }
    }
}

#[test]
fn inverse_braid_maps_kernels() {
    let p = plus_j(CartanDatum::b2_super());
    for i in 0..2 {
        for nu in [[1, 1], [0, 2], [1, 2], [2, 1]] {
            for k in p.kernel_basis(i, Side::Left, &RootVec(nu.to_vec())) {
                let x = p.from_half(&k);
                let y = p.apply_braid(i, -1, &x).unwrap();
                assert!(p.in_kernel(i, Side::Right, &y), "i={i} nu={nu:?}");
                assert!(p.equals(&p.apply_braid(i, 1, &y).unwrap(), &x));
            }
        }
    }
}

#[test]
fn braid_intertwines_truncated_coproducts() {
    let p = plus_j(CartanDatum::b2_super());
    for i in 0..2 {
        for nu in [[1, 1], [1, 2], [2, 1], [2, 2], [1, 3]] {
            for k in p.kernel_basis(i, Side::Left, &RootVec(nu.to_vec())) {
                let x = p.from_half(&k);
                assert!(p.truncated_coproduct_intertwines(&x, i).unwrap(), "i={i} nu={nu:?}");
                let jx = p.j_times(&p.j_tilde(0), &x);
                assert!(p.truncated_coproduct_intertwines(&jx, i).unwrap(), "J i={i} nu={nu:?}");
            }
        }
    }
}

#[test]
fn reduced_words_are_admissible() {
    for d in [CartanDatum::b2_super(), CartanDatum::a2(), CartanDatum::spin_rank2()] {
        let p = plus_j(d);
        let w = p.datum().longest_word().unwrap();
        assert!(p.check_admissible(&w).verified, "{w:?}");
        let prefix = &w[..2];
        assert!(p.check_admissible(prefix).verified);
    }
}

#[test]
fn b2_pbw_basis_is_orthogonal() {
    let p = plus_j(CartanDatum::b2_super());
    let w = p.datum().longest_word().unwrap();
    for sign in [1i8, -1] {
        let basis = p.pbw_basis(&w, sign, 3).unwrap();
        let cert = p.gram_certificate(&basis);
        for b in &cert.blocks {
            assert!(b.holds(), "sign={sign} {b:?}");
        }
    }
}

#[test]
fn spin_pbw_basis_is_orthogonal() {
    let p = plus_j(CartanDatum::spin_rank2());
    let w = p.datum().longest_word().unwrap();
    let basis = p.pbw_basis(&w, 1, 3).unwrap();
    assert!(p.gram_certificate(&basis).holds());
}

#[test]
fn l_element_factorizes_form() {
    let p = plus_j(CartanDatum::b2_super());
    let w = p.datum().longest_word().unwrap();
    let x = p.one();
    let c = [1, 0, 1, 0];
    let l1 = p.l_element(&w, &c, 2, &x).unwrap();
    let c2 = [0, 1, 0, 0];
    let l2 = p.l_element(&w, &c2, 2, &x).unwrap();
    assert!(p.form(&l1, &l2).is_zero() || p.weights(&l1) != p.weights(&l2));
    let n = p.form(&l1, &l1);
    assert!(qcover::pbw::u0j_is_regular(&n, 2));
}

#[test]
fn non_reduced_word_is_rejected() {
    let p = plus_j(CartanDatum::b2_super());
    assert!(matches!(p.pbw_basis(&[0, 0], 1, 2), Err(PbwError::NotReduced(_))));
}

#[test]
fn coordinates_reconstruct() {
    let p = plus_j(CartanDatum::b2_super());
    let w = p.datum().longest_word().unwrap();
    let basis = p.pbw_basis(&w, 1, 3).unwrap();
    let x = p.product(&[p.e(1), p.e(0), p.e(1)]);
    let coords = p.pbw_coordinates(&x, &basis).unwrap();
    assert!(p.equals(&p.reconstruct(&coords, &basis), &x));
}

#[test]
fn braid_images_are_integral() {
    for d in [CartanDatum::b2_super(), CartanDatum::a2()] {
        let p = plus_j(d);
        for i in 0..2 {
            for j in 0..2 {
                for n in 1..=3 {
                    for sign in [1i8, -1] {
                        for is_e in [true, false] {
                            assert!(p.integral_image(i, sign, j, n, is_e).unwrap(), "i={i} j={j} n={n} {sign} {is_e}");
                        }
                    }
                }
            }
        }
    }
}
