use qcover::braid::Braid;
use qcover::cover::Cover;
use qcover::root::CartanDatum;
use qcover::scalar::QPiScalar;
use std::sync::Arc;

fn targets() -> Vec<CartanDatum> {
    vec![CartanDatum::b2_super(), CartanDatum::a2(), CartanDatum::spin_rank2(), CartanDatum::rank1_odd()]
}

#[test]
fn inverse_on_all_generators() {
    for datum in targets() {
        let b = Braid::new(Arc::new(Cover::new(Arc::new(datum.clone()))));
        for (name, g) in b.generators() {
            for i in 0..datum.rank() {
                assert!(b.cover().equals(&b.apply(i, -1, &b.apply(i, 1, &g)), &g), "{name} i={i}");
                assert!(b.cover().equals(&b.apply(i, 1, &b.apply(i, -1, &g)), &g), "{name} i={i}");
            }
        }
    }
}

#[test]
fn images_satisfy_defining_relations() {
    for datum in targets() {
        let b = Braid::new(Arc::new(Cover::new(Arc::new(datum.clone()))));
        let u = b.cover();
        let n = datum.rank();
        for i in 0..n {
            for sign in [1i8, -1] {
                let te = |k: usize| b.generator_image(i, sign, true, k, 1);
                let tf = |k: usize| b.generator_image(i, sign, false, k, 1);
                let tt = |t: &qcover::cover::Torus| u.torus(b.torus_image(i, t));
                for k in 0..n {
                    for l in 0..n {
                        let pp = (datum.parity(k) * datum.parity(l)) as i64;
                        let mut rel = u.mul(&te(k), &tf(l)).sub(&u.mul(&tf(l), &te(k)).scale(&QPiScalar::pi_pow(pp)));
                        if k == l {
                            let num = tt(&u.tilde_torus(k, 1, 1)).sub(&tt(&u.tilde_torus(k, 0, -1)));
                            rel = rel.sub(&num.scale(u.commutator_denominator(k)));
                        }
                        assert!(u.is_zero(&rel), "T{i}^{sign} [E{k},F{l}]");
                        if k != l {
                            for plus in [true, false] {
                                let img = u.apply_map(&u.serre(k, l, plus), &te, &tf, &tt, false);
                                assert!(u.is_zero(&img), "T{i}^{sign} serre({k},{l},{plus})");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rank_two_braid_relation_and_divided_powers() {
    for d in [CartanDatum::b2_super(), CartanDatum::a2(), CartanDatum::spin_rank2()] {
        let b = Braid::new(Arc::new(Cover::new(Arc::new(d.clone()))));
        let r = b.verify_braid_relation(0, 1).unwrap();
        assert!(r.holds(), "{:?}", d.parities());
        let u = b.cover();
        for i in 0..2 {
            for j in 0..2 {
                for n in 1..=3usize {
                    for sign in [1i8, -1] {
                        let e = b.apply(i, sign, &u.e_div(j, n));
                        assert!(u.equals(&e, &b.generator_image(i, sign, true, j, n)));
                        let f = b.apply(i, sign, &u.f_div(j, n));
                        assert!(u.equals(&f, &b.generator_image(i, sign, false, j, n)));
                    }
                }
            }
        }
    }
}
