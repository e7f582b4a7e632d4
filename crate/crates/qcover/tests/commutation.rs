use qcover::cover::Cover;
use qcover::root::CartanDatum;
use qcover::scalar::choose2;
use std::sync::Arc;

#[test]
fn divided_power_commutation() {
    for datum in [CartanDatum::b2_super(), CartanDatum::rank1_odd(), CartanDatum::a2()] {
        let u = Cover::new(Arc::new(datum));
        let dat = u.datum().clone();
        for i in 0..dat.rank() {
            for nn in 1..=3i64 {
                for mm in 1..=3i64 {
                    let lhs = u.mul(&u.e_div(i, nn as usize), &u.f_div(i, mm as usize));
                    let mut rhs = u.zero();
                    for t in 0..=nn.min(mm) {
                        let c = dat.monomial_i(i, 1, 0, mm * nn - t * (t + 1) / 2);
                        let term = u.product(&[
                            u.f_div(i, (mm - t) as usize),
                            u.coroot_binomial(i, 2 * t - nn - mm, t),
                            u.e_div(i, (nn - t) as usize),
                        ]);
                        rhs.add_scaled(&term, &c);
                    }
                    assert!(u.equals(&lhs, &rhs), "E^({nn})F^({mm}) i={i}");
                    let lhs = u.mul(&u.f_div(i, nn as usize), &u.e_div(i, mm as usize));
                    let mut rhs = u.zero();
                    for t in 0..=nn.min(mm) {
                        let sign = if t % 2 == 0 { 1 } else { -1 };
                        let c = dat.monomial_i(i, sign, 0, mm * nn - t * (mm + nn));
                        let term = u.product(&[
                            u.e_div(i, (mm - t) as usize),
                            u.coroot_binomial(i, mm + nn - t - 1, t),
                            u.f_div(i, (nn - t) as usize),
                        ]);
                        rhs.add_scaled(&term, &c);
                    }
                    assert!(u.equals(&lhs, &rhs), "F^({nn})E^({mm}) i={i}");
                }
            }
        }
    }
}

fn higher_serre_commutation(u: &Cover, i: usize, j: usize, max_n: usize, max_nm: usize) {
    use qcover::cover::SerreKind;
    let dat = u.datum().clone();
    let aij = dat.a(i, j);
    let pj = dat.parity(j) as i64;
    for n in 1..=max_n {
        let ni = n as i64;
        let top = -ni * aij;
        for m in 0..=top {
            let e = |m: i64| {
                if m < 0 || m > top { u.zero() } else { u.higher_serre(SerreKind::E, i, j, n, m as usize) }
            };
            for big in 1..=max_nm as i64 {
                let lhs = u.mul(&u.e_div(i, big as usize), &e(m));
                let mut rhs = u.zero();
                for k in 0..=big {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let c = dat.monomial_i(i, sign, big * (ni * aij + 2 * m) + (big - 1) * k, big * (ni * pj + m) + choose2(k));
                    let c = &c * &dat.qbinom(i, m + k, k);
                    rhs.add_scaled(&u.mul(&e(m + k), &u.e_div(i, (big - k) as usize)), &c);
                }
                assert!(u.equals(&lhs, &rhs), "E^({big}) e(n={n},m={m})");
                let lhs = u.mul(&u.f_div(i, big as usize), &e(m));
                let mut rhs = u.zero();
                for h in 0..=big {
                    let sign = if h % 2 == 0 { 1 } else { -1 };
                    let c = dat.monomial_i(i, sign, -(big - 1) * h, big * (m + ni * pj) + (big - m) * h);
                    let c = &c * &dat.qbinom(i, -ni * aij - m + h, h);
                    let term = u.product(&[u.jk_tilde(i, 0, -h), e(m - h), u.f_div(i, (big - h) as usize)]);
                    rhs.add_scaled(&term, &c);
                }
                assert!(u.equals(&lhs, &rhs), "F^({big}) e(n={n},m={m})");
            }
        }
    }
}

#[test]
fn higher_serre_commutation_b2_super() {
    let u = Cover::new(Arc::new(CartanDatum::b2_super()));
    higher_serre_commutation(&u, 0, 1, 2, 2);
    higher_serre_commutation(&u, 1, 0, 2, 2);
}

#[test]
fn higher_serre_commutation_a2() {
    let u = Cover::new(Arc::new(CartanDatum::a2()));
    higher_serre_commutation(&u, 0, 1, 2, 2);
}
