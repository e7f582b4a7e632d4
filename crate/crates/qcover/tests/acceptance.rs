//! One line per acceptance criterion, each with its time budget.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use qcover::braid::Braid;
use qcover::cover::{Cover, CoverElement};
use qcover::modules::string_identity_sides;
use qcover::root::{CartanDatum, Coweight, Index};
use qcover::scalar::QPiScalar;
use qcover::verify::{cover_of, run, Suite, SuiteReport};
use std::sync::Arc;
use std::time::{Duration, Instant};

struct Outcome {
    cases: usize,
    failure: Option<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { cases: 0, failure: None }
    }

    fn case(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(context());
        }
    }

    /// Folds the named checks of a suite report into this outcome.
    fn absorb(&mut self, label: &str, report: &SuiteReport, checks: &[&str]) {
        for c in report.checks.iter().filter(|c| checks.is_empty() || checks.contains(&c.name.as_str())) {
            self.cases += c.cases;
            if !c.passed && self.failure.is_none() {
                self.failure = Some(format!("{label} {} {}: {}", report.suite, c.name, c.counterexample.clone().unwrap_or_default()));
            }
        }
    }
}

fn data() -> Vec<(&'static str, CartanDatum)> {
    vec![
        ("rank1-odd", CartanDatum::rank1_odd()),
        ("spin", CartanDatum::spin_rank2()),
        ("b2-super", CartanDatum::b2_super()),
        ("a2", CartanDatum::a2()),
    ]
}

fn suite_on(out: &mut Outcome, suite: Suite, targets: &[(&str, CartanDatum)], checks: &[&str]) {
    for (label, d) in targets {
        let r = run(suite, &cover_of(d.clone()));
        out.absorb(label, &r, checks);
    }
}

fn criterion(number: u32, title: &str, limit_secs: u64, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    body(&mut out);
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(limit_secs);
    let ok = out.failure.is_none() && in_time && out.cases > 0;
    let mut line = format!(
        "[{}] {number:>2}. {title}: {} cases in {:.2}s (limit {limit_secs}s)",
        if ok { "PASS" } else { "FAIL" },
        out.cases,
        elapsed.as_secs_f64()
    );
    if let Some(f) = &out.failure {
        line.push_str(&format!("; first failure: {f}"));
    } else if !in_time {
        line.push_str("; over time");
    } else if out.cases == 0 {
        line.push_str("; nothing checked");
    }
    println!("{line}");
    ok
}

/// Classical rank-2 images of generators at π = +1, coded from the
/// textbook table for simply-laced data.
struct ClassicalOracle {
    u: Arc<Cover>,
}

impl ClassicalOracle {
    fn k(&self, i: Index, e: i64) -> CoverElement {
        let mut c = vec![0; self.u.rank()];
        c[i] = e;
        self.u.k(&Coweight(c))
    }

    fn image(&self, i: Index, inverse: bool, name: &str, j: Index) -> CoverElement {
        let u = &*self.u;
        let minus = QPiScalar::int(-1);
        let v = |e: i64| QPiScalar::q_pow(e);
        let (ei, fi) = (u.e(i), u.f(i));
        match (name, i == j, inverse) {
            ("E", true, false) => u.mul(&self.k(i, 1), &fi).scale(&minus),
            ("F", true, false) => u.mul(&ei, &self.k(i, -1)).scale(&minus),
            ("E", true, true) => u.mul(&fi, &self.k(i, -1)).scale(&minus),
            ("F", true, true) => u.mul(&self.k(i, 1), &ei).scale(&minus),
            ("E", false, false) => u.mul(&u.e(j), &ei).sub(&u.mul(&ei, &u.e(j)).scale(&v(1))),
            ("F", false, false) => u.mul(&fi, &u.f(j)).sub(&u.mul(&u.f(j), &fi).scale(&v(-1))),
            ("E", false, true) => u.mul(&ei, &u.e(j)).sub(&u.mul(&u.e(j), &ei).scale(&v(1))),
            ("F", false, true) => u.mul(&u.f(j), &fi).sub(&u.mul(&fi, &u.f(j)).scale(&v(-1))),
            // K_μ ↦ K_{s_i μ} on simple coroots of a simply-laced datum
            ("K", _, _) => {
                if i == j {
                    self.k(i, -1)
                } else {
                    let mut c = vec![0; u.rank()];
                    c[i] = 1;
                    c[j] = 1;
                    u.k(&Coweight(c))
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Every coefficient is the same at π = +1 and π = −1, so comparing exactly
/// is comparing the π = +1 specializations.
fn pi_free(x: &CoverElement) -> bool {
    x.iter().all(|(_, c)| c.plus() == c.minus())
}

#[test]
fn acceptance() {
    let all = data();
    let b2 = [("b2-super", CartanDatum::b2_super())];
    let mut results = Vec::new();

    results.push(criterion(1, "scalar binomial identities", 5, |o| {
        suite_on(o, Suite::Scalars, &b2, &[]);
    }));

    results.push(criterion(2, "Serre elements lie in the radical", 10, |o| {
        suite_on(o, Suite::Serre, &all, &[]);
    }));

    results.push(criterion(3, "divided-power and higher Serre commutation", 30, |o| {
        suite_on(o, Suite::Commutation, &all, &[]);
    }));

    results.push(criterion(4, "braid inverses on generators and random elements", 30, |o| {
        suite_on(o, Suite::BraidRank2, &all, &["inverse-on-generators", "inverse-on-products", "inverse-on-random-elements"]);
    }));

    results.push(criterion(5, "rank-2 braid relations", 60, |o| {
        suite_on(o, Suite::BraidRank2, &all, &["braid-relation", "divided-power-images", "images-satisfy-relations"]);
    }));

    results.push(criterion(6, "braid operators on simple modules and the spin relation", 60, |o| {
        let targets = [("rank1-odd", CartanDatum::rank1_odd()), ("b2-super", CartanDatum::b2_super())];
        suite_on(
            o,
            Suite::Modules,
            &targets,
            &["inverse-operators", "string-formulas", "operators-intertwine-e-f", "operators-realize-automorphisms", "highest-weight-images"],
        );
        suite_on(o, Suite::Spin, &[("spin", CartanDatum::spin_rank2())], &[]);
    }));

    results.push(criterion(7, "string scalar identity for m <= 5", 5, |o| {
        for (d, p) in [(1, 1), (1, 0), (2, 0), (2, 1), (3, 1)] {
            for m in 0..=5 {
                for k in 0..=m {
                    let (l, r) = string_identity_sides(m - k, k, d, p);
                    o.case(l == r, || format!("d={d} p={p} m={m} k={k}"));
                }
            }
        }
    }));

    results.push(criterion(8, "quantum Verma identity on B2-super", 60, |o| {
        suite_on(o, Suite::Qvi, &b2, &[]);
    }));

    results.push(criterion(9, "PBW orthogonality and basis property", 120, |o| {
        suite_on(o, Suite::PbwOrthogonality, &b2, &["gram-blocks", "longest-word-admissible"]);
        suite_on(o, Suite::PbwOrthogonality, &[("spin", CartanDatum::spin_rank2())], &["gram-blocks"]);
    }));

    results.push(criterion(10, "twisted invariance and norm symmetry", 10, |o| {
        suite_on(o, Suite::PbwOrthogonality, &b2, &["twisted-form-invariance", "norm-symmetry"]);
    }));

    results.push(criterion(11, "integral PBW coordinates of braid images", 30, |o| {
        let targets = [("b2-super", CartanDatum::b2_super()), ("a2", CartanDatum::a2())];
        suite_on(o, Suite::PbwOrthogonality, &targets, &["braid-images-integral"]);
    }));

    results.push(criterion(12, "quasi-R operators on tensor products", 120, |o| {
        let targets = [("rank1-odd", CartanDatum::rank1_odd()), ("b2-super", CartanDatum::b2_super())];
        suite_on(o, Suite::Modules, &targets, &["quasi-r-on-tensor-products"]);
    }));

    results.push(criterion(13, "classical A2 regression at pi = +1", 30, |o| {
        let u = Arc::new(Cover::new(Arc::new(CartanDatum::a2())));
        let braid = Braid::new(u.clone());
        let oracle = ClassicalOracle { u: u.clone() };
        for i in 0..2 {
            for j in 0..2 {
                for inverse in [false, true] {
                    for name in ["E", "F", "K"] {
                        let g = match name {
                            "E" => u.e(j),
                            "F" => u.f(j),
                            _ => oracle.k(j, 1),
                        };
                        let img = braid.apply(i, if inverse { -1 } else { 1 }, &g);
                        let expected = oracle.image(i, inverse, name, j);
                        o.case(pi_free(&img) && u.equals(&img, &expected), || {
                            format!("T_{}^{} on {name}_{}", i + 1, if inverse { -1 } else { 1 }, j + 1)
                        });
                    }
                }
            }
        }
        for s in Suite::ALL {
            suite_on(o, s, &[("a2", CartanDatum::a2())], &[]);
        }
    }));

    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
