use qcover::root::CartanDatum;
use qcover::verify::{cover_of, run, run_all, Suite};

fn targets() -> Vec<(&'static str, CartanDatum)> {
    vec![
        ("b2-super", CartanDatum::b2_super()),
        ("a2", CartanDatum::a2()),
        ("spin", CartanDatum::spin_rank2()),
        ("rank1-odd", CartanDatum::rank1_odd()),
    ]
}

#[test]
fn every_suite_passes_on_every_target() {
    for (name, d) in targets() {
        for r in run_all(&cover_of(d)) {
            for c in &r.checks {
                assert!(c.passed, "{name} {} {}: {:?}", r.suite, c.name, c.counterexample);
            }
        }
    }
}

#[test]
fn suites_are_sorted_and_named() {
    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    let err = "nope".parse::<Suite>().unwrap_err();
    assert!(err.to_string().contains("pbw-orthogonality"));
}

#[test]
fn reports_are_deterministic() {
    let c = cover_of(CartanDatum::b2_super());
    let a = run(Suite::BraidRank2, &c);
    let b = run(Suite::BraidRank2, &c);
    let names: Vec<&str> = a.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.cases() > 0);
}

#[test]
fn rank_one_skips_pair_checks() {
    let r = run(Suite::Serre, &cover_of(CartanDatum::rank1_odd()));
    assert!(r.passed());
    assert_eq!(r.cases(), 0);
}
