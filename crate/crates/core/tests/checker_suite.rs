use proptest::prelude::*;

use qgraph::checker::{
    check_chain, check_eq_within, check_ids, check_le, check_le_exact, check_pendant_diameter, random_graph, run_suite,
    Estimate, Family, GraphParams, Status, SuiteConfig,
};

fn config(checks: &[&str], instances: usize) -> SuiteConfig {
    SuiteConfig {
        instances,
        k_max: 6,
        elements_per_edge: 16,
        ..SuiteConfig::default()
    }
    .only(checks)
}

#[test]
fn suite_is_deterministic() {
    let c = config(&["strength_change", "deltaprime_gluing", "standard_upper"], 4);
    let a = run_suite(&c).unwrap().to_json_string();
    let b = run_suite(&c).unwrap().to_json_string();
    assert_eq!(a, b);
}

#[test]
fn different_seeds_give_different_instances() {
    let mut c = config(&["deltaprime_gluing"], 3);
    let a = run_suite(&c).unwrap();
    c.seed = 99;
    let b = run_suite(&c).unwrap();
    assert_ne!(a.to_json_string(), b.to_json_string());
}

#[test]
fn selection_runs_only_the_named_checks() {
    let r = run_suite(&config(&["flower", "graph_scaling"], 2)).unwrap();
    let ids: Vec<&str> = r.reports.iter().map(|r| r.check_id.as_str()).collect();
    assert_eq!(ids, vec!["flower", "graph_scaling"]);
    assert!(r.report("strength_change").is_none());
    assert_eq!(r.report("flower").unwrap().results.len(), 2);
}

#[test]
fn unknown_and_empty_selections_are_rejected() {
    assert!(SuiteConfig::default().only(&["no_such_check"]).validate().is_err());
    assert!(SuiteConfig::default().only(&[]).validate().is_err());
    assert!(SuiteConfig::from_json_str(r#"{"instances":0}"#).is_err());
    assert!(SuiteConfig::from_json_str(r#"{"bogus":1}"#).is_err());
    let c = SuiteConfig::from_json_str(r#"{"seed":7,"checks":["flower"]}"#).unwrap();
    assert_eq!(c.seed, 7);
    assert_eq!(c.instances, SuiteConfig::default().instances);
}

#[test]
fn every_check_id_is_selectable() {
    let ids = check_ids();
    assert_eq!(ids.len(), 27);
    for id in ids {
        SuiteConfig::default().only(&[id]).validate().unwrap();
    }
}

#[test]
fn flipped_deltaprime_sign_is_detected() {
    let mut c: SuiteConfig = serde_json::from_str(r#"{"fault":"FlipDeltaPrimeSign"}"#).unwrap();
    c.instances = 10;
    c.k_max = 6;
    c.elements_per_edge = 16;
    let c = c.only(&["deltaprime_gluing", "strength_change"]);
    let faulty = run_suite(&c).unwrap();
    assert!(faulty.totals.fail > 0, "{:?}", faulty.totals);
    assert_eq!(faulty.exit_code(), 1);
    let clean = run_suite(&SuiteConfig { fault: None, ..c }).unwrap();
    assert_eq!(clean.totals.fail, 0, "{:?}", clean.totals);
    assert_eq!(clean.exit_code(), 0);
}

#[test]
fn csv_rows_match_the_header() {
    let r = run_suite(&config(&["standard_upper"], 2)).unwrap();
    let rows = r.to_csv_rows();
    assert!(!rows.is_empty());
    assert_eq!(rows[0].len(), qgraph::checker::SuiteReport::CSV_HEADER.len());
    assert_eq!(rows[0][0], "standard_upper");
}

#[test]
fn pendant_diameter_holds_on_random_trees() {
    for seed in 0..20 {
        let t = random_graph(&GraphParams::default().family(Family::Standard).tree(), seed).unwrap();
        let v = check_pendant_diameter(&t).unwrap();
        assert_eq!(v.status, Status::Pass, "seed {seed}: {v:?}");
    }
}

fn estimate() -> impl Strategy<Value = Estimate> {
    (-100.0f64..100.0, 0.0f64..1.0).prop_map(|(value, error)| Estimate { value, error })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verdicts_follow_the_budget(l in estimate(), r in estimate()) {
        let v = check_le("x <= y", l, r);
        let floor = 1e-9 * (1.0 + l.value.abs().max(r.value.abs()));
        prop_assert_eq!(v.margin, r.value - l.value);
        prop_assert!((v.error_budget - (l.error + r.error + floor)).abs() <= 1e-15 * v.error_budget);
        let expected = if v.margin >= -floor {
            Status::Pass
        } else if v.margin < -v.error_budget {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        prop_assert_eq!(v.status, expected);
    }

    #[test]
    fn exact_sides_never_give_inconclusive(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let v = check_le("a <= b", Estimate::exact(a), Estimate::exact(b));
        prop_assert_ne!(v.status, Status::Inconclusive);
        prop_assert_eq!(v.status == Status::Pass, b - a >= -1e-9 * (1.0 + a.abs().max(b.abs())));
        prop_assert_ne!(check_le_exact("a <= b", a, b, 0.0).status, Status::Inconclusive);
    }

    #[test]
    fn equality_is_symmetric(a in -10.0f64..10.0, b in -10.0f64..10.0, budget in 0.0f64..1.0) {
        prop_assert_eq!(check_eq_within("a = b", a, b, budget).status, check_eq_within("b = a", b, a, budget).status);
    }

    #[test]
    fn chains_compare_neighbours(v in prop::collection::vec(estimate(), 2..8)) {
        let labels: Vec<String> = (0..v.len()).map(|i| format!("x{i}")).collect();
        let c = check_chain(&labels, &v);
        prop_assert_eq!(c.len(), v.len() - 1);
        for (i, w) in c.iter().enumerate() {
            prop_assert_eq!(w.lhs, v[i].value);
            prop_assert_eq!(w.rhs, v[i + 1].value);
        }
    }
}
