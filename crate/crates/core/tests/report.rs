mod common;

use common::*;
use flexcap_core::defaults::{capacity_market, reliability_reserve};
use flexcap_core::domain::*;
use flexcap_core::report::*;
use flexcap_core::runner::run;
use proptest::prelude::*;

fn ocgt_rate() -> f64 {
    payment_rate(400.0, 15.0, 25.0, 0.04)
}

#[test]
fn payment_rate_is_ocgt_annuity_plus_fixed() {
    assert!((ocgt_rate() - 40.6048).abs() < 1e-4);
    assert!((ocgt_rate() - 40.61).abs() < 0.01);
}

#[test]
fn capacity_market_levy_examples() {
    let l = capacity_market_levy(101.3, 40.61, 700.0);
    assert!((l - 5.88).abs() < 0.005, "{l}");
    assert!((l - 5.9).abs() < 0.1);
    assert_eq!(capacity_market_levy(0.0, 40.61, 700.0), 0.0);
    assert!((capacity_market_levy(101.3, 40.61, 350.0) - 11.75).abs() < 0.005);
}

#[test]
fn reserve_levy_examples() {
    let l = reserve_levy(35.0, 40.61, &[], 500.0, 130.4, 700.0);
    assert!((l - 2.03).abs() < 0.01, "{l}");
    assert_eq!(reserve_levy(0.0, 40.61, &[], 500.0, 130.4, 700.0), 0.0);
    // one activated TWh at 500 with 130.4 variable cost
    let with = reserve_levy(35.0, 40.61, &[1000.0], 500.0, 130.4, 700.0);
    assert!((with - (l - 1e6 * (500.0 - 130.4) / 700e6)).abs() < 1e-12);
}

#[test]
fn price_duration_examples() {
    assert_eq!(price_duration(&[1.0, 3.0, 2.0]), vec![3.0, 2.0, 1.0]);
    assert_eq!(price_duration(&[4.0; 5]), vec![4.0; 5]);
}

#[test]
fn ratio_edge_cases() {
    assert_eq!(ratio(0.0, 0.0), 1.0);
    assert!(ratio(0.0, 1.0).is_infinite());
    assert_eq!(ratio(2.0, 5.0), 2.5);
}

fn results() -> (ScenarioResult, ScenarioResult) {
    let mut bundle = thermal_bundle(48);
    bundle.technologies.push(battery("bat"));
    let mut out = Vec::new();
    for mut m in [capacity_market(100.0), reliability_reserve(500.0, 100.0)] {
        m.eligible_firm = vec!["ccgt".into(), "ocgt".into()];
        let cfg = toy_config(&bundle, m, 48);
        out.push(run(&cfg, &bundle, &solver()).unwrap());
    }
    let rr = out.pop().unwrap();
    (out.pop().unwrap(), rr)
}

#[test]
fn window_metrics_follow_the_levy_formulas() {
    let (cm, rr) = results();
    let m = &cm.metrics[0];
    let w = &cm.windows[0];
    let annual = w.demand_twh() * 8760.0 / 48.0;
    assert!((m.levy - capacity_market_levy(100.0, ocgt_rate(), annual)).abs() < 1e-9);
    assert!((m.supply_cost - m.avg_price - m.levy).abs() < 1e-9);
    assert!((m.supply_cost_simple - m.avg_price_simple - m.levy).abs() < 1e-9);
    let weighted: f64 =
        w.prices.iter().zip(&w.demand).map(|(p, d)| p * d).sum::<f64>() / w.demand.iter().sum::<f64>();
    assert!((m.avg_price - weighted).abs() < 1e-9);
    let r = &rr.metrics[0];
    assert!(r.levy >= 0.0);
    assert_eq!(r.activation_hours, rr.windows[0].activation_hours());
}

#[test]
fn summarize_compares_matching_results() {
    let (cm, rr) = results();
    let same = summarize(&cm, &cm).unwrap();
    assert!(same.iter().all(|r| r.ratio == 1.0), "{same:?}");
    let rows = summarize(&cm, &rr).unwrap();
    let size = rows.iter().find(|r| r.section == "reserve" && r.key == "size").unwrap();
    assert_eq!(size.market, 0.0);
    assert!(size.reserve > 0.0);
    for s in ["power", "avg-price", "levy", "supply-cost", "supply-cost-simple", "activation-hours"] {
        assert!(rows.iter().any(|r| r.section == s), "{s}");
    }
    let mut short = rr.clone();
    short.windows.clear();
    short.metrics.clear();
    assert!(summarize(&cm, &short).is_err());
    let mut other = rr.clone();
    other.input_hash = "x".into();
    assert!(summarize(&cm, &other).is_err());
}

#[test]
fn flex_families_always_appear() {
    let (cm, _) = results();
    let f = flex_by_family(&cm, &cm.installed.flex_energy);
    assert_eq!(f.len(), FlexFamily::ALL.len());
}

proptest! {
    #[test]
    fn price_duration_is_a_sorted_permutation(v in prop::collection::vec(-1e3f64..1e4, 0..300)) {
        let out = price_duration(&v);
        prop_assert_eq!(out.len(), v.len());
        prop_assert!(out.windows(2).all(|w| w[0] >= w[1]));
        let mut a = v.clone();
        let mut b = out.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reserve_levy_falls_with_activation(
        reserve in 0.0f64..60.0,
        records in prop::collection::vec(0.0f64..20.0, 0..50),
        extra in 1e-3f64..20.0,
        mc in 0.0f64..499.0,
        demand in 100.0f64..900.0,
    ) {
        let base = reserve_levy(reserve, 40.61, &records, 500.0, mc, demand);
        let mut more = records.clone();
        more.push(extra);
        let after = reserve_levy(reserve, 40.61, &more, 500.0, mc, demand);
        prop_assert!(after < base);
    }

    #[test]
    fn capacity_levy_is_non_negative_and_linear(t in 0.0f64..200.0, rate in 0.0f64..100.0, d in 1.0f64..1000.0) {
        let l = capacity_market_levy(t, rate, d);
        prop_assert!(l >= 0.0);
        prop_assert!((capacity_market_levy(2.0 * t, rate, d) - 2.0 * l).abs() <= 1e-12 * (1.0 + l));
    }
}
