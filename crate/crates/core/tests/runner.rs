mod common;

use std::collections::BTreeMap;

use common::*;
use flexcap_core::defaults::{capacity_market, reliability_reserve};
use flexcap_core::domain::*;
use flexcap_core::formulation::Stage;
use flexcap_core::lp::{LpSolution, LpStatus};
use flexcap_core::report::price_duration;
use flexcap_core::runner::*;

fn gas(cap: f64) -> Technology {
    Technology {
        capacity: CapacityBound::Fixed(cap),
        ..dispatchable("gas", 400.0, 15.0, 26.03, 0.4)
    }
}

fn eligible(mut m: Mechanism, ids: &[&str]) -> Mechanism {
    m.eligible_firm = ids.iter().map(|s| s.to_string()).collect();
    m
}

#[test]
fn flat_toy_prices_are_the_marginal_cost() {
    let bundle = toy_bundle(vec![gas(12.0)], |_| 10.0);
    let cfg = toy_config(&bundle, energy_only(), 24);
    let solved = solve_stage(&cfg, &bundle, &solver(), cfg.invest_window, Stage::Invest).unwrap();
    let p = extract_prices(&solved.solution, &solved.index).unwrap();
    assert_eq!(p.len(), 24);
    for v in p {
        assert!((v - 26.03 / 0.4).abs() < 1e-6);
    }
}

fn scarcity_toy() -> InputBundle {
    let mut g = gas(10.0);
    g.id = "ocgt".into();
    let mut b = toy_bundle(vec![g, dispatchable("base", 1500.0, 30.0, 10.0, 0.5)], |h| {
        if h == 7 {
            12.0
        } else {
            8.0 + (h % 3) as f64 * 0.5
        }
    });
    b.technologies[1].capacity = CapacityBound::Fixed(4.0);
    b
}

#[test]
fn reserve_toy_prices_the_scarcity_hour_at_the_activation_price() {
    let bundle = scarcity_toy();
    let cfg = toy_config(&bundle, eligible(reliability_reserve(500.0, 20.0), &["ocgt", "base"]), 24);
    let caps = InstalledCapacities {
        power: BTreeMap::from([("ocgt".to_string(), 10.0), ("base".to_string(), 1.0)]),
        ..Default::default()
    };
    let solved = solve_stage(
        &cfg,
        &bundle,
        &solver(),
        cfg.invest_window,
        Stage::Dispatch {
            capacities: &caps,
            reserve_size: 5.0,
        },
    )
    .unwrap();
    assert_contract(&solved.problem, &solved.solution);
    let p = extract_prices(&solved.solution, &solved.index).unwrap();
    for (h, v) in p.iter().enumerate() {
        if h == 7 {
            assert!((v - 500.0).abs() < 1e-4, "{v}");
        } else {
            assert!(*v < 500.0);
        }
    }
    let w = decode_window(&solved);
    assert_eq!(w.activation_hours(), 1);
    assert!((w.reserve_energy() - 1.0).abs() < 1e-6);
    assert!(w.unserved_energy() < 1e-9);
    let pdc = price_duration(&p);
    assert!((pdc[0] - 500.0).abs() < 1e-4);
    assert!(pdc.windows(2).all(|x| x[0] >= x[1]));
    // below the reserve, the merit order sets the price
    assert!((pdc[1] - 26.03 / 0.4).abs() < 1e-6);
}

#[test]
fn reserve_shortfall_is_served_by_the_slack() {
    let bundle = scarcity_toy();
    let cfg = toy_config(&bundle, eligible(reliability_reserve(500.0, 20.0), &["ocgt", "base"]), 24);
    let caps = InstalledCapacities {
        power: BTreeMap::from([("ocgt".to_string(), 10.0), ("base".to_string(), 1.0)]),
        ..Default::default()
    };
    let solved = solve_stage(
        &cfg,
        &bundle,
        &solver(),
        cfg.invest_window,
        Stage::Dispatch {
            capacities: &caps,
            reserve_size: 0.5,
        },
    )
    .unwrap();
    let w = decode_window(&solved);
    assert!((w.unserved_energy() - 0.5).abs() < 1e-6);
    assert!((w.prices[7] - cfg.unserved_cost()).abs() < 1e-4);
}

#[test]
fn capacity_market_toy_stays_below_the_ocgt_cost() {
    let bundle = thermal_bundle(24);
    let mut cfg = toy_config(&bundle, eligible(capacity_market(120.0), &["ccgt", "ocgt"]), 24);
    cfg.reserve_technology = "ocgt".into();
    let r = run(&cfg, &bundle, &solver()).unwrap();
    let max = r.windows[0].prices.iter().cloned().fold(f64::MIN, f64::max);
    assert!(max <= 130.4 + 1e-3);
    assert!(r.windows[0].unserved_energy() < 1e-9);
    assert_eq!(r.reserve_size, 0.0);
}

#[test]
fn non_optimal_solutions_have_no_prices() {
    let idx = flexcap_core::formulation::ModelIndex::default();
    let s = LpSolution::non_optimal(LpStatus::Infeasible);
    assert_eq!(extract_prices(&s, &idx), Err(LpStatus::Infeasible));
}

#[test]
fn infeasible_invest_names_the_hour() {
    let bundle = toy_bundle(vec![gas(5.0)], |h| if h == 3 { 9.0 } else { 4.0 });
    let cfg = toy_config(&bundle, energy_only(), 24);
    let err = invest(&cfg, &bundle, &solver()).unwrap_err();
    match err {
        RunError::NotOptimal { status, detail, .. } => {
            assert_eq!(status, LpStatus::Infeasible);
            assert!(detail.contains("balance[3]"), "{detail}");
        }
        other => panic!("{other}"),
    }
}

#[test]
fn run_validates_first() {
    let bundle = thermal_bundle(24);
    let mut cfg = toy_config(&bundle, eligible(reliability_reserve(100.0, 120.0), &["ccgt", "ocgt"]), 24);
    cfg.reserve_technology = "ocgt".into();
    match run(&cfg, &bundle, &solver()) {
        Err(RunError::Invalid(v)) => assert!(v.iter().any(|x| x.field == "mechanism.activation_price")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn both_scenarios_share_inputs_and_dispatch_costs_no_less() {
    let mut bundle = thermal_bundle(48);
    bundle.technologies.push(battery("bat"));
    let target = 100.0;
    let mut results = Vec::new();
    for m in [capacity_market(target), reliability_reserve(500.0, target)] {
        let cfg = toy_config(&bundle, eligible(m, &["ccgt", "ocgt"]), 48);
        let inv = invest(&cfg, &bundle, &solver()).unwrap();
        let (solved, w) = dispatch(&cfg, &bundle, &solver(), &inv, cfg.invest_window).unwrap();
        assert_contract(&solved.problem, &solved.solution);
        let a = inv.solved.index.total_cost(inv.solved.solution.objective);
        let b = solved.index.total_cost(solved.solution.objective);
        assert!(b >= a - 1e-6 * a.abs(), "{b} < {a}");
        assert_eq!(w.prices.len(), 48);
        assert!(w.prices.iter().all(|p| *p >= -1e-9));
        results.push(assemble(&cfg, &bundle, &inv, vec![w]));
    }
    let (cm, rr) = (&results[0], &results[1]);
    assert_eq!(cm.windows[0].window, rr.windows[0].window);
    assert_eq!(cm.windows[0].demand.len(), rr.windows[0].demand.len());
    assert!(rr.reserve_size > 0.0);
    let firm = rr.installed.firm(&["ccgt".into(), "ocgt".into()]);
    assert!((firm + rr.reserve_size - target).abs() < 1e-6 || firm >= target);
    for m in &cm.metrics {
        assert!((m.supply_cost - m.avg_price - m.levy).abs() < 1e-9);
    }
}

#[test]
fn reoptimized_flex_differs_per_window_only_in_flex() {
    let mut bundle = thermal_bundle(24);
    bundle.flex.push(FlexOption {
        id: "dr".into(),
        family: FlexFamily::IndustryDr,
        power: 3000.0,
        duration_cap: 3.0,
        energy_invest_cost: 0.5,
        activation_cost_tiers: vec![ActivationTier { up_to: 1.0, cost: 5.0 }],
        storage_efficiency: 1.0,
        standing_loss: 0.0,
        energy_upper_bound: None,
        shedding: false,
    });
    let mut cfg = toy_config(&bundle, eligible(capacity_market(100.0), &["ccgt", "ocgt"]), 24);
    cfg.flex_mode = FlexMode::ReoptimizePerYear;
    assert!(reoptimizes_flex(&cfg));
    let inv = invest(&cfg, &bundle, &solver()).unwrap();
    let (solved, w) = dispatch(&cfg, &bundle, &solver(), &inv, cfg.invest_window).unwrap();
    assert!(solved.index.flex_energy.contains_key("dr"));
    assert!(solved.index.capacity.is_empty());
    assert!(w.flex_energy.contains_key("dr"));
}
