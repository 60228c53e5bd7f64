#![allow(dead_code)]

use std::collections::BTreeMap;

use flexcap_core::domain::*;
use flexcap_core::lp::{assess, ReferenceSimplex, SimplexOptions, Solver, Tolerances};

pub const WINDOW: i32 = 2009;
/// Hour of year of July 1, 00:00 in a non-leap year.
const JULY: usize = 181 * 24;

/// Two calendar-year series whose window 2009 reads `f(window_hour)`.
pub fn window_series(unit: SeriesUnit, f: impl Fn(usize) -> f64) -> BTreeMap<i32, HourlySeries> {
    let first: Vec<f64> = (0..8760).map(|k| if k >= JULY { f(k - JULY) } else { f(0) }).collect();
    let second: Vec<f64> = (0..8760).map(|k| if k < JULY { f(8760 - JULY + k) } else { f(0) }).collect();
    BTreeMap::from([
        (WINDOW, HourlySeries::new(WINDOW, unit, first).unwrap()),
        (WINDOW + 1, HourlySeries::new(WINDOW + 1, unit, second).unwrap()),
    ])
}

pub fn dispatchable(id: &str, overnight: f64, fixed: f64, fuel: f64, eff: f64) -> Technology {
    Technology {
        id: id.into(),
        kind: TechKind::Dispatchable,
        capacity: CapacityBound::free(),
        lifetime: 25.0,
        overnight_costs: overnight,
        fixed_costs: fixed,
        efficiency: eff,
        carbon_content: 0.0,
        fuel_costs: fuel,
        var_costs: 0.0,
        series: None,
        storage: None,
        reservoir_energy: None,
    }
}

pub fn battery(id: &str) -> Technology {
    let free = |o: f64| CapacitySpec {
        capacity: CapacityBound::free(),
        overnight_costs: o,
        fixed_costs: 0.0,
    };
    Technology {
        kind: TechKind::Storage,
        capacity: CapacityBound::Fixed(0.0),
        storage: Some(StorageParams {
            charge: free(50.0),
            discharge: free(0.0),
            energy: free(100.0),
            charge_efficiency: 0.95,
            discharge_efficiency: 0.95,
            standing_loss: 0.001,
            charge_var_costs: 0.1,
            discharge_var_costs: 0.1,
        }),
        ..dispatchable(id, 0.0, 0.0, 0.0, 1.0)
    }
}

/// Bundle with a `load` series drawn from `load(window_hour)`.
pub fn toy_bundle(technologies: Vec<Technology>, load: impl Fn(usize) -> f64) -> InputBundle {
    let mut series = BTreeMap::new();
    series.insert("load".to_string(), window_series(SeriesUnit::GwEl, load));
    InputBundle {
        technologies,
        flex: Vec::new(),
        process_heat: None,
        district_heat: None,
        load_series: "load".into(),
        series,
    }
}

pub fn energy_only() -> Mechanism {
    Mechanism {
        variant: MechanismKind::EnergyOnly,
        eligible_firm: Vec::new(),
    }
}

/// Config over the first `hours` of window 2009 with no demand uplift.
pub fn toy_config(bundle: &InputBundle, mechanism: Mechanism, hours: usize) -> ScenarioConfig {
    let w = WeatherWindow::new(WINDOW);
    let base = bundle.series_for(&bundle.load_series, w).unwrap();
    ScenarioConfig {
        invest_window: w,
        dispatch_windows: vec![w],
        demand_uplift_target: base.iter().sum::<f64>() / 1000.0,
        horizon: Horizon { start: 0, hours },
        ..ScenarioConfig::new("toy", mechanism)
    }
}

pub fn solver() -> Solver {
    Solver::register(Box::new(ReferenceSimplex::new(SimplexOptions {
        size_limit: 20_000,
        ..Default::default()
    })))
    .unwrap()
}

/// Solution contract check shared by all solves in these tests.
pub fn assert_contract(p: &flexcap_core::lp::LpProblem, s: &flexcap_core::lp::LpSolution) {
    let rep = assess(p, s, &Tolerances::default());
    assert!(rep.within(&Tolerances::default()), "{rep:?}");
}

/// ccgt, ocgt and pv from the default set on a daily profile.
pub fn thermal_bundle(hours: usize) -> InputBundle {
    let techs: Vec<Technology> = flexcap_core::defaults::technologies_2030()
        .into_iter()
        .filter(|t| ["ccgt", "ocgt", "pv"].contains(&t.id.as_str()))
        .collect();
    let mut b = toy_bundle(techs, move |h| {
        let d = (h % 24) as f64;
        60.0 + 25.0 * (std::f64::consts::PI * (d - 4.0) / 16.0).sin().max(0.0) + if h % hours == 18 { 8.0 } else { 0.0 }
    });
    b.series.insert(
        "pv".into(),
        window_series(SeriesUnit::Fraction, |h| {
            let d = (h % 24) as f64;
            (0.6 * (std::f64::consts::PI * (d - 6.0) / 12.0).sin()).clamp(0.0, 1.0)
        }),
    );
    b
}

