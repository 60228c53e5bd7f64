//! Headline metrics: price-duration curves, levies, supply costs and the
//! side-by-side comparison of two scenarios.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::domain::{
    annuity, marginal_cost, FlexFamily, InputBundle, MechanismKind, MetricsRow, ScenarioConfig, ScenarioResult,
    WindowResult, HOURS_PER_YEAR,
};

/// Prices sorted from highest to lowest.
pub fn price_duration(prices: &[f64]) -> Vec<f64> {
    let mut v = prices.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Annuity plus fixed cost (EUR/kW/a) paid per unit of contracted capacity.
pub fn payment_rate(overnight: f64, fixed: f64, lifetime: f64, rate: f64) -> f64 {
    annuity(overnight, lifetime, rate) + fixed
}

/// EUR/MWh: GW · EUR/kW/a over TWh/a.
pub fn capacity_market_levy(firm_target: f64, payment_rate: f64, annual_demand_twh: f64) -> f64 {
    firm_target * payment_rate / annual_demand_twh
}

/// EUR/MWh. Capacity payments plus compensation of the reserve's variable
/// cost for every activated GWh, less the sales at the activation price.
pub fn reserve_levy(
    reserve_gw: f64,
    payment_rate: f64,
    activated_gwh: &[f64],
    activation_price: f64,
    reserve_marginal_cost: f64,
    annual_demand_twh: f64,
) -> f64 {
    let energy_mwh: f64 = activated_gwh.iter().sum::<f64>() * 1000.0;
    let eur = reserve_gw * 1e6 * payment_rate + energy_mwh * (reserve_marginal_cost - activation_price);
    eur / (annual_demand_twh * 1e6)
}

/// Payment rate and marginal cost of the configured reserve technology.
pub fn reserve_technology_costs(config: &ScenarioConfig, bundle: &InputBundle) -> (f64, f64) {
    match bundle.tech(&config.reserve_technology) {
        Some(t) => (
            payment_rate(t.overnight_costs, t.fixed_costs, t.lifetime, config.interest_rate),
            marginal_cost(t, config.carbon_price).unwrap_or(0.0),
        ),
        None => (0.0, 0.0),
    }
}

/// Metrics of one window. Annual payments are scaled to the modeled hours.
pub fn window_metrics(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    reserve_size: f64,
    w: &WindowResult,
) -> MetricsRow {
    let n = w.prices.len().max(1) as f64;
    let total_demand: f64 = w.demand.iter().sum();
    let weighted: f64 = w.prices.iter().zip(&w.demand).map(|(p, d)| p * d).sum();
    let avg_price_simple = w.prices.iter().sum::<f64>() / n;
    let avg_price = if total_demand > 0.0 {
        weighted / total_demand
    } else {
        avg_price_simple
    };
    // annual-equivalent demand of the horizon
    let fraction = w.prices.len() as f64 / HOURS_PER_YEAR as f64;
    let annual_twh = w.demand_twh() / fraction;
    let (rate, mc) = reserve_technology_costs(config, bundle);
    let levy = if annual_twh <= 0.0 {
        0.0
    } else {
        match config.mechanism.variant {
            MechanismKind::CapacityMarket { firm_target } => capacity_market_levy(firm_target, rate, annual_twh),
            MechanismKind::ReliabilityReserve { activation_price, .. } => {
                let annual: Vec<f64> = w.reserve_output.iter().map(|e| e / fraction).collect();
                reserve_levy(reserve_size, rate, &annual, activation_price, mc, annual_twh)
            }
            MechanismKind::EnergyOnly => 0.0,
        }
    };
    MetricsRow {
        window: w.window.label(),
        avg_price,
        avg_price_simple,
        levy,
        supply_cost: avg_price + levy,
        supply_cost_simple: avg_price_simple + levy,
        activation_hours: w.activation_hours(),
        reserve_energy: w.reserve_energy(),
        unserved_energy: w.unserved_energy(),
    }
}

/// Reserve-to-market ratio. Two zeros compare equal; a reserve value over a
/// zero market value is infinite.
pub fn ratio(market: f64, reserve: f64) -> f64 {
    if market == 0.0 {
        if reserve == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        reserve / market
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub section: String,
    pub key: String,
    pub market: f64,
    pub reserve: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("scenarios are not comparable: {0}")]
pub struct ComparisonError(pub String);

/// Sum of flex energy per family.
pub fn flex_by_family(r: &ScenarioResult, energy: &BTreeMap<String, f64>) -> BTreeMap<FlexFamily, f64> {
    let mut out: BTreeMap<FlexFamily, f64> = FlexFamily::ALL.iter().map(|f| (*f, 0.0)).collect();
    for (id, e) in energy {
        if let Some(f) = r.flex_family.get(id) {
            *out.entry(*f).or_default() += e;
        }
    }
    out
}

/// Side-by-side comparison of a capacity-market and a reserve result.
pub fn summarize(market: &ScenarioResult, reserve: &ScenarioResult) -> Result<Vec<ComparisonRow>, ComparisonError> {
    let wa: Vec<_> = market.windows.iter().map(|w| w.window).collect();
    let wb: Vec<_> = reserve.windows.iter().map(|w| w.window).collect();
    if wa != wb {
        return Err(ComparisonError(alloc::format!(
            "windows differ: {:?} vs {:?}",
            wa.iter().map(|w| w.start_year).collect::<Vec<_>>(),
            wb.iter().map(|w| w.start_year).collect::<Vec<_>>()
        )));
    }
    if market.input_hash != reserve.input_hash {
        return Err(ComparisonError(alloc::format!(
            "input hashes differ: {} vs {}",
            market.input_hash, reserve.input_hash
        )));
    }
    let mut rows = Vec::new();
    let mut push = |section: &str, key: &str, a: f64, b: f64| {
        rows.push(ComparisonRow {
            section: section.into(),
            key: key.into(),
            market: a,
            reserve: b,
            ratio: ratio(a, b),
        })
    };
    let merged = |a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>| {
        let mut keys: Vec<&String> = a.keys().chain(b.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (k.clone(), a.get(k).copied().unwrap_or(0.0), b.get(k).copied().unwrap_or(0.0)))
            .collect::<Vec<_>>()
    };
    for (k, a, b) in merged(&market.installed.power, &reserve.installed.power) {
        push("power", &k, a, b);
    }
    for (k, a, b) in merged(&market.installed.storage_energy, &reserve.installed.storage_energy) {
        push("storage-energy", &k, a, b);
    }
    push("reserve", "size", market.reserve_size, reserve.reserve_size);
    for (k, a, b) in merged(&market.installed.flex_energy, &reserve.installed.flex_energy) {
        push("flex-energy", &k, a, b);
    }
    let fa = flex_by_family(market, &market.installed.flex_energy);
    let fb = flex_by_family(reserve, &reserve.installed.flex_energy);
    let mut total = (0.0, 0.0);
    for f in FlexFamily::ALL {
        let (a, b) = (fa[&f], fb[&f]);
        total.0 += a;
        total.1 += b;
        push("flex-family", f.as_str(), a, b);
    }
    push("flex-family", "total", total.0, total.1);
    for (ma, mb) in market.metrics.iter().zip(&reserve.metrics) {
        let w = &ma.window;
        push("avg-price", w, ma.avg_price, mb.avg_price);
        push("avg-price-simple", w, ma.avg_price_simple, mb.avg_price_simple);
        push("levy", w, ma.levy, mb.levy);
        push("supply-cost", w, ma.supply_cost, mb.supply_cost);
        push("supply-cost-simple", w, ma.supply_cost_simple, mb.supply_cost_simple);
        push("activation-hours", w, ma.activation_hours as f64, mb.activation_hours as f64);
        push("reserve-energy", w, ma.reserve_energy, mb.reserve_energy);
    }
    Ok(rows)
}
