use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Horizon, WeatherWindow};

/// Capacity mechanism of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MechanismKind {
    /// Firm capacity target procured centrally; contracted plants stay in
    /// the wholesale market.
    CapacityMarket { firm_target: f64 },
    /// Reserve plants outside the market, dispatched at `activation_price`;
    /// reserve plus wholesale firm capacity equals `firm_target`.
    ReliabilityReserve { activation_price: f64, firm_target: f64 },
    /// No mechanism. Used as a reference case.
    EnergyOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mechanism {
    #[serde(flatten)]
    pub variant: MechanismKind,
    /// Technologies counting as firm capacity.
    pub eligible_firm: Vec<String>,
}

impl Mechanism {
    pub fn firm_target(&self) -> Option<f64> {
        match self.variant {
            MechanismKind::CapacityMarket { firm_target } => Some(firm_target),
            MechanismKind::ReliabilityReserve { firm_target, .. } => Some(firm_target),
            MechanismKind::EnergyOnly => None,
        }
    }

    pub fn activation_price(&self) -> Option<f64> {
        match self.variant {
            MechanismKind::ReliabilityReserve { activation_price, .. } => Some(activation_price),
            _ => None,
        }
    }

    pub fn is_reserve(&self) -> bool {
        matches!(self.variant, MechanismKind::ReliabilityReserve { .. })
    }

    pub fn short_name(&self) -> &'static str {
        match self.variant {
            MechanismKind::CapacityMarket { .. } => "capacity-market",
            MechanismKind::ReliabilityReserve { .. } => "reserve",
            MechanismKind::EnergyOnly => "energy-only",
        }
    }

    pub fn default_eligible() -> Vec<String> {
        vec!["ccgt".into(), "ocgt".into(), "oil".into(), "bio".into(), "reservoir".into(), "p2g2p".into()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlexMode {
    /// Flex storage sizes from the investment run are kept in every window.
    FixedFromInvest,
    /// Flex storage sizes are re-optimized in each dispatch window while
    /// power-sector capacities stay fixed.
    ReoptimizePerYear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub mechanism: Mechanism,
    /// EUR/t CO2.
    pub carbon_price: f64,
    pub interest_rate: f64,
    pub invest_window: WeatherWindow,
    pub dispatch_windows: Vec<WeatherWindow>,
    pub flex_mode: FlexMode,
    /// Annual electric load excluding district heating (TWh_el).
    pub demand_uplift_target: f64,
    /// Annuitization lifetime of flexibility storage (years).
    pub flex_lifetime: f64,
    pub horizon: Horizon,
    /// Technology the reserve is built from; its annuity plus fixed cost is
    /// the capacity payment rate.
    pub reserve_technology: String,
    /// Cost of unserved energy in dispatch runs as a multiple of the
    /// activation price (or of `reference_scarcity_price` without reserve).
    pub unserved_cost_factor: f64,
    pub reference_scarcity_price: f64,
    /// Charge fixed O&M on storage energy capacity.
    pub storage_energy_fixed_om: bool,
}

impl ScenarioConfig {
    pub fn new(name: impl Into<String>, mechanism: Mechanism) -> Self {
        Self {
            name: name.into(),
            mechanism,
            carbon_price: 130.0,
            interest_rate: 0.04,
            invest_window: WeatherWindow::new(2009),
            dispatch_windows: (2008..=2014).map(WeatherWindow::new).collect(),
            flex_mode: FlexMode::FixedFromInvest,
            demand_uplift_target: 670.0,
            flex_lifetime: 20.0,
            horizon: Horizon::default(),
            reserve_technology: "ocgt".into(),
            unserved_cost_factor: 10.0,
            reference_scarcity_price: 500.0,
            storage_energy_fixed_om: true,
        }
    }

    /// EUR/MWh charged for unserved energy in dispatch runs.
    pub fn unserved_cost(&self) -> f64 {
        self.unserved_cost_factor * self.mechanism.activation_price().unwrap_or(self.reference_scarcity_price)
    }

    /// Invest window followed by the dispatch windows not equal to it.
    pub fn all_windows(&self) -> Vec<WeatherWindow> {
        let mut w = vec![self.invest_window];
        for d in &self.dispatch_windows {
            if !w.contains(d) {
                w.push(*d);
            }
        }
        w
    }
}
