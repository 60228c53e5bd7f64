use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{FlexFamily, WeatherWindow};

/// Reserve output above this (GW) counts as an activation.
pub const ACTIVATION_EPS: f64 = 1e-6;

/// Capacities after the investment stage. GW for power, GWh for energy.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InstalledCapacities {
    /// Generation power, storage discharge power for storages.
    pub power: BTreeMap<String, f64>,
    pub storage_charge: BTreeMap<String, f64>,
    pub storage_energy: BTreeMap<String, f64>,
    pub flex_energy: BTreeMap<String, f64>,
}

impl InstalledCapacities {
    /// Firm capacity of the listed technologies.
    pub fn firm(&self, eligible: &[String]) -> f64 {
        eligible.iter().filter_map(|id| self.power.get(id)).sum()
    }
}

/// Outcome of one dispatch window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowResult {
    pub window: WeatherWindow,
    /// First hour of the modeled horizon inside the window.
    pub first_hour: usize,
    /// EUR/MWh_el.
    pub prices: Vec<f64>,
    /// Electric demand per hour (GW), including flexible consumption.
    pub demand: Vec<f64>,
    /// GW per technology; storages report discharge.
    pub dispatch: BTreeMap<String, Vec<f64>>,
    pub reserve_output: Vec<f64>,
    pub unserved: Vec<f64>,
    /// Flex energy capacities used in this window (GWh).
    pub flex_energy: BTreeMap<String, f64>,
    /// kEUR.
    pub objective: f64,
}

impl WindowResult {
    pub fn activation_hours(&self) -> usize {
        self.reserve_output.iter().filter(|&&r| r > ACTIVATION_EPS).count()
    }

    /// GWh.
    pub fn reserve_energy(&self) -> f64 {
        self.reserve_output.iter().sum()
    }

    pub fn unserved_energy(&self) -> f64 {
        self.unserved.iter().sum()
    }

    /// TWh over the modeled hours.
    pub fn demand_twh(&self) -> f64 {
        self.demand.iter().sum::<f64>() / 1000.0
    }
}

/// Headline numbers of a window. All prices EUR/MWh_el.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub window: String,
    /// Demand-weighted.
    pub avg_price: f64,
    pub avg_price_simple: f64,
    pub levy: f64,
    pub supply_cost: f64,
    pub supply_cost_simple: f64,
    pub activation_hours: usize,
    /// GWh.
    pub reserve_energy: f64,
    pub unserved_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub mechanism: String,
    pub installed: InstalledCapacities,
    /// GW held outside the market (0 without a reserve).
    pub reserve_size: f64,
    pub invest_objective: f64,
    pub windows: Vec<WindowResult>,
    pub metrics: Vec<MetricsRow>,
    /// Family of every flex option, by id.
    pub flex_family: BTreeMap<String, FlexFamily>,
    /// Digest of the inputs, set by the caller; empty when unknown.
    #[serde(default)]
    pub input_hash: String,
}
