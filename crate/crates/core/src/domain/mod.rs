//! Typed inputs and results shared by the model.

mod bundle;
mod config;
mod finance;
mod flex;
mod result;
mod series;
mod technology;

use alloc::string::String;
use alloc::vec::Vec;

pub use bundle::{validate, DistrictHeatSpec, InputBundle, ProcessHeatLoad};
pub use config::{FlexMode, Mechanism, MechanismKind, ScenarioConfig};
pub use finance::{annuity, fuel_marginal_cost, hourly_loss_from_daily, marginal_cost};
pub use flex::{tier_widths, ActivationTier, FlexFamily, FlexOption, INDUSTRY_DURATIONS};
pub use result::{InstalledCapacities, MetricsRow, ScenarioResult, WindowResult};
pub use series::{
    check_values, hours_in_year, is_leap_year, Horizon, HourlySeries, SeriesUnit, WeatherWindow, HOURS_PER_YEAR,
};
pub use technology::{CapacityBound, CapacitySpec, StorageParams, TechKind, Technology};

/// A single failed check, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("{field}: {message}")]
    Invariant { field: String, message: String },
    #[error("technology {0} is not dispatchable")]
    NotDispatchable(String),
    #[error("missing {0}")]
    MissingSeries(String),
    #[error("{} violation(s), first: {}", .0.len(), .0.first().map(|v| alloc::format!("{v}")).unwrap_or_default())]
    Violations(Vec<Violation>),
}

impl DomainError {
    pub fn invariant(field: &str, message: &str) -> Self {
        DomainError::Invariant {
            field: field.into(),
            message: message.into(),
        }
    }
}
