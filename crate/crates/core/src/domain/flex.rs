use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::DomainError;

/// Duration buckets (hours) in which industrial load shifting is offered.
pub const INDUSTRY_DURATIONS: [f64; 4] = [3.0, 12.0, 72.0, 336.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlexFamily {
    IndustryDr,
    ProcessHeat,
    DistrictHeating,
}

impl FlexFamily {
    pub const ALL: [FlexFamily; 3] = [FlexFamily::IndustryDr, FlexFamily::ProcessHeat, FlexFamily::DistrictHeating];

    pub fn as_str(&self) -> &'static str {
        match self {
            FlexFamily::IndustryDr => "industry-dr",
            FlexFamily::ProcessHeat => "process-heat",
            FlexFamily::DistrictHeating => "district-heating",
        }
    }
}

/// Activation cost segment: the load change up to `up_to` (cumulative
/// fraction of the option's power) costs `cost` EUR/MWh_el.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivationTier {
    pub up_to: f64,
    pub cost: f64,
}

/// A demand-side flexibility asset: fixed power, endogenous storage size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlexOption {
    pub id: String,
    pub family: FlexFamily,
    /// MW_el. For district heating the heat-pump capacity is sized from the
    /// demand series and this is the average thermal rating (MW_th).
    pub power: f64,
    /// Maximum storage duration in hours at full power.
    pub duration_cap: f64,
    /// EUR/kWh (el for industry and process heat, th for district heating).
    pub energy_invest_cost: f64,
    pub activation_cost_tiers: Vec<ActivationTier>,
    pub storage_efficiency: f64,
    /// Fraction of stored energy lost per day.
    pub standing_loss: f64,
    /// GWh, `None` when only the duration cap applies.
    pub energy_upper_bound: Option<f64>,
    /// Load reduction without later recovery.
    #[serde(default)]
    pub shedding: bool,
}

impl FlexOption {
    pub fn check(&self) -> Result<(), DomainError> {
        let f = |n: &str| alloc::format!("flex option {}: {n}", self.id);
        if !(self.power >= 0.0) || !self.power.is_finite() {
            return Err(DomainError::invariant(&f("power"), "power must be >= 0"));
        }
        if self.family == FlexFamily::IndustryDr && !INDUSTRY_DURATIONS.contains(&self.duration_cap) {
            return Err(DomainError::invariant(
                &f("duration_cap"),
                "industry duration must be one of 3, 12, 72, 336 hours",
            ));
        }
        if !(self.duration_cap > 0.0) {
            return Err(DomainError::invariant(&f("duration_cap"), "duration must be > 0"));
        }
        if !(self.energy_invest_cost >= 0.0) {
            return Err(DomainError::invariant(&f("energy_invest_cost"), "cost must be >= 0"));
        }
        if !(self.storage_efficiency > 0.0 && self.storage_efficiency <= 1.0) {
            return Err(DomainError::invariant(&f("storage_efficiency"), "efficiency must lie in (0,1]"));
        }
        if !(0.0..1.0).contains(&self.standing_loss) {
            return Err(DomainError::invariant(&f("standing_loss"), "standing loss must lie in [0,1)"));
        }
        if let Some(b) = self.energy_upper_bound {
            if !(b >= 0.0) {
                return Err(DomainError::invariant(&f("energy_upper_bound"), "bound must be >= 0"));
            }
        }
        check_tiers(&f("activation_cost_tiers"), &self.activation_cost_tiers)
    }

    /// Power in GW.
    pub fn power_gw(&self) -> f64 {
        self.power / 1000.0
    }

    /// Upper bound on the energy capacity (GWh): duration cap at full power,
    /// tightened by the family bound when present.
    pub fn max_energy_gwh(&self) -> f64 {
        let by_duration = if self.family == FlexFamily::DistrictHeating {
            f64::INFINITY
        } else {
            self.power_gw() * self.duration_cap
        };
        match self.energy_upper_bound {
            Some(b) => by_duration.min(b),
            None => by_duration,
        }
    }
}

fn check_tiers(field: &str, tiers: &[ActivationTier]) -> Result<(), DomainError> {
    if tiers.is_empty() {
        return Err(DomainError::invariant(field, "at least one tier is required"));
    }
    let mut prev_up = 0.0;
    let mut prev_cost = f64::NEG_INFINITY;
    for t in tiers {
        if !(t.up_to > prev_up && t.up_to <= 1.0) {
            return Err(DomainError::invariant(field, "tier breakpoints must increase within (0,1]"));
        }
        if !(t.cost >= prev_cost) || !(t.cost >= 0.0) {
            return Err(DomainError::invariant(field, "tier costs must be non-negative and non-decreasing"));
        }
        prev_up = t.up_to;
        prev_cost = t.cost;
    }
    if prev_up != 1.0 {
        return Err(DomainError::invariant(field, "tiers must cover the full power"));
    }
    Ok(())
}

/// Widths of the tier segments as fractions of power.
pub fn tier_widths(tiers: &[ActivationTier]) -> Vec<(f64, f64)> {
    let mut prev = 0.0;
    tiers
        .iter()
        .map(|t| {
            let w = t.up_to - prev;
            prev = t.up_to;
            (w, t.cost)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn opt() -> FlexOption {
        FlexOption {
            id: "x".into(),
            family: FlexFamily::IndustryDr,
            power: 100.0,
            duration_cap: 3.0,
            energy_invest_cost: 1.0,
            activation_cost_tiers: vec![ActivationTier { up_to: 0.2, cost: 10.0 }, ActivationTier { up_to: 1.0, cost: 69.0 }],
            storage_efficiency: 1.0,
            standing_loss: 0.0,
            energy_upper_bound: None,
            shedding: false,
        }
    }

    #[test]
    fn valid_option() {
        assert!(opt().check().is_ok());
        assert!((opt().max_energy_gwh() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn invalid_options() {
        let mut o = opt();
        o.duration_cap = 5.0;
        assert!(o.check().is_err());
        let mut o = opt();
        o.activation_cost_tiers[1].cost = 5.0;
        assert!(o.check().is_err());
        let mut o = opt();
        o.activation_cost_tiers[1].up_to = 0.9;
        assert!(o.check().is_err());
        let mut o = opt();
        o.power = -1.0;
        assert!(o.check().is_err());
    }
}
