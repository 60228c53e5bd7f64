use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::DomainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TechKind {
    Dispatchable,
    VariableRenewable,
    Storage,
    Reservoir,
}

/// Installed capacity: pinned, or chosen by the model inside a range.
/// Values in GW (GWh for storage energy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapacityBound {
    Fixed(f64),
    Range { lo: f64, hi: f64 },
}

impl CapacityBound {
    pub fn free() -> Self {
        CapacityBound::Range {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            CapacityBound::Fixed(v) => (v, v),
            CapacityBound::Range { lo, hi } => (lo, hi),
        }
    }

    pub fn is_fixed(&self) -> bool {
        let (lo, hi) = self.bounds();
        lo == hi
    }

    fn check(&self, field: &str) -> Result<(), DomainError> {
        let (lo, hi) = self.bounds();
        if lo.is_nan() || hi.is_nan() || lo < 0.0 || lo > hi || !lo.is_finite() {
            return Err(DomainError::invariant(field, "capacity bound must satisfy 0 <= lo <= hi"));
        }
        Ok(())
    }
}

/// One capacity dimension with its costs (EUR/kW or EUR/kWh, per year for
/// the fixed part).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacitySpec {
    pub capacity: CapacityBound,
    #[serde(default)]
    pub overnight_costs: f64,
    #[serde(default)]
    pub fixed_costs: f64,
}

impl CapacitySpec {
    pub fn fixed(cap: f64) -> Self {
        Self {
            capacity: CapacityBound::Fixed(cap),
            overnight_costs: 0.0,
            fixed_costs: 0.0,
        }
    }
}

/// Storage-specific parameters: power in/out, energy, efficiencies and
/// per-direction variable costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StorageParams {
    pub charge: CapacitySpec,
    pub discharge: CapacitySpec,
    pub energy: CapacitySpec,
    pub charge_efficiency: f64,
    pub discharge_efficiency: f64,
    /// Fraction of the stored energy lost per hour.
    #[serde(default)]
    pub standing_loss: f64,
    #[serde(default)]
    pub charge_var_costs: f64,
    #[serde(default)]
    pub discharge_var_costs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Technology {
    pub id: String,
    pub kind: TechKind,
    /// Generation capacity (GW_el). Ignored for storage, which uses
    /// [`StorageParams`]; for reservoirs this is the turbine power.
    pub capacity: CapacityBound,
    pub lifetime: f64,
    #[serde(default)]
    pub overnight_costs: f64,
    #[serde(default)]
    pub fixed_costs: f64,
    #[serde(default = "one")]
    pub efficiency: f64,
    /// tCO2 per MWh of fuel.
    #[serde(default)]
    pub carbon_content: f64,
    /// EUR per MWh of fuel.
    #[serde(default)]
    pub fuel_costs: f64,
    /// EUR per MWh_el.
    #[serde(default)]
    pub var_costs: f64,
    /// Availability series name (variable renewables) or inflow series
    /// name (reservoirs, GW).
    #[serde(default)]
    pub series: Option<String>,
    #[serde(default)]
    pub storage: Option<StorageParams>,
    /// Energy capacity of a reservoir (GWh).
    #[serde(default)]
    pub reservoir_energy: Option<CapacitySpec>,
}

fn one() -> f64 {
    1.0
}

fn fraction(field: &str, v: f64) -> Result<(), DomainError> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(DomainError::invariant(field, "efficiency must lie in (0,1]"))
    }
}

fn non_negative(field: &str, v: f64) -> Result<(), DomainError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(DomainError::invariant(field, "cost must be finite and >= 0"))
    }
}

impl Technology {
    pub fn check(&self) -> Result<(), DomainError> {
        let f = |name: &str| alloc::format!("technology {}: {name}", self.id);
        if !(self.lifetime > 0.0) {
            return Err(DomainError::invariant(&f("lifetime"), "lifetime must be > 0"));
        }
        self.capacity.check(&f("capacity"))?;
        fraction(&f("efficiency"), self.efficiency)?;
        for (n, v) in [
            ("overnight_costs", self.overnight_costs),
            ("fixed_costs", self.fixed_costs),
            ("carbon_content", self.carbon_content),
            ("fuel_costs", self.fuel_costs),
            ("var_costs", self.var_costs),
        ] {
            non_negative(&f(n), v)?;
        }
        match self.kind {
            TechKind::Storage => {
                let s = self
                    .storage
                    .as_ref()
                    .ok_or_else(|| DomainError::invariant(&f("storage"), "storage parameters missing"))?;
                for (n, spec) in [("charge", &s.charge), ("discharge", &s.discharge), ("energy", &s.energy)] {
                    spec.capacity.check(&f(n))?;
                    non_negative(&f(n), spec.overnight_costs)?;
                    non_negative(&f(n), spec.fixed_costs)?;
                }
                fraction(&f("charge_efficiency"), s.charge_efficiency)?;
                fraction(&f("discharge_efficiency"), s.discharge_efficiency)?;
                if !(0.0..1.0).contains(&s.standing_loss) {
                    return Err(DomainError::invariant(&f("standing_loss"), "standing loss must lie in [0,1)"));
                }
                non_negative(&f("charge_var_costs"), s.charge_var_costs)?;
                non_negative(&f("discharge_var_costs"), s.discharge_var_costs)?;
            }
            TechKind::Reservoir => {
                let e = self
                    .reservoir_energy
                    .as_ref()
                    .ok_or_else(|| DomainError::invariant(&f("reservoir_energy"), "reservoir energy missing"))?;
                e.capacity.check(&f("reservoir_energy"))?;
                if self.series.is_none() {
                    return Err(DomainError::invariant(&f("series"), "reservoir needs an inflow series"));
                }
            }
            TechKind::VariableRenewable => {
                if self.series.is_none() {
                    return Err(DomainError::invariant(&f("series"), "renewable needs an availability series"));
                }
            }
            TechKind::Dispatchable => {}
        }
        Ok(())
    }
}
