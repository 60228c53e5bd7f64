use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    check_values, marginal_cost, DomainError, FlexFamily, FlexOption, HourlySeries, ScenarioConfig, SeriesUnit,
    TechKind, Technology, Violation, WeatherWindow,
};

/// Flat process-heat demand and its conversion parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessHeatLoad {
    /// Heat served by heat pumps (GW_th, flat).
    pub heat_pump_heat: f64,
    /// Heat served by resistance heaters (GW_th, flat).
    pub resistance_heat: f64,
    pub cop: f64,
    pub eta_rh: f64,
}

impl ProcessHeatLoad {
    /// Baseline electricity of process heat (GW_el), part of the electric load.
    pub fn baseline_electricity(&self) -> f64 {
        self.heat_pump_heat / self.cop + self.resistance_heat / self.eta_rh
    }

    pub fn total_heat(&self) -> f64 {
        self.heat_pump_heat + self.resistance_heat
    }
}

/// District heating served by large heat pumps with a COP series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistrictHeatSpec {
    /// Heat demand series (GW_th).
    pub demand_series: String,
    /// Heat pump COP series.
    pub cop_series: String,
    /// Heat pump capacity above the window's peak electric demand (fraction).
    #[serde(default)]
    pub heat_pump_oversize: f64,
}

/// Everything a scenario is built from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InputBundle {
    pub technologies: Vec<Technology>,
    pub flex: Vec<FlexOption>,
    pub process_heat: Option<ProcessHeatLoad>,
    pub district_heat: Option<DistrictHeatSpec>,
    /// Name of the electric load series (GW_el).
    pub load_series: String,
    /// Series by name, then calendar year.
    pub series: BTreeMap<String, BTreeMap<i32, HourlySeries>>,
}

impl InputBundle {
    pub fn tech(&self, id: &str) -> Option<&Technology> {
        self.technologies.iter().find(|t| t.id == id)
    }

    pub fn series_for(&self, name: &str, window: WeatherWindow) -> Result<Vec<f64>, DomainError> {
        let by_year = self
            .series
            .get(name)
            .ok_or_else(|| DomainError::MissingSeries(alloc::format!("series {name}")))?;
        let first = by_year
            .get(&window.start_year)
            .ok_or_else(|| DomainError::MissingSeries(alloc::format!("series {name} year {}", window.start_year)))?;
        let second = by_year.get(&(window.start_year + 1)).ok_or_else(|| {
            DomainError::MissingSeries(alloc::format!("series {name} year {}", window.start_year + 1))
        })?;
        window.extract(first, second)
    }

    /// Names and expected units of every series a scenario needs.
    pub fn required_series(&self) -> Vec<(String, SeriesUnit)> {
        let mut out = Vec::new();
        out.push((self.load_series.clone(), SeriesUnit::GwEl));
        for t in &self.technologies {
            match (t.kind, &t.series) {
                (TechKind::VariableRenewable, Some(s)) => out.push((s.clone(), SeriesUnit::Fraction)),
                (TechKind::Reservoir, Some(s)) => out.push((s.clone(), SeriesUnit::GwEl)),
                _ => {}
            }
        }
        if let Some(dh) = &self.district_heat {
            out.push((dh.demand_series.clone(), SeriesUnit::GwTh));
            out.push((dh.cop_series.clone(), SeriesUnit::Ratio));
        }
        out.sort();
        out.dedup();
        out
    }
}

fn violation(field: &str, message: impl Into<String>) -> Violation {
    Violation {
        field: field.into(),
        message: message.into(),
    }
}

/// Checks a scenario and its inputs. Returns every violation found.
pub fn validate(config: &ScenarioConfig, data: &InputBundle) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    let push_err = |v: &mut Vec<Violation>, e: DomainError| match e {
        DomainError::Invariant { field, message } => v.push(Violation { field, message }),
        other => v.push(violation("input", alloc::format!("{other}"))),
    };

    // technologies
    let mut ids = alloc::collections::BTreeSet::new();
    for t in &data.technologies {
        if !ids.insert(t.id.as_str()) {
            v.push(violation(&alloc::format!("technology {}", t.id), "duplicate id"));
        }
        if let Err(e) = t.check() {
            push_err(&mut v, e);
        }
    }
    let mut flex_ids = alloc::collections::BTreeSet::new();
    for f in &data.flex {
        if !flex_ids.insert(f.id.as_str()) {
            v.push(violation(&alloc::format!("flex option {}", f.id), "duplicate id"));
        }
        if let Err(e) = f.check() {
            push_err(&mut v, e);
        }
    }
    let families = |fam| data.flex.iter().filter(|f| f.family == fam).count();
    if families(FlexFamily::ProcessHeat) > 0 && data.process_heat.is_none() {
        v.push(violation("process_heat", "process-heat flex option without process-heat load"));
    }
    if families(FlexFamily::ProcessHeat) > 1 || families(FlexFamily::DistrictHeating) > 1 {
        v.push(violation("flex", "at most one process-heat and one district-heating option"));
    }
    if families(FlexFamily::DistrictHeating) > 0 && data.district_heat.is_none() {
        v.push(violation("district_heat", "district-heating flex option without heat demand"));
    }
    if let Some(ph) = &data.process_heat {
        if !(ph.cop > 0.0) || !(ph.eta_rh > 0.0 && ph.eta_rh <= 1.0) {
            v.push(violation("process_heat", "cop must be > 0 and eta_rh in (0,1]"));
        }
        if !(ph.heat_pump_heat >= 0.0 && ph.resistance_heat >= 0.0) {
            v.push(violation("process_heat", "heat demand must be >= 0"));
        }
    }

    // scenario
    let c = config;
    if !(c.interest_rate >= 0.0) {
        v.push(violation("interest_rate", "interest rate must be >= 0"));
    }
    if !(c.carbon_price >= 0.0) {
        v.push(violation("carbon_price", "carbon price must be >= 0"));
    }
    if !(c.flex_lifetime > 0.0) {
        v.push(violation("flex_lifetime", "flex lifetime must be > 0"));
    }
    if c.dispatch_windows.is_empty() {
        v.push(violation("dispatch_windows", "at least one dispatch window is required"));
    }
    if let Err(e) = c.horizon.check() {
        push_err(&mut v, e);
    }
    if let Some(target) = c.mechanism.firm_target() {
        if !(target > 0.0) {
            v.push(violation("mechanism.firm_target", "firm target must be > 0"));
        }
    }
    for id in &c.mechanism.eligible_firm {
        if data.tech(id).is_none() {
            v.push(violation("mechanism.eligible_firm", alloc::format!("unknown technology {id}")));
        }
    }
    let max_mc = data
        .technologies
        .iter()
        .filter_map(|t| marginal_cost(t, c.carbon_price).ok().map(|mc| (t.id.as_str(), mc)))
        .fold(None::<(&str, f64)>, |acc, x| match acc {
            Some(a) if a.1 >= x.1 => Some(a),
            _ => Some(x),
        });
    if let Some(price) = c.mechanism.activation_price() {
        if let Some((id, mc)) = max_mc {
            if !(price > mc) {
                v.push(violation(
                    "mechanism.activation_price",
                    alloc::format!("activation price {price} must exceed the marginal cost of {id} ({mc:.1})"),
                ));
            }
        }
    }
    if c.mechanism.is_reserve() {
        match data.tech(&c.reserve_technology) {
            Some(t) if t.kind == TechKind::Dispatchable => {}
            _ => v.push(violation(
                "reserve_technology",
                alloc::format!("{} must be a dispatchable technology", c.reserve_technology),
            )),
        }
    }

    // series for all windows
    let mut base_sums = Vec::new();
    for (name, unit) in data.required_series() {
        for w in c.all_windows() {
            match data.series_for(&name, w) {
                Ok(vals) => {
                    if let Some(by_year) = data.series.get(&name) {
                        for y in [w.start_year, w.start_year + 1] {
                            if let Some(s) = by_year.get(&y) {
                                if s.unit != unit {
                                    v.push(violation(
                                        &alloc::format!("series {name} {y}"),
                                        alloc::format!("unit mismatch: expected {unit:?}, found {:?}", s.unit),
                                    ));
                                }
                            }
                        }
                    }
                    if let Err(e) = check_values(&alloc::format!("series {name} window {}", w.start_year), unit, &vals) {
                        push_err(&mut v, e);
                    }
                    if name == data.load_series {
                        base_sums.push((w, vals.iter().sum::<f64>()));
                    }
                }
                Err(e) => push_err(&mut v, e),
            }
        }
    }
    for (w, sum) in base_sums {
        if c.demand_uplift_target * 1000.0 < sum - 1e-6 * sum.abs() {
            v.push(violation(
                "demand_uplift_target",
                alloc::format!(
                    "target {} TWh is below the window {} base load of {:.3} TWh",
                    c.demand_uplift_target,
                    w.start_year,
                    sum / 1000.0
                ),
            ));
        }
    }

    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}
