//! Derivation of the demand-side flexibility portfolio from industry and
//! heat statistics.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::domain::{
    hourly_loss_from_daily, tier_widths, ActivationTier, DomainError, FlexFamily, FlexOption, ProcessHeatLoad, HOURS_PER_YEAR,
    INDUSTRY_DURATIONS,
};

/// Product-storage investment in EUR per MW_el of flexible load.
pub const DEFAULT_STORAGE_INVEST: f64 = 5240.0;

/// Share of an option's power activated at the lower cost.
pub const LOW_COST_SHARE: f64 = 0.2;

fn default_storage_invest() -> f64 {
    DEFAULT_STORAGE_INVEST
}

/// One energy-intensive process and its demand-response potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndustryProcessRecord {
    pub name: String,
    /// Fraction of the installed load that can be shifted.
    pub dr_share: f64,
    /// MW_el.
    pub installed_load: f64,
    /// Hours.
    pub max_duration: f64,
    /// EUR/MWh_el for the first 20% of the power; `None` means one tier.
    #[serde(default)]
    pub min_load_change_cost: Option<f64>,
    pub load_change_cost: f64,
    /// EUR/MW_el.
    #[serde(default = "default_storage_invest")]
    pub storage_invest_cost: f64,
    /// The aggregate of non-specific industries: its installed load is
    /// `other_base_load · (1 + uplift)`.
    #[serde(default)]
    pub aggregate_other: bool,
    #[serde(default)]
    pub shedding: bool,
}

impl IndustryProcessRecord {
    pub fn check(&self) -> Result<(), DomainError> {
        let f = |n: &str| alloc::format!("industry process {}: {n}", self.name);
        if !(0.0..=1.0).contains(&self.dr_share) {
            return Err(DomainError::invariant(&f("dr_share"), "share must lie in [0,1]"));
        }
        if !(self.installed_load >= 0.0 && self.installed_load.is_finite()) {
            return Err(DomainError::invariant(&f("installed_load"), "load must be >= 0"));
        }
        if !INDUSTRY_DURATIONS.contains(&self.max_duration) {
            return Err(DomainError::invariant(
                &f("max_duration"),
                "duration must be one of 3, 12, 72, 336 hours",
            ));
        }
        if !(self.load_change_cost >= 0.0) || !(self.storage_invest_cost >= 0.0) {
            return Err(DomainError::invariant(&f("load_change_cost"), "costs must be >= 0"));
        }
        if let Some(min) = self.min_load_change_cost {
            if !(min >= 0.0 && min <= self.load_change_cost) {
                return Err(DomainError::invariant(
                    &f("min_load_change_cost"),
                    "min cost must lie in [0, load_change_cost]",
                ));
            }
        }
        Ok(())
    }

    fn eligible_buckets(&self) -> usize {
        INDUSTRY_DURATIONS.iter().filter(|&&d| d <= self.max_duration).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevenueRequirementInput {
    pub gva_share: f64,
    /// EUR/t.
    pub product_price: f64,
    /// MWh_el/t.
    pub specific_electricity: f64,
}

/// Lost value added per MWh of electricity not consumed (EUR/MWh_el).
pub fn revenue_requirement(input: &RevenueRequirementInput) -> Result<f64, DomainError> {
    if !(input.specific_electricity > 0.0) {
        return Err(DomainError::invariant("specific_electricity", "must be > 0"));
    }
    if !(input.gva_share > 0.0) || !(input.product_price > 0.0) {
        return Err(DomainError::invariant("revenue_requirement", "gva_share and product_price must be > 0"));
    }
    Ok(input.gva_share * input.product_price / input.specific_electricity)
}

/// How a process's flexible power is spread over the duration buckets.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DurationSplit {
    /// Equal shares over the buckets not exceeding the process's max duration.
    #[default]
    Equal,
    /// Sum of 3-hour bucket powers pinned to `mw`; every process puts the
    /// same share into its 3-hour bucket and splits the rest equally.
    ThreeHourTarget { mw: f64 },
    /// Explicit weights per process name, in bucket order.
    Weights { weights: BTreeMap<String, [f64; 4]> },
}

fn flexible_power(r: &IndustryProcessRecord, other_base_load: f64, uplift: f64) -> f64 {
    let load = if r.aggregate_other {
        other_base_load * (1.0 + uplift)
    } else {
        r.installed_load
    };
    r.dr_share * load
}

fn equal_weights(n: usize) -> [f64; 4] {
    let mut w = [0.0; 4];
    for x in w.iter_mut().take(n) {
        *x = 1.0 / n as f64;
    }
    w
}

fn bucket_weights(
    records: &[IndustryProcessRecord],
    powers: &[f64],
    split: &DurationSplit,
) -> Result<Vec<[f64; 4]>, DomainError> {
    match split {
        DurationSplit::Equal => Ok(records.iter().map(|r| equal_weights(r.eligible_buckets())).collect()),
        DurationSplit::ThreeHourTarget { mw } => {
            // single-bucket processes are fixed; the others share alpha
            let fixed: f64 = records
                .iter()
                .zip(powers)
                .filter(|(r, _)| r.eligible_buckets() == 1)
                .map(|(_, p)| p)
                .sum();
            let rest: f64 = records
                .iter()
                .zip(powers)
                .filter(|(r, _)| r.eligible_buckets() > 1)
                .map(|(_, p)| p)
                .sum();
            let alpha = if rest > 0.0 { (mw - fixed) / rest } else { 1.0 };
            if !(0.0..=1.0).contains(&alpha) {
                return Err(DomainError::invariant(
                    "duration_split",
                    &alloc::format!("3-hour target {mw} MW not reachable (share {alpha:.4})"),
                ));
            }
            Ok(records
                .iter()
                .map(|r| {
                    let n = r.eligible_buckets();
                    if n == 1 {
                        return equal_weights(1);
                    }
                    let mut w = [0.0; 4];
                    w[0] = alpha;
                    for x in w.iter_mut().take(n).skip(1) {
                        *x = (1.0 - alpha) / (n - 1) as f64;
                    }
                    w
                })
                .collect())
        }
        DurationSplit::Weights { weights } => records
            .iter()
            .map(|r| {
                let w = weights.get(&r.name).copied().unwrap_or(equal_weights(r.eligible_buckets()));
                let n = r.eligible_buckets();
                let sum: f64 = w.iter().sum();
                if w.iter().any(|x| !(*x >= 0.0)) || w[n..].iter().any(|&x| x != 0.0) || (sum - 1.0).abs() > 1e-9 {
                    return Err(DomainError::invariant(
                        &alloc::format!("duration_split.{}", r.name),
                        "weights must be >= 0, sum to 1 and be zero beyond the max duration",
                    ));
                }
                Ok(w)
            })
            .collect(),
    }
}

fn slug(name: &str) -> String {
    let mut s = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.ends_with('-') && !s.is_empty() {
            s.push('-');
        }
    }
    while s.ends_with('-') {
        s.pop();
    }
    s
}

/// Activation tiers for a process: the low-cost share first when a minimum
/// cost is given.
pub fn industry_tiers(min_cost: Option<f64>, cost: f64) -> Vec<ActivationTier> {
    match min_cost {
        Some(min) => vec![
            ActivationTier {
                up_to: LOW_COST_SHARE,
                cost: min,
            },
            ActivationTier { up_to: 1.0, cost },
        ],
        None => vec![ActivationTier { up_to: 1.0, cost }],
    }
}

/// One flex option per process and eligible duration bucket. Buckets with
/// zero power are dropped.
pub fn industry_portfolio(
    records: &[IndustryProcessRecord],
    other_base_load: f64,
    electrification_uplift: f64,
    split: &DurationSplit,
) -> Result<Vec<FlexOption>, DomainError> {
    if records.is_empty() {
        return Err(DomainError::invariant("industry_records", "record list is empty"));
    }
    if !(electrification_uplift >= 0.0) || !(other_base_load >= 0.0) {
        return Err(DomainError::invariant("electrification_uplift", "uplift and base load must be >= 0"));
    }
    for r in records {
        r.check()?;
    }
    let powers: Vec<f64> = records
        .iter()
        .map(|r| flexible_power(r, other_base_load, electrification_uplift))
        .collect();
    let weights = bucket_weights(records, &powers, split)?;
    let mut out = Vec::new();
    for ((r, p), w) in records.iter().zip(&powers).zip(&weights) {
        for (k, &d) in INDUSTRY_DURATIONS.iter().enumerate() {
            let power = p * w[k];
            if !(power > 0.0) {
                continue;
            }
            out.push(FlexOption {
                id: alloc::format!("{}-{}h", slug(&r.name), d),
                family: FlexFamily::IndustryDr,
                power,
                duration_cap: d,
                energy_invest_cost: r.storage_invest_cost / d / 1000.0,
                activation_cost_tiers: industry_tiers(r.min_load_change_cost, r.load_change_cost),
                storage_efficiency: 1.0,
                standing_loss: 0.0,
                energy_upper_bound: None,
                shedding: r.shedding,
            });
        }
    }
    Ok(out)
}

/// Merges industry options that share duration, storage cost, efficiency,
/// loss and shedding into one option per group. The merged cost curve is the
/// union of all tier segments ordered by cost. Other families pass through.
///
/// The merged option has a single shared storage level, so it relaxes the
/// per-process energy limits while keeping total power and total energy
/// bounds.
pub fn merge_by_duration(options: &[FlexOption]) -> Vec<FlexOption> {
    let mut out: Vec<FlexOption> = Vec::new();
    let mut groups: Vec<(FlexOption, Vec<(f64, f64)>)> = Vec::new();
    for o in options {
        if o.family != FlexFamily::IndustryDr || o.energy_upper_bound.is_some() {
            out.push(o.clone());
            continue;
        }
        let segs = tier_widths(&o.activation_cost_tiers)
            .into_iter()
            .map(|(w, c)| (w * o.power, c));
        let same = |g: &FlexOption| {
            g.duration_cap == o.duration_cap
                && g.energy_invest_cost == o.energy_invest_cost
                && g.storage_efficiency == o.storage_efficiency
                && g.standing_loss == o.standing_loss
                && g.shedding == o.shedding
        };
        match groups.iter_mut().find(|(g, _)| same(g)) {
            Some((g, s)) => {
                g.power += o.power;
                s.extend(segs);
            }
            None => {
                let mut g = o.clone();
                g.id = alloc::format!("industry-{}h{}", o.duration_cap, if o.shedding { "-shed" } else { "" });
                groups.push((g, segs.collect()));
            }
        }
    }
    for (mut g, mut segs) in groups {
        segs.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut tiers: Vec<ActivationTier> = Vec::new();
        let mut cum = 0.0;
        for (w, c) in segs {
            if !(w > 0.0) {
                continue;
            }
            cum += w;
            match tiers.last_mut() {
                Some(t) if t.cost == c => t.up_to = cum / g.power,
                _ => tiers.push(ActivationTier {
                    up_to: cum / g.power,
                    cost: c,
                }),
            }
        }
        if let Some(t) = tiers.last_mut() {
            t.up_to = 1.0;
        }
        g.activation_cost_tiers = tiers;
        out.push(g);
    }
    out
}

/// Annual thermal demand per temperature band (TWh_th/a).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalBands {
    pub below_100: f64,
    pub from_100_to_160: f64,
    pub from_160_to_500: f64,
}

impl ThermalBands {
    pub fn heat_pump_band(&self) -> f64 {
        self.below_100 + self.from_100_to_160
    }

    pub fn total(&self) -> f64 {
        self.below_100 + self.from_100_to_160 + self.from_160_to_500
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessHeatInput {
    pub thermal_demand: ThermalBands,
    pub cop: f64,
    pub eta_rh: f64,
    pub eta_hs: f64,
    /// Hours.
    pub tau_s: f64,
    pub storage_share: f64,
    /// EUR/kWh_th.
    pub storage_invest: f64,
    /// EUR/kWh_th.
    pub boiler_invest: f64,
    pub overcapacity_share: f64,
    /// Per day.
    pub standing_loss: f64,
}

impl Default for ProcessHeatInput {
    fn default() -> Self {
        Self {
            thermal_demand: ThermalBands {
                below_100: 67.0,
                from_100_to_160: 70.2,
                from_160_to_500: 33.1,
            },
            cop: 3.7,
            eta_rh: 0.99,
            eta_hs: 0.9,
            tau_s: 72.0,
            storage_share: 0.3,
            storage_invest: 40.0,
            boiler_invest: 80.0,
            overcapacity_share: 0.7,
            standing_loss: 0.03,
        }
    }
}

impl ProcessHeatInput {
    pub fn check(&self) -> Result<(), DomainError> {
        let t = self.thermal_demand;
        if [t.below_100, t.from_100_to_160, t.from_160_to_500].iter().any(|q| !(*q >= 0.0)) {
            return Err(DomainError::invariant("process_heat.thermal_demand", "demand must be >= 0"));
        }
        if !(self.cop > 0.0) {
            return Err(DomainError::invariant("process_heat.cop", "cop must be > 0"));
        }
        for (n, v) in [
            ("eta_rh", self.eta_rh),
            ("eta_hs", self.eta_hs),
            ("overcapacity_share", self.overcapacity_share),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(DomainError::invariant(&alloc::format!("process_heat.{n}"), "must lie in (0,1]"));
            }
        }
        if !(0.0..=1.0).contains(&self.storage_share) {
            return Err(DomainError::invariant("process_heat.storage_share", "must lie in [0,1]"));
        }
        if !(self.tau_s > 0.0) {
            return Err(DomainError::invariant("process_heat.tau_s", "must be > 0"));
        }
        if !(self.storage_invest >= 0.0 && self.boiler_invest >= 0.0) {
            return Err(DomainError::invariant("process_heat.storage_invest", "costs must be >= 0"));
        }
        if !(0.0..1.0).contains(&self.standing_loss) {
            return Err(DomainError::invariant("process_heat.standing_loss", "must lie in [0,1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatPumpPower {
    pub twh_el: f64,
    /// Average over 8760 hours.
    pub avg_mw_el: f64,
}

pub fn heat_pump_power(q_twh_th: f64, cop: f64) -> Result<HeatPumpPower, DomainError> {
    if !(cop > 0.0) {
        return Err(DomainError::invariant("cop", "cop must be > 0"));
    }
    let twh_el = q_twh_th / cop;
    Ok(HeatPumpPower {
        twh_el,
        avg_mw_el: twh_el * 1e6 / HOURS_PER_YEAR as f64,
    })
}

/// TWh_el/a.
pub fn resistance_heater_power(q_twh_th: f64, eta_rh: f64) -> Result<f64, DomainError> {
    if !(eta_rh > 0.0 && eta_rh <= 1.0) {
        return Err(DomainError::invariant("eta_rh", "efficiency must lie in (0,1]"));
    }
    Ok(q_twh_th / eta_rh)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StorageBound {
    pub energy_gwh_th: f64,
    /// Same storage in electric-equivalent units (`energy_gwh_th / eta_rh`).
    pub energy_gwh_el: f64,
    /// GW.
    pub charge_power_gw: f64,
}

pub fn charge_power_cap(energy_gwh: f64, tau_s: f64, eta_hs: f64) -> Result<f64, DomainError> {
    if !(tau_s > 0.0) {
        return Err(DomainError::invariant("tau_s", "storage duration must be > 0"));
    }
    Ok(energy_gwh / (tau_s * eta_hs))
}

/// Upper bound of the process-heat thermal storage. The annual demand is
/// read as average thermal power held for `tau_s` hours.
pub fn process_heat_storage_bound(input: &ProcessHeatInput) -> Result<StorageBound, DomainError> {
    if !(input.tau_s > 0.0) {
        return Err(DomainError::invariant("process_heat.tau_s", "storage duration must be > 0"));
    }
    input.check()?;
    let avg_gw_th = input.thermal_demand.total() * 1000.0 / HOURS_PER_YEAR as f64;
    let energy = input.storage_share * avg_gw_th * input.tau_s;
    Ok(StorageBound {
        energy_gwh_th: energy,
        energy_gwh_el: energy / input.eta_rh,
        charge_power_gw: charge_power_cap(energy, input.tau_s, input.eta_hs)?,
    })
}

/// EUR/kWh_el of flexible process-heat storage, including the boiler
/// overcapacity.
pub fn process_heat_flex_invest(input: &ProcessHeatInput) -> f64 {
    input.storage_invest / (input.eta_hs * input.eta_rh) + input.boiler_invest * input.overcapacity_share / input.eta_rh
}

/// Flat process-heat load served by heat pumps and resistance heaters.
pub fn process_heat_load(input: &ProcessHeatInput) -> Result<ProcessHeatLoad, DomainError> {
    input.check()?;
    let h = HOURS_PER_YEAR as f64;
    Ok(ProcessHeatLoad {
        heat_pump_heat: input.thermal_demand.heat_pump_band() * 1000.0 / h,
        resistance_heat: input.thermal_demand.from_160_to_500 * 1000.0 / h,
        cop: input.cop,
        eta_rh: input.eta_rh,
    })
}

/// The process-heat storage as a flex option: power is the charging cap,
/// energy in electric-equivalent units.
pub fn process_heat_option(input: &ProcessHeatInput) -> Result<FlexOption, DomainError> {
    let bound = process_heat_storage_bound(input)?;
    Ok(FlexOption {
        id: "process-heat".into(),
        family: FlexFamily::ProcessHeat,
        power: bound.charge_power_gw * 1000.0,
        duration_cap: input.tau_s,
        energy_invest_cost: process_heat_flex_invest(input),
        activation_cost_tiers: vec![ActivationTier { up_to: 1.0, cost: 0.0 }],
        storage_efficiency: input.eta_hs,
        standing_loss: input.standing_loss,
        energy_upper_bound: Some(bound.energy_gwh_el),
        shedding: false,
    })
}

pub const DISTRICT_HEAT_EFFICIENCY: f64 = 0.9;
pub const DISTRICT_HEAT_DAILY_LOSS: f64 = 0.02;

/// Thermal storage in heat networks fully supplied by large heat pumps.
/// `power` is the average heat demand (MW_th); storage size is unbounded.
pub fn district_heating_option(annual_heat_twh: f64, storage_invest: f64) -> Result<FlexOption, DomainError> {
    if !(annual_heat_twh > 0.0) {
        return Err(DomainError::invariant("district_heating.annual_heat", "annual heat must be > 0"));
    }
    if !(storage_invest >= 0.0) {
        return Err(DomainError::invariant("district_heating.storage_invest", "cost must be >= 0"));
    }
    Ok(FlexOption {
        id: "district-heating".into(),
        family: FlexFamily::DistrictHeating,
        power: annual_heat_twh * 1e6 / HOURS_PER_YEAR as f64,
        duration_cap: HOURS_PER_YEAR as f64,
        energy_invest_cost: storage_invest,
        activation_cost_tiers: vec![ActivationTier { up_to: 1.0, cost: 0.0 }],
        storage_efficiency: DISTRICT_HEAT_EFFICIENCY,
        standing_loss: DISTRICT_HEAT_DAILY_LOSS,
        energy_upper_bound: None,
        shedding: false,
    })
}

/// Per-hour loss of a flex option's storage.
pub fn hourly_loss(option: &FlexOption) -> f64 {
    hourly_loss_from_daily(option.standing_loss)
}
