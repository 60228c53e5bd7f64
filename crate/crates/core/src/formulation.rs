//! Investment and dispatch LPs for one weather window.
//!
//! Units: power GW, energy GWh, money kEUR. An energy-balance dual is then
//! the price in EUR/MWh.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{
    annuity, hourly_loss_from_daily, marginal_cost, tier_widths, CapacityBound, DomainError, FlexFamily, FlexMode,
    FlexOption, Horizon, InputBundle, InstalledCapacities, MechanismKind, ScenarioConfig, TechKind, Technology,
    WeatherWindow, HOURS_PER_YEAR,
};
use crate::lp::{LpProblem, RowId, Sense, VarId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormulationError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("no capacity for {0}")]
    MissingCapacity(String),
    #[error("mechanism: {0}")]
    Mechanism(String),
    #[error("window {window}: {message}")]
    Window { window: i32, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageKind {
    Invest,
    Dispatch,
}

impl StageKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StageKind::Invest => "invest",
            StageKind::Dispatch => "dispatch",
        }
    }
}

/// Which stage to build.
#[derive(Debug, Clone, Copy)]
pub enum Stage<'a> {
    Invest,
    Dispatch {
        capacities: &'a InstalledCapacities,
        reserve_size: f64,
    },
}

/// Series of one window cut to the model horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowInputs {
    pub window: WeatherWindow,
    pub horizon: Horizon,
    /// Electric load not represented by model variables (GW).
    pub load: Vec<f64>,
    /// Availability factors by technology id.
    pub availability: BTreeMap<String, Vec<f64>>,
    /// Reservoir inflow by technology id (GW).
    pub inflow: BTreeMap<String, Vec<f64>>,
    /// District heat demand (GW_th) and heat pump COP.
    pub dh_demand: Option<Vec<f64>>,
    pub dh_cop: Option<Vec<f64>>,
    /// Electric heat pump capacity for district heating (GW).
    pub dh_heat_pump: f64,
}

/// Adds a flat adder so that the series sums to `target_twh`.
pub fn demand_profile(base: &[f64], target_twh: f64) -> Result<Vec<f64>, DomainError> {
    let sum: f64 = base.iter().sum();
    let uplift = target_twh * 1000.0 - sum;
    if uplift < -1e-9 * sum.abs().max(1.0) {
        return Err(DomainError::invariant(
            "demand_uplift_target",
            &alloc::format!("target {target_twh} TWh is below the base sum {:.6} TWh", sum / 1000.0),
        ));
    }
    let add = uplift.max(0.0) / base.len() as f64;
    Ok(base.iter().map(|b| b + add).collect())
}

fn has_family(bundle: &InputBundle, fam: FlexFamily) -> bool {
    bundle.flex.iter().any(|f| f.family == fam)
}

/// Extracts and prepares the series of `window`.
pub fn window_inputs(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    window: WeatherWindow,
) -> Result<WindowInputs, FormulationError> {
    let hz = config.horizon;
    hz.check()?;
    let base = bundle.series_for(&bundle.load_series, window)?;
    let mut load = demand_profile(&base, config.demand_uplift_target)?;
    // process heat is modeled explicitly when it can flex
    if let (Some(ph), true) = (&bundle.process_heat, has_family(bundle, FlexFamily::ProcessHeat)) {
        let b = ph.baseline_electricity();
        for (h, l) in load.iter_mut().enumerate() {
            *l -= b;
            if *l < -1e-9 {
                return Err(FormulationError::Window {
                    window: window.start_year,
                    message: alloc::format!("load minus process heat is negative at hour {h}"),
                });
            }
            *l = l.max(0.0);
        }
    }
    let mut availability = BTreeMap::new();
    let mut inflow = BTreeMap::new();
    for t in &bundle.technologies {
        match (t.kind, &t.series) {
            (TechKind::VariableRenewable, Some(s)) => {
                availability.insert(t.id.clone(), hz.slice(&bundle.series_for(s, window)?).to_vec());
            }
            (TechKind::Reservoir, Some(s)) => {
                inflow.insert(t.id.clone(), hz.slice(&bundle.series_for(s, window)?).to_vec());
            }
            _ => {}
        }
    }
    let (mut dh_demand, mut dh_cop, mut dh_heat_pump) = (None, None, 0.0);
    if let Some(dh) = &bundle.district_heat {
        let d = bundle.series_for(&dh.demand_series, window)?;
        let c = bundle.series_for(&dh.cop_series, window)?;
        let peak = d.iter().zip(&c).map(|(d, c)| d / c).fold(0.0, f64::max);
        dh_heat_pump = peak * (1.0 + dh.heat_pump_oversize);
        if !has_family(bundle, FlexFamily::DistrictHeating) {
            for (l, (d, c)) in load.iter_mut().zip(d.iter().zip(&c)) {
                *l += d / c;
            }
        }
        dh_demand = Some(hz.slice(&d).to_vec());
        dh_cop = Some(hz.slice(&c).to_vec());
    }
    Ok(WindowInputs {
        window,
        horizon: hz,
        load: hz.slice(&load).to_vec(),
        availability,
        inflow,
        dh_demand,
        dh_cop,
        dh_heat_pump,
    })
}

/// Full-window electric load (uplifted, with process heat and district heat
/// pumps) minus renewable output at fixed capacities (GW).
pub fn residual_load(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    window: WeatherWindow,
) -> Result<Vec<f64>, FormulationError> {
    let base = bundle.series_for(&bundle.load_series, window)?;
    let mut r = demand_profile(&base, config.demand_uplift_target)?;
    if let Some(dh) = &bundle.district_heat {
        let d = bundle.series_for(&dh.demand_series, window)?;
        let c = bundle.series_for(&dh.cop_series, window)?;
        for (l, (d, c)) in r.iter_mut().zip(d.iter().zip(&c)) {
            *l += d / c;
        }
    }
    for t in &bundle.technologies {
        if let (TechKind::VariableRenewable, Some(s), CapacityBound::Fixed(cap)) = (t.kind, &t.series, t.capacity) {
            let a = bundle.series_for(s, window)?;
            for (l, a) in r.iter_mut().zip(&a) {
                *l -= cap * a;
            }
        }
    }
    Ok(r)
}

/// Hour of the window with the highest residual load.
pub fn peak_residual_hour(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    window: WeatherWindow,
) -> Result<usize, FormulationError> {
    let r = residual_load(config, bundle, window)?;
    Ok(r.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (h, &v)| if v > acc.1 { (h, v) } else { acc })
        .0)
}

/// Horizon of `hours` centred on the peak residual-load hour, clamped to
/// the window.
pub fn peak_horizon(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    window: WeatherWindow,
    hours: usize,
) -> Result<Horizon, FormulationError> {
    let peak = peak_residual_hour(config, bundle, window)?;
    let hours = hours.clamp(1, HOURS_PER_YEAR);
    let start = peak.saturating_sub(hours / 2).min(HOURS_PER_YEAR - hours);
    Ok(Horizon { start, hours })
}

/// Largest residual load over `windows` plus `margin` (GW).
pub fn firm_target_from_data(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    windows: &[WeatherWindow],
    margin: f64,
) -> Result<f64, FormulationError> {
    let mut peak = f64::NEG_INFINITY;
    for &w in windows {
        peak = residual_load(config, bundle, w)?.into_iter().fold(peak, f64::max);
    }
    Ok(peak + margin)
}

/// Variable and row handles of a built model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelIndex {
    pub hours: usize,
    pub first_hour: usize,
    /// Energy balance per hour; its dual is the price.
    pub balance: Vec<RowId>,
    /// Generation per technology (dispatchable, renewable, reservoir).
    pub generation: BTreeMap<String, Vec<VarId>>,
    pub storage_charge: BTreeMap<String, Vec<VarId>>,
    pub storage_discharge: BTreeMap<String, Vec<VarId>>,
    pub storage_level: BTreeMap<String, Vec<VarId>>,
    /// Load increase (industry), storage charging (heat).
    pub flex_charge: BTreeMap<String, Vec<VarId>>,
    /// Per hour, one variable per activation tier.
    pub flex_discharge: BTreeMap<String, Vec<Vec<VarId>>>,
    pub flex_level: BTreeMap<String, Vec<VarId>>,
    /// Heat-side helpers, e.g. `process-heat/hp`.
    pub heat: BTreeMap<String, Vec<VarId>>,
    /// Endogenous capacities: `tech`, `tech/charge`, `tech/discharge`, `tech/energy`.
    pub capacity: BTreeMap<String, VarId>,
    /// Capacities that are constants in this model.
    pub fixed_capacity: BTreeMap<String, f64>,
    pub flex_energy: BTreeMap<String, VarId>,
    pub fixed_flex_energy: BTreeMap<String, f64>,
    /// Cost per unit of every capacity key and flex option (kEUR per GW or
    /// GWh over the horizon), whether endogenous or fixed.
    pub unit_costs: BTreeMap<String, f64>,
    pub reserve: Option<Vec<VarId>>,
    pub unserved: Option<Vec<VarId>>,
    pub firm_row: Option<RowId>,
    /// Cyclic level rows `(option or storage, hour)`.
    pub level_rows: Vec<(String, usize, RowId)>,
    /// Inflexible load per hour (GW).
    pub load: Vec<f64>,
    /// Flexible consumption terms per hour: demand = load + Σ a·x.
    pub consumption: Vec<Vec<(VarId, f64)>>,
    /// Descriptive label per variable and row.
    pub var_labels: Vec<String>,
    pub row_labels: Vec<String>,
}

impl ModelIndex {
    /// Capacity value in a solution, whether endogenous or fixed.
    pub fn capacity_value(&self, key: &str, x: &[f64]) -> Option<f64> {
        self.capacity
            .get(key)
            .map(|v| x[v.0])
            .or_else(|| self.fixed_capacity.get(key).copied())
    }

    pub fn flex_energy_value(&self, id: &str, x: &[f64]) -> Option<f64> {
        self.flex_energy
            .get(id)
            .map(|v| x[v.0])
            .or_else(|| self.fixed_flex_energy.get(id).copied())
    }

    /// Cost of the capacities held constant in this model (kEUR).
    pub fn fixed_cost(&self) -> f64 {
        let caps = self.fixed_capacity.iter();
        let flex = self.fixed_flex_energy.iter();
        caps.chain(flex)
            .map(|(k, v)| self.unit_costs.get(k).copied().unwrap_or(0.0) * v)
            .sum()
    }

    /// Objective plus [`ModelIndex::fixed_cost`]: total system cost of the
    /// horizon, comparable between stages.
    pub fn total_cost(&self, objective: f64) -> f64 {
        objective + self.fixed_cost()
    }

    /// Electric demand per hour in a solution (GW).
    pub fn demand(&self, x: &[f64]) -> Vec<f64> {
        self.load
            .iter()
            .zip(&self.consumption)
            .map(|(l, terms)| l + terms.iter().map(|&(v, a)| a * x[v.0]).sum::<f64>())
            .collect()
    }

    /// Storage and flex capacities to carry into a dispatch model.
    pub fn installed(&self, x: &[f64]) -> InstalledCapacities {
        let mut out = InstalledCapacities::default();
        let keys = self.capacity.keys().chain(self.fixed_capacity.keys());
        for key in keys {
            let v = self.capacity_value(key, x).unwrap_or(0.0).max(0.0);
            match key.split_once('/') {
                None => {
                    out.power.insert(key.clone(), v);
                }
                Some((id, "discharge")) => {
                    out.power.insert(id.into(), v);
                }
                Some((id, "charge")) => {
                    out.storage_charge.insert(id.into(), v);
                }
                Some((id, _)) => {
                    out.storage_energy.insert(id.into(), v);
                }
            }
        }
        for id in self.flex_energy.keys().chain(self.fixed_flex_energy.keys()) {
            out.flex_energy
                .insert(id.clone(), self.flex_energy_value(id, x).unwrap_or(0.0).max(0.0));
        }
        out
    }
}

/// Reserve held outside the market so that firm capacity reaches the target.
pub fn size_reserve(installed: &InstalledCapacities, eligible: &[String], firm_target: f64) -> f64 {
    (firm_target - installed.firm(eligible)).max(0.0)
}

/// Annual capacity cost in kEUR per GW (or GWh) per year.
pub fn capacity_cost(overnight: f64, fixed: f64, lifetime: f64, rate: f64) -> f64 {
    (annuity(overnight, lifetime, rate) + fixed) * 1000.0
}

#[derive(Clone, Copy)]
enum Cap {
    Fixed(f64),
    Var(VarId),
}

struct Builder {
    p: LpProblem,
    idx: ModelIndex,
}

impl Builder {
    fn var(&mut self, label: String, lo: f64, hi: f64, cost: f64) -> VarId {
        let name = alloc::format!("x{:07}", self.p.num_vars());
        self.idx.var_labels.push(label);
        self.p.add_var(name, lo, hi, cost)
    }

    fn row(&mut self, label: String, terms: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> RowId {
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
        let mut terms = terms;
        terms.sort_by_key(|t| t.0);
        for (v, a) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += a,
                _ => merged.push((v, a)),
            }
        }
        let name = alloc::format!("r{:07}", self.p.num_rows());
        self.idx.row_labels.push(label);
        self.p.add_constraint(name, merged, sense, rhs)
    }

    /// `x ≤ factor · cap`, as a bound when the capacity is a constant.
    fn limit(&mut self, label: String, x: VarId, cap: Cap, factor: f64) {
        match cap {
            Cap::Fixed(c) => {
                let v = &mut self.p.variables[x.0];
                v.upper = v.upper.min((c * factor).max(0.0));
            }
            Cap::Var(c) => {
                self.row(label, vec![(x, 1.0), (c, -factor)], Sense::Le, 0.0);
            }
        }
    }

    fn capacity(&mut self, key: String, bound: CapacityBound, cost: f64, stage: &Stage) -> Result<Cap, FormulationError> {
        self.idx.unit_costs.insert(key.clone(), cost);
        let fixed = match stage {
            Stage::Invest => bound.is_fixed().then(|| bound.bounds().0),
            Stage::Dispatch { capacities, .. } => Some(lookup(capacities, &key)?),
        };
        Ok(match fixed {
            Some(v) => {
                self.idx.fixed_capacity.insert(key, v);
                Cap::Fixed(v)
            }
            None => {
                let (lo, hi) = bound.bounds();
                let v = self.var(alloc::format!("cap[{key}]"), lo, hi, cost);
                self.idx.capacity.insert(key, v);
                Cap::Var(v)
            }
        })
    }

    /// Cyclic level recursion `L_h = keep·L_{h-1} + Σ terms_h`.
    fn cyclic(&mut self, id: &str, level: &[VarId], keep: f64, flows: impl Fn(usize) -> Vec<(VarId, f64)>) {
        let t = level.len();
        for h in 0..t {
            let prev = level[(h + t - 1) % t];
            let mut terms = vec![(level[h], 1.0), (prev, -keep)];
            for (v, a) in flows(h) {
                terms.push((v, -a));
            }
            let r = self.row(alloc::format!("level[{id},{h}]"), terms, Sense::Eq, 0.0);
            self.idx.level_rows.push((id.into(), h, r));
        }
    }
}

fn lookup(c: &InstalledCapacities, key: &str) -> Result<f64, FormulationError> {
    let v = match key.split_once('/') {
        None => c.power.get(key),
        Some((id, "discharge")) => c.power.get(id),
        Some((id, "charge")) => c.storage_charge.get(id),
        Some((id, _)) => c.storage_energy.get(id),
    };
    v.copied().ok_or_else(|| FormulationError::MissingCapacity(key.into()))
}

fn window_err(w: WeatherWindow, message: String) -> FormulationError {
    FormulationError::Window {
        window: w.start_year,
        message,
    }
}

/// Builds the investment model of the window.
pub fn build_invest(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    inputs: &WindowInputs,
) -> Result<(LpProblem, ModelIndex), FormulationError> {
    build(config, bundle, inputs, Stage::Invest)
}

/// Builds the dispatch model with power-sector capacities fixed.
pub fn build_dispatch(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    inputs: &WindowInputs,
    capacities: &InstalledCapacities,
    reserve_size: f64,
) -> Result<(LpProblem, ModelIndex), FormulationError> {
    build(
        config,
        bundle,
        inputs,
        Stage::Dispatch {
            capacities,
            reserve_size,
        },
    )
}

/// Builds either stage.
pub fn build(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    inputs: &WindowInputs,
    stage: Stage,
) -> Result<(LpProblem, ModelIndex), FormulationError> {
    let t = inputs.load.len();
    let w = inputs.window;
    if t == 0 {
        return Err(window_err(w, "empty horizon".into()));
    }
    let weight = t as f64 / HOURS_PER_YEAR as f64;
    let rate = config.interest_rate;
    let stage_kind = match stage {
        Stage::Invest => StageKind::Invest,
        Stage::Dispatch { .. } => StageKind::Dispatch,
    };
    let mut b = Builder {
        p: LpProblem::new(alloc::format!("{}_{}_{}", config.name, w.start_year, stage_kind.as_str())),
        idx: ModelIndex {
            hours: t,
            first_hour: inputs.horizon.start,
            load: inputs.load.clone(),
            consumption: vec![Vec::new(); t],
            ..ModelIndex::default()
        },
    };
    // supply (+) and consumption (-) terms of the energy balance per hour
    let mut supply: Vec<Vec<(VarId, f64)>> = vec![Vec::new(); t];

    for tech in &bundle.technologies {
        add_technology(&mut b, &mut supply, tech, config, inputs, &stage, weight)?;
    }

    let flex_energy_var = match stage {
        Stage::Invest => true,
        Stage::Dispatch { .. } => config.flex_mode == FlexMode::ReoptimizePerYear,
    };
    for opt in &bundle.flex {
        let cost = weight * annuity(opt.energy_invest_cost, config.flex_lifetime, rate) * 1000.0;
        if b.idx.unit_costs.insert(opt.id.clone(), cost).is_some() {
            return Err(window_err(w, alloc::format!("flex option {} clashes with a capacity key", opt.id)));
        }
        let energy = if flex_energy_var {
            let hi = opt.max_energy_gwh();
            let v = b.var(alloc::format!("flex_energy[{}]", opt.id), 0.0, hi, cost);
            b.idx.flex_energy.insert(opt.id.clone(), v);
            Cap::Var(v)
        } else {
            let Stage::Dispatch { capacities, .. } = stage else {
                unreachable!()
            };
            let e = capacities
                .flex_energy
                .get(&opt.id)
                .copied()
                .ok_or_else(|| FormulationError::MissingCapacity(alloc::format!("flex {}", opt.id)))?;
            b.idx.fixed_flex_energy.insert(opt.id.clone(), e);
            Cap::Fixed(e)
        };
        match opt.family {
            FlexFamily::IndustryDr => add_industry(&mut b, &mut supply, opt, energy, t),
            FlexFamily::ProcessHeat => add_process_heat(&mut b, &mut supply, opt, energy, bundle, t, w)?,
            FlexFamily::DistrictHeating => add_district_heat(&mut b, &mut supply, opt, energy, inputs, t, w)?,
        }
    }

    // mechanism
    let activation = config.mechanism.activation_price();
    match stage {
        Stage::Invest => {
            if let Some(price) = activation {
                let r: Vec<VarId> = (0..t)
                    .map(|h| b.var(alloc::format!("reserve[{h}]"), 0.0, f64::INFINITY, price))
                    .collect();
                for h in 0..t {
                    supply[h].push((r[h], 1.0));
                }
                b.idx.reserve = Some(r);
            }
            if let MechanismKind::CapacityMarket { firm_target } = config.mechanism.variant {
                add_firm_row(&mut b, config, bundle, firm_target)?;
            }
        }
        Stage::Dispatch { reserve_size, .. } => {
            if let Some(price) = activation {
                let r: Vec<VarId> = (0..t)
                    .map(|h| b.var(alloc::format!("reserve[{h}]"), 0.0, reserve_size.max(0.0), price))
                    .collect();
                for h in 0..t {
                    supply[h].push((r[h], 1.0));
                }
                b.idx.reserve = Some(r);
            }
            let cost = config.unserved_cost();
            let u: Vec<VarId> = (0..t)
                .map(|h| b.var(alloc::format!("unserved[{h}]"), 0.0, f64::INFINITY, cost))
                .collect();
            for h in 0..t {
                supply[h].push((u[h], 1.0));
            }
            b.idx.unserved = Some(u);
        }
    }

    for (h, terms) in supply.into_iter().enumerate() {
        let r = b.row(alloc::format!("balance[{h}]"), terms, Sense::Eq, inputs.load[h]);
        b.idx.balance.push(r);
    }
    Ok((b.p, b.idx))
}

fn add_technology(
    b: &mut Builder,
    supply: &mut [Vec<(VarId, f64)>],
    tech: &Technology,
    config: &ScenarioConfig,
    inputs: &WindowInputs,
    stage: &Stage,
    weight: f64,
) -> Result<(), FormulationError> {
    let t = supply.len();
    let rate = config.interest_rate;
    let id = tech.id.as_str();
    let cc = |overnight: f64, fixed: f64| weight * capacity_cost(overnight, fixed, tech.lifetime, rate);
    match tech.kind {
        TechKind::Dispatchable | TechKind::VariableRenewable => {
            let cap = b.capacity(id.into(), tech.capacity, cc(tech.overnight_costs, tech.fixed_costs), stage)?;
            let mc = if tech.kind == TechKind::Dispatchable {
                marginal_cost(tech, config.carbon_price)?
            } else {
                tech.var_costs
            };
            let avail = match tech.kind {
                TechKind::VariableRenewable => Some(
                    inputs
                        .availability
                        .get(id)
                        .ok_or_else(|| window_err(inputs.window, alloc::format!("no availability for {id}")))?,
                ),
                _ => None,
            };
            let mut g = Vec::with_capacity(t);
            for h in 0..t {
                let x = b.var(alloc::format!("gen[{id},{h}]"), 0.0, f64::INFINITY, mc);
                let factor = avail.map_or(1.0, |a| a[h]);
                b.limit(alloc::format!("cap_gen[{id},{h}]"), x, cap, factor);
                supply[h].push((x, 1.0));
                g.push(x);
            }
            b.idx.generation.insert(id.into(), g);
        }
        TechKind::Reservoir => {
            let e = tech.reservoir_energy.as_ref().ok_or_else(|| {
                FormulationError::Domain(DomainError::invariant(id, "reservoir energy missing"))
            })?;
            let cap = b.capacity(id.into(), tech.capacity, cc(tech.overnight_costs, tech.fixed_costs), stage)?;
            let ecap = b.capacity(
                alloc::format!("{id}/energy"),
                e.capacity,
                cc(e.overnight_costs, if config.storage_energy_fixed_om { e.fixed_costs } else { 0.0 }),
                stage,
            )?;
            let inflow = inputs
                .inflow
                .get(id)
                .ok_or_else(|| window_err(inputs.window, alloc::format!("no inflow for {id}")))?;
            let mut g = Vec::with_capacity(t);
            let mut lv = Vec::with_capacity(t);
            for h in 0..t {
                let x = b.var(alloc::format!("gen[{id},{h}]"), 0.0, f64::INFINITY, tech.var_costs);
                b.limit(alloc::format!("cap_gen[{id},{h}]"), x, cap, 1.0);
                supply[h].push((x, 1.0));
                g.push(x);
                let l = b.var(alloc::format!("level[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
                b.limit(alloc::format!("cap_level[{id},{h}]"), l, ecap, 1.0);
                lv.push(l);
            }
            // L_h - L_{h-1} + gen/eff <= inflow (spill allowed)
            for h in 0..t {
                let prev = lv[(h + t - 1) % t];
                let r = b.row(
                    alloc::format!("level[{id},{h}]"),
                    vec![(lv[h], 1.0), (prev, -1.0), (g[h], 1.0 / tech.efficiency)],
                    Sense::Le,
                    inflow[h],
                );
                b.idx.level_rows.push((id.into(), h, r));
            }
            b.idx.generation.insert(id.into(), g);
            b.idx.storage_level.insert(id.into(), lv);
        }
        TechKind::Storage => {
            let s = tech
                .storage
                .as_ref()
                .ok_or_else(|| FormulationError::Domain(DomainError::invariant(id, "storage parameters missing")))?;
            let c_cap = b.capacity(
                alloc::format!("{id}/charge"),
                s.charge.capacity,
                cc(s.charge.overnight_costs, s.charge.fixed_costs),
                stage,
            )?;
            let d_cap = b.capacity(
                alloc::format!("{id}/discharge"),
                s.discharge.capacity,
                cc(s.discharge.overnight_costs, s.discharge.fixed_costs),
                stage,
            )?;
            let energy_fixed = if config.storage_energy_fixed_om { s.energy.fixed_costs } else { 0.0 };
            let e_cap = b.capacity(
                alloc::format!("{id}/energy"),
                s.energy.capacity,
                cc(s.energy.overnight_costs, energy_fixed),
                stage,
            )?;
            let (mut ch, mut dis, mut lv) = (Vec::new(), Vec::new(), Vec::new());
            for h in 0..t {
                let c = b.var(alloc::format!("charge[{id},{h}]"), 0.0, f64::INFINITY, s.charge_var_costs);
                b.limit(alloc::format!("cap_charge[{id},{h}]"), c, c_cap, 1.0);
                let d = b.var(alloc::format!("discharge[{id},{h}]"), 0.0, f64::INFINITY, s.discharge_var_costs);
                b.limit(alloc::format!("cap_discharge[{id},{h}]"), d, d_cap, 1.0);
                let l = b.var(alloc::format!("level[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
                b.limit(alloc::format!("cap_level[{id},{h}]"), l, e_cap, 1.0);
                supply[h].push((d, 1.0));
                supply[h].push((c, -1.0));
                ch.push(c);
                dis.push(d);
                lv.push(l);
            }
            let (eta_in, eta_out) = (s.charge_efficiency, s.discharge_efficiency);
            b.cyclic(id, &lv, 1.0 - s.standing_loss, |h| {
                vec![(ch[h], eta_in), (dis[h], -1.0 / eta_out)]
            });
            b.idx.storage_charge.insert(id.into(), ch);
            b.idx.storage_discharge.insert(id.into(), dis);
            b.idx.storage_level.insert(id.into(), lv);
        }
    }
    Ok(())
}

fn add_industry(b: &mut Builder, supply: &mut [Vec<(VarId, f64)>], opt: &FlexOption, energy: Cap, t: usize) {
    let id = opt.id.as_str();
    let p = opt.power_gw();
    let tiers = tier_widths(&opt.activation_cost_tiers);
    let mut ch = Vec::new();
    let mut dis = Vec::new();
    for h in 0..t {
        let mut d_h = Vec::new();
        for (k, &(width, cost)) in tiers.iter().enumerate() {
            let d = b.var(alloc::format!("reduce[{id},{h},{k}]"), 0.0, width * p, cost);
            supply[h].push((d, 1.0));
            b.idx.consumption[h].push((d, -1.0));
            d_h.push(d);
        }
        dis.push(d_h);
        if !opt.shedding {
            let c = b.var(alloc::format!("increase[{id},{h}]"), 0.0, p, 0.0);
            supply[h].push((c, -1.0));
            b.idx.consumption[h].push((c, 1.0));
            ch.push(c);
        }
    }
    if !opt.shedding {
        let lv: Vec<VarId> = (0..t)
            .map(|h| {
                let l = b.var(alloc::format!("flex_level[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
                b.limit(alloc::format!("cap_flex_level[{id},{h}]"), l, energy, 1.0);
                l
            })
            .collect();
        let eta = opt.storage_efficiency;
        let keep = 1.0 - hourly_loss_from_daily(opt.standing_loss);
        b.cyclic(id, &lv, keep, |h| {
            let mut f = vec![(ch[h], eta)];
            for &d in &dis[h] {
                f.push((d, -1.0));
            }
            f
        });
        b.idx.flex_charge.insert(id.into(), ch);
        b.idx.flex_level.insert(id.into(), lv);
    }
    b.idx.flex_discharge.insert(id.into(), dis);
}

fn add_process_heat(
    b: &mut Builder,
    supply: &mut [Vec<(VarId, f64)>],
    opt: &FlexOption,
    energy: Cap,
    bundle: &InputBundle,
    t: usize,
    w: WeatherWindow,
) -> Result<(), FormulationError> {
    let ph = bundle
        .process_heat
        .ok_or_else(|| window_err(w, "process-heat option without process-heat load".into()))?;
    let id = opt.id.as_str();
    let total = ph.total_heat();
    let (mut hp, mut rh, mut ch, mut dis, mut lv) = (vec![], vec![], vec![], vec![], vec![]);
    for h in 0..t {
        let x_hp = b.var(alloc::format!("hp_heat[{id},{h}]"), 0.0, ph.heat_pump_heat, 0.0);
        let x_rh = b.var(alloc::format!("rh_el[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
        let x_ch = b.var(alloc::format!("charge[{id},{h}]"), 0.0, opt.power_gw(), 0.0);
        let x_dis = b.var(alloc::format!("discharge[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
        let l = b.var(alloc::format!("flex_level[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
        b.limit(alloc::format!("cap_flex_level[{id},{h}]"), l, energy, 1.0);
        b.row(
            alloc::format!("heat[{id},{h}]"),
            vec![(x_hp, 1.0), (x_rh, ph.eta_rh), (x_dis, ph.eta_rh)],
            Sense::Eq,
            total,
        );
        let el = [(x_hp, 1.0 / ph.cop), (x_rh, 1.0), (x_ch, 1.0)];
        for (v, a) in el {
            supply[h].push((v, -a));
            b.idx.consumption[h].push((v, a));
        }
        hp.push(x_hp);
        rh.push(x_rh);
        ch.push(x_ch);
        dis.push(x_dis);
        lv.push(l);
    }
    let eta = opt.storage_efficiency;
    let keep = 1.0 - hourly_loss_from_daily(opt.standing_loss);
    b.cyclic(id, &lv, keep, |h| vec![(ch[h], eta), (dis[h], -1.0)]);
    b.idx.heat.insert(alloc::format!("{id}/hp"), hp);
    b.idx.heat.insert(alloc::format!("{id}/rh"), rh);
    b.idx.flex_charge.insert(id.into(), ch);
    b.idx.flex_discharge.insert(id.into(), dis.into_iter().map(|d| vec![d]).collect());
    b.idx.flex_level.insert(id.into(), lv);
    Ok(())
}

fn add_district_heat(
    b: &mut Builder,
    supply: &mut [Vec<(VarId, f64)>],
    opt: &FlexOption,
    energy: Cap,
    inputs: &WindowInputs,
    t: usize,
    w: WeatherWindow,
) -> Result<(), FormulationError> {
    let (Some(demand), Some(cop)) = (&inputs.dh_demand, &inputs.dh_cop) else {
        return Err(window_err(w, "district-heating option without heat demand".into()));
    };
    let id = opt.id.as_str();
    let (mut hp, mut ch, mut dis, mut lv) = (vec![], vec![], vec![], vec![]);
    for h in 0..t {
        let x_hp = b.var(alloc::format!("hp_el[{id},{h}]"), 0.0, inputs.dh_heat_pump, 0.0);
        let x_ch = b.var(alloc::format!("charge[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
        let x_dis = b.var(alloc::format!("discharge[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
        let l = b.var(alloc::format!("flex_level[{id},{h}]"), 0.0, f64::INFINITY, 0.0);
        b.limit(alloc::format!("cap_flex_level[{id},{h}]"), l, energy, 1.0);
        b.row(
            alloc::format!("heat[{id},{h}]"),
            vec![(x_hp, cop[h]), (x_ch, -1.0), (x_dis, 1.0)],
            Sense::Eq,
            demand[h],
        );
        supply[h].push((x_hp, -1.0));
        b.idx.consumption[h].push((x_hp, 1.0));
        hp.push(x_hp);
        ch.push(x_ch);
        dis.push(x_dis);
        lv.push(l);
    }
    let eta = opt.storage_efficiency;
    let keep = 1.0 - hourly_loss_from_daily(opt.standing_loss);
    b.cyclic(id, &lv, keep, |h| vec![(ch[h], eta), (dis[h], -1.0)]);
    b.idx.heat.insert(alloc::format!("{id}/hp"), hp);
    b.idx.flex_charge.insert(id.into(), ch);
    b.idx.flex_discharge.insert(id.into(), dis.into_iter().map(|d| vec![d]).collect());
    b.idx.flex_level.insert(id.into(), lv);
    Ok(())
}

/// Key of the firm capacity of an eligible technology.
fn firm_key(tech: &Technology) -> String {
    match tech.kind {
        TechKind::Storage => alloc::format!("{}/discharge", tech.id),
        _ => tech.id.clone(),
    }
}

fn add_firm_row(
    b: &mut Builder,
    config: &ScenarioConfig,
    bundle: &InputBundle,
    target: f64,
) -> Result<(), FormulationError> {
    let mut terms = Vec::new();
    let mut fixed = 0.0;
    for id in &config.mechanism.eligible_firm {
        let tech = bundle
            .tech(id)
            .ok_or_else(|| FormulationError::Mechanism(alloc::format!("unknown firm technology {id}")))?;
        let key = firm_key(tech);
        if let Some(&v) = b.idx.capacity.get(&key) {
            terms.push((v, 1.0));
        } else if let Some(&c) = b.idx.fixed_capacity.get(&key) {
            fixed += c;
        }
    }
    if terms.is_empty() {
        if fixed + 1e-9 < target {
            return Err(FormulationError::Mechanism(alloc::format!(
                "firm target {target} GW exceeds the fixed firm capacity {fixed} GW and nothing can be built"
            )));
        }
        return Ok(());
    }
    let r = b.row("firm".into(), terms, Sense::Ge, target - fixed);
    b.idx.firm_row = Some(r);
    Ok(())
}
