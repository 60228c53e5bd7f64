//! Parameter file (TOML): technologies, flexibility inputs and run settings.

use std::path::Path;

use anyhow::{bail, Context};
use flexcap_core::defaults::{self, COMPACT_TECHNOLOGIES};
use flexcap_core::domain::{
    DistrictHeatSpec, FlexMode, FlexOption, Horizon, InputBundle, Mechanism, MechanismKind, ScenarioConfig, Technology,
    WeatherWindow,
};
use flexcap_core::flex_derive::{
    district_heating_option, industry_portfolio, merge_by_duration, process_heat_load, process_heat_option,
    DurationSplit, IndustryProcessRecord, ProcessHeatInput,
};
use flexcap_core::formulation::{firm_target_from_data, peak_horizon, FormulationError};
use flexcap_core::synth::SynthSpec;
use serde::{Deserialize, Serialize};

pub const CAPACITY_MARKET: &str = "capacity-market";
pub const RESERVE: &str = "reserve";
pub const ENERGY_ONLY: &str = "energy-only";
pub const SCENARIOS: [&str; 3] = [CAPACITY_MARKET, RESERVE, ENERGY_ONLY];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub run: RunParams,
    pub flex: FlexParams,
    /// Name of the electric load series.
    pub load_series: String,
    #[serde(default)]
    pub district_heat: Option<DistrictHeatSpec>,
    /// Generator used when no series directory is given.
    #[serde(default)]
    pub synth: SynthSpec,
    pub technology: Vec<Technology>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub scenarios: Vec<String>,
    pub invest_year: i32,
    pub dispatch_years: Vec<i32>,
    /// Modeled hours per window; absent means the full window.
    #[serde(default)]
    pub horizon_hours: Option<usize>,
    /// First modeled hour; absent centres the horizon on the peak residual
    /// load of the invest window.
    #[serde(default)]
    pub horizon_start: Option<usize>,
    pub carbon_price: f64,
    pub interest_rate: f64,
    /// TWh_el per year excluding district heating.
    pub demand_uplift_target: f64,
    pub flex_mode: FlexMode,
    pub flex_lifetime: f64,
    pub reserve_technology: String,
    pub unserved_cost_factor: f64,
    pub reference_scarcity_price: f64,
    pub storage_energy_fixed_om: bool,
    pub activation_price: f64,
    /// GW; absent means peak residual load of the invest window plus
    /// `firm_margin`.
    #[serde(default)]
    pub firm_target: Option<f64>,
    pub firm_margin: f64,
    pub eligible_firm: Vec<String>,
    /// Size guard of the reference simplex (variables plus rows).
    pub size_limit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlexParams {
    pub other_base_load: f64,
    pub electrification_uplift: f64,
    pub duration_split: DurationSplit,
    /// Merge industry options of equal duration into one option each.
    #[serde(default)]
    pub merge_by_duration: bool,
    /// TWh_th per year; absent disables district heating flexibility.
    #[serde(default)]
    pub district_heat_twh: Option<f64>,
    pub district_heat_storage_invest: f64,
    #[serde(default)]
    pub process_heat: Option<ProcessHeatInput>,
    pub industry: Vec<IndustryProcessRecord>,
}

impl Params {
    /// Full technology set and portfolio over seven full windows.
    pub fn full() -> Self {
        let run = RunParams {
            scenarios: vec![CAPACITY_MARKET.into(), RESERVE.into()],
            invest_year: 2009,
            dispatch_years: (2008..=2014).collect(),
            horizon_hours: None,
            horizon_start: None,
            carbon_price: 130.0,
            interest_rate: 0.04,
            demand_uplift_target: 670.0,
            flex_mode: FlexMode::FixedFromInvest,
            flex_lifetime: 20.0,
            reserve_technology: "ocgt".into(),
            unserved_cost_factor: 10.0,
            reference_scarcity_price: defaults::ACTIVATION_PRICE,
            storage_energy_fixed_om: true,
            activation_price: defaults::ACTIVATION_PRICE,
            firm_target: Some(defaults::FIRM_TARGET),
            firm_margin: 5.0,
            eligible_firm: defaults::eligible_firm(),
            size_limit: 100_000,
        };
        Params {
            run,
            flex: FlexParams {
                other_base_load: defaults::OTHER_BASE_LOAD,
                electrification_uplift: defaults::ELECTRIFICATION_UPLIFT,
                duration_split: DurationSplit::ThreeHourTarget {
                    mw: defaults::THREE_HOUR_POWER,
                },
                merge_by_duration: false,
                district_heat_twh: Some(defaults::DISTRICT_HEAT_DEMAND),
                district_heat_storage_invest: defaults::DISTRICT_HEAT_STORAGE_INVEST,
                process_heat: Some(ProcessHeatInput::default()),
                industry: defaults::industry_records_2030(),
            },
            load_series: defaults::LOAD_SERIES.into(),
            district_heat: Some(DistrictHeatSpec {
                demand_series: defaults::DH_DEMAND_SERIES.into(),
                cop_series: defaults::DH_COP_SERIES.into(),
                heat_pump_oversize: 0.0,
            }),
            synth: SynthSpec::default(),
            technology: defaults::technologies_2030(),
        }
    }

    /// Reduced model sized for the reference simplex: one peak week of the
    /// invest window, no hydro or storage plants, merged industry options,
    /// firm target from the data.
    pub fn desk() -> Self {
        let mut p = Self::full();
        p.technology.retain(|t| COMPACT_TECHNOLOGIES.contains(&t.id.as_str()));
        p.run.eligible_firm.retain(|e| COMPACT_TECHNOLOGIES.contains(&e.as_str()));
        p.flex.merge_by_duration = true;
        p.run.dispatch_years = vec![p.run.invest_year];
        p.run.horizon_hours = Some(168);
        p.run.firm_target = None;
        p
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Derived flexibility portfolio.
    pub fn flex_portfolio(&self) -> anyhow::Result<Vec<FlexOption>> {
        let f = &self.flex;
        let mut out = if f.industry.is_empty() {
            Vec::new()
        } else {
            industry_portfolio(&f.industry, f.other_base_load, f.electrification_uplift, &f.duration_split)?
        };
        if let Some(ph) = &f.process_heat {
            out.push(process_heat_option(ph)?);
        }
        if let Some(q) = f.district_heat_twh {
            out.push(district_heating_option(q, f.district_heat_storage_invest)?);
        }
        if f.merge_by_duration {
            out = merge_by_duration(&out);
        }
        Ok(out)
    }

    /// Bundle without series.
    pub fn bundle(&self) -> anyhow::Result<InputBundle> {
        Ok(InputBundle {
            technologies: self.technology.clone(),
            flex: self.flex_portfolio()?,
            process_heat: match &self.flex.process_heat {
                Some(ph) => Some(process_heat_load(ph)?),
                None => None,
            },
            district_heat: self.district_heat.clone(),
            load_series: self.load_series.clone(),
            series: Default::default(),
        })
    }

    /// Calendar years the series must cover.
    pub fn years(&self) -> Vec<i32> {
        let mut y: Vec<i32> = std::iter::once(self.run.invest_year)
            .chain(self.run.dispatch_years.iter().copied())
            .flat_map(|w| [w, w + 1])
            .collect();
        y.sort_unstable();
        y.dedup();
        y
    }

    pub fn mechanism(&self, scenario: &str, firm_target: f64) -> anyhow::Result<Mechanism> {
        let variant = match scenario {
            CAPACITY_MARKET => MechanismKind::CapacityMarket { firm_target },
            RESERVE => MechanismKind::ReliabilityReserve {
                activation_price: self.run.activation_price,
                firm_target,
            },
            ENERGY_ONLY => MechanismKind::EnergyOnly,
            other => bail!("unknown scenario {other:?}; expected one of {}", SCENARIOS.join(", ")),
        };
        Ok(Mechanism {
            variant,
            eligible_firm: self.run.eligible_firm.clone(),
        })
    }

    /// Scenario configuration with horizon and firm target resolved
    /// against the (series-carrying) bundle.
    pub fn scenario_config(&self, scenario: &str, bundle: &InputBundle) -> anyhow::Result<ScenarioConfig> {
        let r = &self.run;
        let mut cfg = ScenarioConfig {
            carbon_price: r.carbon_price,
            interest_rate: r.interest_rate,
            invest_window: WeatherWindow::new(r.invest_year),
            dispatch_windows: r.dispatch_years.iter().map(|&y| WeatherWindow::new(y)).collect(),
            flex_mode: r.flex_mode,
            demand_uplift_target: r.demand_uplift_target,
            flex_lifetime: r.flex_lifetime,
            reserve_technology: r.reserve_technology.clone(),
            unserved_cost_factor: r.unserved_cost_factor,
            reference_scarcity_price: r.reference_scarcity_price,
            storage_energy_fixed_om: r.storage_energy_fixed_om,
            ..ScenarioConfig::new(scenario, self.mechanism(scenario, 0.0)?)
        };
        cfg.horizon = match (r.horizon_hours, r.horizon_start) {
            (None, None) => Horizon::default(),
            (hours, Some(start)) => Horizon {
                start,
                hours: hours.unwrap_or(Horizon::default().hours - start.min(Horizon::default().hours)),
            },
            (Some(hours), None) => peak_horizon(&cfg, bundle, cfg.invest_window, hours).map_err(describe)?,
        };
        let target = match r.firm_target {
            Some(t) => t,
            None => firm_target_from_data(&cfg, bundle, &[cfg.invest_window], r.firm_margin).map_err(describe)?,
        };
        cfg.mechanism = self.mechanism(scenario, target)?;
        Ok(cfg)
    }
}

fn describe(e: FormulationError) -> anyhow::Error {
    anyhow::anyhow!("{e}")
}

/// Series unit expected for each series the bundle references.
pub fn series_units(bundle: &InputBundle) -> Vec<(String, flexcap_core::domain::SeriesUnit)> {
    use flexcap_core::domain::{SeriesUnit, TechKind};
    let mut out = vec![(bundle.load_series.clone(), SeriesUnit::GwEl)];
    for t in &bundle.technologies {
        if let Some(s) = &t.series {
            let unit = match t.kind {
                TechKind::Reservoir => SeriesUnit::GwEl,
                _ => SeriesUnit::Fraction,
            };
            out.push((s.clone(), unit));
        }
    }
    if let Some(dh) = &bundle.district_heat {
        out.push((dh.demand_series.clone(), SeriesUnit::GwTh));
        out.push((dh.cop_series.clone(), SeriesUnit::Ratio));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out
}
