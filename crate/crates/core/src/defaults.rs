//! 2030 parameter set for the German power sector and its flexible demand.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{
    CapacityBound, CapacitySpec, DistrictHeatSpec, DomainError, FlexOption, InputBundle, Mechanism, MechanismKind,
    StorageParams, TechKind, Technology,
};
use crate::flex_derive::{
    district_heating_option, industry_portfolio, merge_by_duration, process_heat_load, process_heat_option, DurationSplit,
    IndustryProcessRecord, ProcessHeatInput, RevenueRequirementInput, DEFAULT_STORAGE_INVEST,
};

pub const LOAD_SERIES: &str = "load";
pub const PV_SERIES: &str = "pv";
pub const ONSHORE_SERIES: &str = "wind_onshore";
pub const OFFSHORE_SERIES: &str = "wind_offshore";
pub const ROR_SERIES: &str = "ror";
pub const INFLOW_SERIES: &str = "reservoir_inflow";
pub const DH_DEMAND_SERIES: &str = "dh_demand";
pub const DH_COP_SERIES: &str = "dh_cop";

/// Firm capacity target (GW).
pub const FIRM_TARGET: f64 = 101.3;
/// EUR/MWh.
pub const ACTIVATION_PRICE: f64 = 500.0;
/// 3-hour aggregate of flexible industrial load (MW).
pub const THREE_HOUR_POWER: f64 = 1558.0;
/// TWh_th/a.
pub const DISTRICT_HEAT_DEMAND: f64 = 95.0;
/// EUR/kWh_th.
pub const DISTRICT_HEAT_STORAGE_INVEST: f64 = 50.0;
pub const ELECTRIFICATION_UPLIFT: f64 = 0.39;
/// Non-specific industry load before the uplift, chosen so that the
/// uplifted value is the tabulated 1050 MW.
pub const OTHER_BASE_LOAD: f64 = 1050.0 / (1.0 + ELECTRIFICATION_UPLIFT);

fn plant(id: &str, cap: CapacityBound, lifetime: f64, overnight: f64, fixed: f64, eff: f64) -> Technology {
    Technology {
        id: id.into(),
        kind: TechKind::Dispatchable,
        capacity: cap,
        lifetime,
        overnight_costs: overnight,
        fixed_costs: fixed,
        efficiency: eff,
        carbon_content: 0.0,
        fuel_costs: 0.0,
        var_costs: 0.0,
        series: None,
        storage: None,
        reservoir_energy: None,
    }
}

fn renewable(id: &str, cap: f64, lifetime: f64, overnight: f64, fixed: f64, eff: f64, series: &str) -> Technology {
    Technology {
        kind: TechKind::VariableRenewable,
        series: Some(series.into()),
        ..plant(id, CapacityBound::Fixed(cap), lifetime, overnight, fixed, eff)
    }
}

fn spec(cap: CapacityBound, overnight: f64, fixed: f64) -> CapacitySpec {
    CapacitySpec {
        capacity: cap,
        overnight_costs: overnight,
        fixed_costs: fixed,
    }
}

#[allow(clippy::too_many_arguments)]
fn storage(
    id: &str,
    lifetime: f64,
    charge: CapacitySpec,
    discharge: CapacitySpec,
    energy: CapacitySpec,
    eff: (f64, f64),
    retention: f64,
    var: (f64, f64),
) -> Technology {
    Technology {
        kind: TechKind::Storage,
        storage: Some(StorageParams {
            charge,
            discharge,
            energy,
            charge_efficiency: eff.0,
            discharge_efficiency: eff.1,
            standing_loss: 1.0 - retention,
            charge_var_costs: var.0,
            discharge_var_costs: var.1,
        }),
        ..plant(id, CapacityBound::Fixed(0.0), lifetime, 0.0, 0.0, 1.0)
    }
}

/// Power-sector technologies with 2030 costs (GW, EUR/kW, EUR/kWh).
pub fn technologies_2030() -> Vec<Technology> {
    let free = CapacityBound::free();
    let fixed = CapacityBound::Fixed;
    vec![
        renewable("ror", 3.93, 50.0, 3000.0, 30.0, 0.9, ROR_SERIES),
        Technology {
            carbon_content: 0.201,
            fuel_costs: 26.03,
            ..plant("ccgt", free, 25.0, 800.0, 20.0, 0.54)
        },
        Technology {
            carbon_content: 0.201,
            fuel_costs: 26.03,
            ..plant("ocgt", free, 25.0, 400.0, 15.0, 0.4)
        },
        Technology {
            carbon_content: 0.266,
            fuel_costs: 41.65,
            ..plant("oil", fixed(2.82), 25.0, 400.0, 7.0, 0.35)
        },
        Technology {
            fuel_costs: 10.0,
            ..plant("bio", fixed(11.06), 30.0, 1951.0, 100.0, 0.49)
        },
        renewable("onshore", 115.0, 25.0, 1182.0, 35.0, 1.0, ONSHORE_SERIES),
        renewable("offshore", 30.0, 25.0, 3935.0, 100.0, 1.0, OFFSHORE_SERIES),
        renewable("pv", 215.0, 25.0, 600.0, 25.0, 1.0, PV_SERIES),
        storage(
            "li-ion",
            20.0,
            spec(free, 50.0, 0.1),
            spec(free, 0.0, 0.0),
            spec(free, 300.0, 0.7),
            (0.97, 0.97),
            0.999989,
            (0.3, 0.3),
        ),
        storage(
            "p2g2p",
            22.5,
            spec(free, 305.0, 0.0),
            spec(free, 850.0, 0.0),
            spec(free, 2.0, 0.0),
            (0.73, 0.6),
            1.0,
            (1.2, 1.2),
        ),
        storage(
            "phs-open",
            80.0,
            spec(fixed(1.86), 550.0, 0.0),
            spec(fixed(2.14), 550.0, 0.0),
            spec(fixed(471.23), 10.0, 0.0),
            (0.97, 0.91),
            0.999995,
            (0.56, 0.56),
        ),
        storage(
            "phs-closed",
            80.0,
            spec(fixed(6.56), 550.0, 0.0),
            spec(fixed(6.41), 550.0, 0.0),
            spec(fixed(391.58), 10.0, 0.0),
            (0.97, 0.91),
            0.999995,
            (0.56, 0.56),
        ),
        Technology {
            kind: TechKind::Reservoir,
            var_costs: 0.1,
            series: Some(INFLOW_SERIES.into()),
            reservoir_energy: Some(spec(fixed(237.22), 10.0, 0.0)),
            ..plant("reservoir", fixed(0.82), 50.0, 200.0, 30.0, 0.95)
        },
    ]
}

fn record(name: &str, share: f64, load: f64, dur: f64, min: Option<f64>, cost: f64) -> IndustryProcessRecord {
    IndustryProcessRecord {
        name: name.into(),
        dr_share: share,
        installed_load: load,
        max_duration: dur,
        min_load_change_cost: min,
        load_change_cost: cost,
        storage_invest_cost: DEFAULT_STORAGE_INVEST,
        aggregate_other: false,
        shedding: false,
    }
}

/// Energy-intensive processes with their demand-response potentials.
pub fn industry_records_2030() -> Vec<IndustryProcessRecord> {
    vec![
        record("Electric arc furnace", 0.99, 1097.0, 336.0, None, 283.0),
        record("Aluminum", 0.95, 543.0, 336.0, None, 27.0),
        record("Paper", 0.95, 312.0, 12.0, Some(10.0), 69.0),
        record("Cement", 0.90, 360.0, 336.0, Some(80.0), 320.0),
        record("Chlor-alkali", 0.54, 1484.0, 72.0, Some(0.0), 100.0),
        record("Air separation", 0.70, 570.0, 72.0, Some(0.0), 243.0),
        IndustryProcessRecord {
            aggregate_other: true,
            ..record("Other", 0.10, 1050.0, 336.0, Some(10.0), 300.0)
        },
    ]
}

/// Inputs behind the revenue-requirement costs of steel, aluminum and cement.
pub fn revenue_inputs_2030() -> Vec<(String, RevenueRequirementInput)> {
    let r = |g, p, e| RevenueRequirementInput {
        gva_share: g,
        product_price: p,
        specific_electricity: e,
    };
    vec![
        ("Electric arc furnace".into(), r(0.25, 600.0, 0.53)),
        ("Aluminum".into(), r(0.20, 2000.0, 15.0)),
        ("Cement".into(), r(0.40, 80.0, 0.1)),
    ]
}

/// Full flex portfolio with the 3-hour bucket calibrated.
pub fn flex_portfolio_2030() -> Result<Vec<FlexOption>, DomainError> {
    let mut out = industry_portfolio(
        &industry_records_2030(),
        OTHER_BASE_LOAD,
        ELECTRIFICATION_UPLIFT,
        &DurationSplit::ThreeHourTarget { mw: THREE_HOUR_POWER },
    )?;
    out.push(process_heat_option(&ProcessHeatInput::default())?);
    out.push(district_heating_option(DISTRICT_HEAT_DEMAND, DISTRICT_HEAT_STORAGE_INVEST)?);
    Ok(out)
}

pub fn eligible_firm() -> Vec<String> {
    Mechanism::default_eligible()
}

pub fn capacity_market(firm_target: f64) -> Mechanism {
    Mechanism {
        variant: MechanismKind::CapacityMarket { firm_target },
        eligible_firm: eligible_firm(),
    }
}

pub fn reliability_reserve(activation_price: f64, firm_target: f64) -> Mechanism {
    Mechanism {
        variant: MechanismKind::ReliabilityReserve {
            activation_price,
            firm_target,
        },
        eligible_firm: eligible_firm(),
    }
}

/// Technologies, flexibility and heat without any series attached.
pub fn bundle_2030() -> Result<InputBundle, DomainError> {
    Ok(InputBundle {
        technologies: technologies_2030(),
        flex: flex_portfolio_2030()?,
        process_heat: Some(process_heat_load(&ProcessHeatInput::default())?),
        district_heat: Some(DistrictHeatSpec {
            demand_series: DH_DEMAND_SERIES.into(),
            cop_series: DH_COP_SERIES.into(),
            heat_pump_oversize: 0.0,
        }),
        load_series: LOAD_SERIES.into(),
        series: Default::default(),
    })
}

/// Technologies kept in the reduced bundle: no hydro, no storage plants.
pub const COMPACT_TECHNOLOGIES: [&str; 8] = ["ror", "ccgt", "ocgt", "oil", "bio", "onshore", "offshore", "pv"];

/// Smaller bundle for short horizons solved with the dense reference
/// simplex: hydro and storage plants dropped, industry options merged
/// per duration.
pub fn bundle_2030_compact() -> Result<InputBundle, DomainError> {
    let full = bundle_2030()?;
    Ok(InputBundle {
        technologies: full
            .technologies
            .into_iter()
            .filter(|t| COMPACT_TECHNOLOGIES.contains(&t.id.as_str()))
            .collect(),
        flex: merge_by_duration(&full.flex),
        ..full
    })
}
