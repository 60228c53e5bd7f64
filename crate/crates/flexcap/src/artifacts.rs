//! Result files. Every CSV has a fixed header; numbers use the shortest
//! representation that parses back to the same `f64`.
//!
//! | file | columns |
//! |---|---|
//! | `prices_{window}.csv` | `hour,price` (EUR/MWh_el; hour counted from the window start) |
//! | `dispatch_{window}.csv` | `hour,demand,<technology>...,reserve,unserved` (GW) |
//! | `reserve_{window}.csv` | `hour,reserve_output,unserved,price` |
//! | `capacities.csv` | `kind,id,value` (GW or GWh) |
//! | `metrics.csv` | `window,avg_price,avg_price_simple,levy,supply_cost,supply_cost_simple,activation_hours,reserve_energy,unserved_energy` |
//! | `pdc_{scenario}_{window}.csv` | `rank,price` |
//! | `flex_energy.csv` | `window,id,family,energy` (GWh) |
//! | `flex_portfolio.csv` | see [`FLEX_PORTFOLIO_HEADER`] |
//! | `comparison.csv` | `section,key,market,reserve,ratio` |
//! | `{scenario}_{window}_{stage}_index.csv` | `kind,name,label` |

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use flexcap_core::domain::{FlexOption, ScenarioConfig, ScenarioResult};
use flexcap_core::formulation::ModelIndex;
use flexcap_core::lp::{export_interchange, LpProblem};
use flexcap_core::report::{flex_by_family, price_duration, ComparisonRow};
use flexcap_core::runner::Solved;

pub const FLEX_PORTFOLIO_HEADER: [&str; 10] = [
    "id",
    "family",
    "power_mw",
    "duration_cap_h",
    "energy_invest_eur_per_kwh",
    "storage_efficiency",
    "standing_loss_per_day",
    "energy_upper_bound_gwh",
    "shedding",
    "tiers",
];

fn num(v: f64) -> String {
    v.to_string()
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> anyhow::Result<PathBuf>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

/// Writes all per-scenario files into `dir`; returns the written paths.
pub fn write_scenario(dir: &Path, result: &ScenarioResult, config: &ScenarioConfig) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut out = Vec::new();
    for w in &result.windows {
        let label = w.window.label();
        let hour = |t: usize| (w.first_hour + t).to_string();
        out.push(write_csv(
            &dir.join(format!("prices_{label}.csv")),
            &["hour", "price"],
            w.prices.iter().enumerate().map(|(t, p)| vec![hour(t), num(*p)]),
        )?);

        let techs: Vec<&String> = w.dispatch.keys().collect();
        let mut header = vec!["hour", "demand"];
        header.extend(techs.iter().map(|s| s.as_str()));
        header.extend(["reserve", "unserved"]);
        out.push(write_csv(
            &dir.join(format!("dispatch_{label}.csv")),
            &header,
            (0..w.prices.len()).map(|t| {
                let mut r = vec![hour(t), num(w.demand[t])];
                r.extend(techs.iter().map(|k| num(w.dispatch[*k][t])));
                r.push(num(w.reserve_output.get(t).copied().unwrap_or(0.0)));
                r.push(num(w.unserved.get(t).copied().unwrap_or(0.0)));
                r
            }),
        )?);

        out.push(write_csv(
            &dir.join(format!("reserve_{label}.csv")),
            &["hour", "reserve_output", "unserved", "price"],
            (0..w.prices.len()).map(|t| {
                vec![
                    hour(t),
                    num(w.reserve_output.get(t).copied().unwrap_or(0.0)),
                    num(w.unserved.get(t).copied().unwrap_or(0.0)),
                    num(w.prices[t]),
                ]
            }),
        )?);

        out.push(write_csv(
            &dir.join(format!("pdc_{}_{label}.csv", result.scenario)),
            &["rank", "price"],
            price_duration(&w.prices)
                .into_iter()
                .enumerate()
                .map(|(i, p)| vec![(i + 1).to_string(), num(p)]),
        )?);
    }

    let inst = &result.installed;
    let mut caps = Vec::new();
    for (kind, map) in [
        ("power", &inst.power),
        ("storage-charge", &inst.storage_charge),
        ("storage-energy", &inst.storage_energy),
        ("flex-energy", &inst.flex_energy),
    ] {
        caps.extend(map.iter().map(|(k, v)| vec![kind.to_string(), k.clone(), num(*v)]));
    }
    caps.push(vec!["reserve".into(), config.reserve_technology.clone(), num(result.reserve_size)]);
    out.push(write_csv(&dir.join("capacities.csv"), &["kind", "id", "value"], caps)?);

    out.push(write_csv(
        &dir.join("metrics.csv"),
        &[
            "window",
            "avg_price",
            "avg_price_simple",
            "levy",
            "supply_cost",
            "supply_cost_simple",
            "activation_hours",
            "reserve_energy",
            "unserved_energy",
        ],
        result.metrics.iter().map(|m| {
            vec![
                m.window.clone(),
                num(m.avg_price),
                num(m.avg_price_simple),
                num(m.levy),
                num(m.supply_cost),
                num(m.supply_cost_simple),
                m.activation_hours.to_string(),
                num(m.reserve_energy),
                num(m.unserved_energy),
            ]
        }),
    )?);

    let family = |id: &str| result.flex_family.get(id).map(|f| f.as_str()).unwrap_or("").to_string();
    let mut flex = Vec::new();
    flex.extend(
        inst.flex_energy
            .iter()
            .map(|(id, e)| vec!["invest".into(), id.clone(), family(id), num(*e)]),
    );
    for w in &result.windows {
        flex.extend(
            w.flex_energy
                .iter()
                .map(|(id, e)| vec![w.window.label(), id.clone(), family(id), num(*e)]),
        );
    }
    out.push(write_csv(&dir.join("flex_energy.csv"), &["window", "id", "family", "energy"], flex)?);

    let json = dir.join("result.json");
    std::fs::write(&json, serde_json::to_vec_pretty(result)?).with_context(|| format!("writing {}", json.display()))?;
    out.push(json);

    let txt = dir.join("summary.txt");
    std::fs::write(&txt, summary_text(result, config)).with_context(|| format!("writing {}", txt.display()))?;
    out.push(txt);
    Ok(out)
}

pub fn write_flex_portfolio(path: &Path, flex: &[FlexOption]) -> anyhow::Result<PathBuf> {
    write_csv(
        path,
        &FLEX_PORTFOLIO_HEADER,
        flex.iter().map(|f| {
            let tiers: Vec<String> = f
                .activation_cost_tiers
                .iter()
                .map(|t| format!("{}:{}", t.up_to, t.cost))
                .collect();
            vec![
                f.id.clone(),
                f.family.as_str().into(),
                num(f.power),
                num(f.duration_cap),
                num(f.energy_invest_cost),
                num(f.storage_efficiency),
                num(f.standing_loss),
                f.energy_upper_bound.map(num).unwrap_or_default(),
                f.shedding.to_string(),
                tiers.join(";"),
            ]
        }),
    )
}

pub fn write_comparison(path: &Path, rows: &[ComparisonRow]) -> anyhow::Result<PathBuf> {
    write_csv(
        path,
        &["section", "key", "market", "reserve", "ratio"],
        rows.iter()
            .map(|r| vec![r.section.clone(), r.key.clone(), num(r.market), num(r.reserve), num(r.ratio)]),
    )
}

/// Interchange file `{scenario}_{window}_{stage}.mps` of a solve plus its
/// index CSV.
pub fn write_lp(dir: &Path, scenario: &str, solved: &Solved) -> anyhow::Result<Vec<PathBuf>> {
    let stem = format!("{scenario}_{}_{}", solved.window.label(), solved.stage.as_str());
    write_model(dir, &stem, &solved.problem, &solved.index)
}

/// `{stem}.mps` and `{stem}_index.csv` mapping interchange names to labels.
pub fn write_model(dir: &Path, stem: &str, p: &LpProblem, idx: &ModelIndex) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mps = dir.join(format!("{stem}.mps"));
    std::fs::write(&mps, export_interchange(p)?).with_context(|| format!("writing {}", mps.display()))?;
    let vars = p
        .variables
        .iter()
        .zip(&idx.var_labels)
        .map(|(v, l)| vec!["var".to_string(), v.name.clone(), l.clone()]);
    let rows = p
        .constraints
        .iter()
        .zip(&idx.row_labels)
        .map(|(c, l)| vec!["row".to_string(), c.name.clone(), l.clone()]);
    let index = write_csv(&dir.join(format!("{stem}_index.csv")), &["kind", "name", "label"], vars.chain(rows))?;
    Ok(vec![mps, index])
}

pub fn summary_text(r: &ScenarioResult, config: &ScenarioConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario {} ({})", r.scenario, r.mechanism);
    if let Some(t) = config.mechanism.firm_target() {
        let _ = writeln!(s, "firm capacity target: {t:.2} GW");
    }
    if let Some(p) = config.mechanism.activation_price() {
        let _ = writeln!(s, "activation price: {p:.0} EUR/MWh");
    }
    let _ = writeln!(
        s,
        "horizon: {} hours from hour {} of each window",
        config.horizon.hours, config.horizon.start
    );
    let _ = writeln!(s, "reserve held outside the market: {:.2} GW", r.reserve_size);
    let _ = writeln!(
        s,
        "firm wholesale capacity: {:.2} GW",
        r.installed.firm(&config.mechanism.eligible_firm)
    );
    s.push_str("installed power (GW):");
    for (k, v) in &r.installed.power {
        let _ = write!(s, " {k} {v:.2};");
    }
    s.push('\n');
    s.push_str("flex storage (GWh):");
    let fam = flex_by_family(r, &r.installed.flex_energy);
    let mut total = 0.0;
    for (f, e) in &fam {
        total += e;
        let _ = write!(s, " {} {e:.2};", f.as_str());
    }
    let _ = writeln!(s, " total {total:.2}");
    for (w, m) in r.windows.iter().zip(&r.metrics) {
        let max = w.prices.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(
            s,
            "window {}: average price {:.2} EUR/MWh (time-weighted {:.2}), levy {:.2}, supply cost {:.2} \
             (time-weighted {:.2}), highest price {:.2}, reserve activated in {} hours for {:.3} GWh, \
             unserved {:.3} GWh",
            m.window,
            m.avg_price,
            m.avg_price_simple,
            m.levy,
            m.supply_cost,
            m.supply_cost_simple,
            max,
            m.activation_hours,
            m.reserve_energy,
            m.unserved_energy
        );
    }
    s
}
