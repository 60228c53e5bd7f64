//! Two-step procedure: invest on one window, then dispatch every window
//! with the capacities fixed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::domain::{
    validate, FlexMode, InputBundle, InstalledCapacities, ScenarioConfig, ScenarioResult, Violation, WeatherWindow,
    WindowResult,
};
use crate::formulation::{build, size_reserve, window_inputs, FormulationError, ModelIndex, Stage, StageKind};
use crate::lp::{LpError, LpProblem, LpSolution, LpStatus, Sense, Solver};
use crate::report;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("invalid input: {}", describe(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Formulation(#[from] FormulationError),
    #[error("window {window} {}: {source}", .stage.as_str())]
    Solve {
        window: i32,
        stage: StageKind,
        source: LpError,
    },
    #[error("window {window} {}: status {status:?}{detail}", .stage.as_str())]
    NotOptimal {
        window: i32,
        stage: StageKind,
        status: LpStatus,
        detail: String,
    },
    #[error("input mismatch: {0}")]
    Mismatch(String),
}

fn describe(v: &[Violation]) -> String {
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        s.push_str(&alloc::format!("{x}"));
    }
    s
}

/// A built and solved model.
#[derive(Debug, Clone)]
pub struct Solved {
    pub window: WeatherWindow,
    pub stage: StageKind,
    pub problem: LpProblem,
    pub index: ModelIndex,
    pub solution: LpSolution,
}

/// Hour-ordered energy-balance duals (EUR/MWh).
pub fn extract_prices(solution: &LpSolution, index: &ModelIndex) -> Result<Vec<f64>, LpStatus> {
    if !solution.is_optimal() {
        return Err(solution.status);
    }
    Ok(index.balance.iter().map(|r| solution.duals[r.0]).collect())
}

/// First energy balance that cannot be met even with every supply at its
/// upper bound; names the likely cause of an infeasible model.
pub fn diagnose_infeasible(p: &LpProblem, index: &ModelIndex) -> Option<String> {
    for (h, r) in index.balance.iter().enumerate() {
        let row = &p.constraints[r.0];
        if row.sense != Sense::Eq {
            continue;
        }
        let max_supply: f64 = row
            .terms
            .iter()
            .filter(|(_, a)| *a > 0.0)
            .map(|&(v, a)| a * p.variables[v.0].upper)
            .sum();
        if max_supply < row.rhs {
            return Some(alloc::format!(
                "{} (hour {h}): load {:.3} GW exceeds available supply {:.3} GW",
                index.row_labels[r.0],
                row.rhs,
                max_supply
            ));
        }
    }
    None
}

/// Builds and solves one stage for `window`.
pub fn solve_stage(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    solver: &Solver,
    window: WeatherWindow,
    stage: Stage,
) -> Result<Solved, RunError> {
    let kind = match stage {
        Stage::Invest => StageKind::Invest,
        Stage::Dispatch { .. } => StageKind::Dispatch,
    };
    let inputs = window_inputs(config, bundle, window)?;
    let (problem, index) = build(config, bundle, &inputs, stage)?;
    let solution = solver.solve(&problem).map_err(|source| RunError::Solve {
        window: window.start_year,
        stage: kind,
        source,
    })?;
    if !solution.is_optimal() {
        let detail = match (solution.status, diagnose_infeasible(&problem, &index)) {
            (LpStatus::Infeasible, Some(d)) => alloc::format!(" at {d}"),
            _ => String::new(),
        };
        return Err(RunError::NotOptimal {
            window: window.start_year,
            stage: kind,
            status: solution.status,
            detail,
        });
    }
    Ok(Solved {
        window,
        stage: kind,
        problem,
        index,
        solution,
    })
}

/// Turns a solved model into per-hour results.
pub fn decode_window(solved: &Solved) -> WindowResult {
    let x = &solved.solution.primal;
    let idx = &solved.index;
    let series = |vars: &[crate::lp::VarId]| vars.iter().map(|v| x[v.0].max(0.0)).collect::<Vec<f64>>();
    let mut dispatch = BTreeMap::new();
    for (id, v) in idx.generation.iter().chain(idx.storage_discharge.iter()) {
        dispatch.insert(id.clone(), series(v));
    }
    let zeros = alloc::vec![0.0; idx.hours];
    let flex_energy = idx
        .flex_energy
        .keys()
        .chain(idx.fixed_flex_energy.keys())
        .map(|id| (id.clone(), idx.flex_energy_value(id, x).unwrap_or(0.0).max(0.0)))
        .collect();
    WindowResult {
        window: solved.window,
        first_hour: idx.first_hour,
        prices: extract_prices(&solved.solution, idx).unwrap_or_default(),
        demand: idx.demand(x),
        dispatch,
        reserve_output: idx.reserve.as_deref().map_or(zeros.clone(), series),
        unserved: idx.unserved.as_deref().map_or(zeros, series),
        flex_energy,
        objective: solved.solution.objective,
    }
}

/// Outcome of the investment stage.
#[derive(Debug, Clone)]
pub struct InvestOutcome {
    pub solved: Solved,
    pub installed: InstalledCapacities,
    /// GW held in the reserve (0 without one).
    pub reserve_size: f64,
}

pub fn invest(config: &ScenarioConfig, bundle: &InputBundle, solver: &Solver) -> Result<InvestOutcome, RunError> {
    let solved = solve_stage(config, bundle, solver, config.invest_window, Stage::Invest)?;
    let installed = solved.index.installed(&solved.solution.primal);
    let reserve_size = match (config.mechanism.is_reserve(), config.mechanism.firm_target()) {
        (true, Some(target)) => size_reserve(&installed, &config.mechanism.eligible_firm, target),
        _ => 0.0,
    };
    Ok(InvestOutcome {
        solved,
        installed,
        reserve_size,
    })
}

pub fn dispatch(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    solver: &Solver,
    invest: &InvestOutcome,
    window: WeatherWindow,
) -> Result<(Solved, WindowResult), RunError> {
    let solved = solve_stage(
        config,
        bundle,
        solver,
        window,
        Stage::Dispatch {
            capacities: &invest.installed,
            reserve_size: invest.reserve_size,
        },
    )?;
    let result = decode_window(&solved);
    Ok((solved, result))
}

/// Collects window results (in dispatch-window order) into a scenario result.
pub fn assemble(
    config: &ScenarioConfig,
    bundle: &InputBundle,
    invest: &InvestOutcome,
    windows: Vec<WindowResult>,
) -> ScenarioResult {
    let metrics = windows
        .iter()
        .map(|w| report::window_metrics(config, bundle, invest.reserve_size, w))
        .collect();
    ScenarioResult {
        scenario: config.name.clone(),
        mechanism: config.mechanism.short_name().into(),
        installed: invest.installed.clone(),
        reserve_size: invest.reserve_size,
        invest_objective: invest.solved.solution.objective,
        windows,
        metrics,
        flex_family: bundle.flex.iter().map(|f| (f.id.clone(), f.family)).collect(),
        input_hash: String::new(),
    }
}

/// Runs the whole procedure sequentially.
pub fn run(config: &ScenarioConfig, bundle: &InputBundle, solver: &Solver) -> Result<ScenarioResult, RunError> {
    validate(config, bundle).map_err(RunError::Invalid)?;
    let inv = invest(config, bundle, solver)?;
    let mut windows = Vec::with_capacity(config.dispatch_windows.len());
    for &w in &config.dispatch_windows {
        let (_, r) = dispatch(config, bundle, solver, &inv, w)?;
        windows.push(r);
    }
    Ok(assemble(config, bundle, &inv, windows))
}

/// Whether flex sizes differ per window in this configuration.
pub fn reoptimizes_flex(config: &ScenarioConfig) -> bool {
    config.flex_mode == FlexMode::ReoptimizePerYear
}
