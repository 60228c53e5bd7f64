//! validate, derive flexibility, solve and report for a set of scenarios.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use flexcap_core::domain::{validate, InputBundle, ScenarioConfig, ScenarioResult};
use flexcap_core::lp::Solver;
use flexcap_core::report::summarize;
use flexcap_core::runner::{assemble, dispatch, invest, RunError, Solved};
use flexcap_core::synth::{self, SeriesSet, SynthSpec};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::artifacts;
use crate::backend::BackendChoice;
use crate::params::{series_units, Params, CAPACITY_MARKET, RESERVE};
use crate::series;

/// Where the hourly series come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Directory(PathBuf),
    Synthetic(SynthSpec),
}

#[derive(Debug, Clone)]
pub struct RunPlan {
    pub params: Params,
    pub data: DataSource,
    pub backend: BackendChoice,
    pub out_dir: PathBuf,
    /// Concurrent window solves.
    pub jobs: usize,
    /// Also write the interchange file of every solve.
    pub emit_lp: bool,
}

/// Failure tagged with the pipeline stage it happened in.
#[derive(Debug, Clone, Serialize, thiserror::Error)]
#[error("[{stage}] {message}")]
pub struct StageError {
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub message: String,
}

impl StageError {
    pub fn new(stage: &str, message: impl std::fmt::Display) -> Self {
        Self {
            stage: stage.into(),
            scenario: None,
            message: format!("{message:#}"),
        }
    }

    fn in_scenario(mut self, s: &str) -> Self {
        self.scenario = Some(s.into());
        self
    }

    fn from_run(e: RunError) -> Self {
        let stage = match &e {
            RunError::Invalid(_) => "validate",
            RunError::Formulation(_) => "formulation",
            RunError::Solve { stage, .. } | RunError::NotOptimal { stage, .. } => stage.as_str(),
            RunError::Mismatch(_) => "report",
        };
        Self::new(stage, e)
    }
}

fn stage<T, E: std::fmt::Display>(name: &str, r: Result<T, E>) -> Result<T, StageError> {
    r.map_err(|e| StageError::new(name, e))
}

/// Bundle with series attached plus the digests identifying it.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub bundle: InputBundle,
    /// Series file digests by file name (empty for synthetic data).
    pub files: BTreeMap<String, String>,
    pub hash: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    d.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest over the parameter set and every series value.
fn input_hash(params: &Params, set: &SeriesSet) -> Result<String, StageError> {
    let mut h = Sha256::new();
    h.update(stage("load-params", params.to_toml())?.as_bytes());
    for (name, years) in set {
        for (year, s) in years {
            h.update(name.as_bytes());
            h.update(year.to_le_bytes());
            for v in &s.values {
                h.update(v.to_le_bytes());
            }
        }
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

pub fn load_inputs(params: &Params, data: &DataSource) -> Result<Inputs, StageError> {
    let mut bundle = stage("flex-derive", params.bundle())?;
    let years = params.years();
    let wanted = series_units(&bundle);
    let (set, files) = match data {
        DataSource::Directory(dir) => {
            let (set, paths) = stage("load-series", series::read_set(dir, &wanted, &years))?;
            let mut files = BTreeMap::new();
            for p in paths {
                let bytes = stage("load-series", std::fs::read(&p))?;
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                files.insert(name, sha256_hex(&bytes));
            }
            (set, files)
        }
        DataSource::Synthetic(spec) => {
            let spec = SynthSpec {
                first_year: years[0],
                last_year: *years.last().unwrap_or(&years[0]),
                ..*spec
            };
            let mut set = synth::generate(&spec);
            set.retain(|name, _| wanted.iter().any(|(w, _)| w == name));
            (set, BTreeMap::new())
        }
    };
    let hash = input_hash(params, &set)?;
    bundle.series = set;
    Ok(Inputs { bundle, files, hash })
}

/// Solved stages of one scenario, for interchange export.
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub result: ScenarioResult,
    pub solves: Vec<Solved>,
}

pub fn run_scenario(
    params: &Params,
    inputs: &Inputs,
    scenario: &str,
    solver: &Solver,
    pool: &rayon::ThreadPool,
) -> Result<ScenarioRun, StageError> {
    let bundle = &inputs.bundle;
    let config = stage("config", params.scenario_config(scenario, bundle))?;
    validate(&config, bundle).map_err(|v| StageError::from_run(RunError::Invalid(v)))?;
    let inv = invest(&config, bundle, solver).map_err(StageError::from_run)?;
    let solved: Vec<_> = pool.install(|| {
        config
            .dispatch_windows
            .par_iter()
            .map(|&w| dispatch(&config, bundle, solver, &inv, w))
            .collect()
    });
    let mut windows = Vec::with_capacity(solved.len());
    let mut solves = Vec::with_capacity(solved.len() + 1);
    for s in solved {
        let (s, w) = s.map_err(StageError::from_run)?;
        windows.push(w);
        solves.push(s);
    }
    let mut result = assemble(&config, bundle, &inv, windows);
    result.input_hash = inputs.hash.clone();
    solves.insert(0, inv.solved);
    Ok(ScenarioRun { config, result, solves })
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    backend: String,
    data_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    synth: Option<SynthSpec>,
    input_hash: &'a str,
    series_files: &'a BTreeMap<String, String>,
    params_toml: &'a str,
    scenarios: Vec<&'a ScenarioConfig>,
    outputs: BTreeMap<String, String>,
}

/// Outcome of [`execute`].
pub struct RunReport {
    pub results: Vec<ScenarioRun>,
    pub files: Vec<PathBuf>,
}

fn relative(base: &Path, p: &Path) -> String {
    p.strip_prefix(base).unwrap_or(p).to_string_lossy().replace('\\', "/")
}

/// Runs every scenario of the plan and writes the artifact tree.
pub fn execute(plan: &RunPlan, scenarios: &[String]) -> Result<RunReport, StageError> {
    let out = &plan.out_dir;
    stage("write", std::fs::create_dir_all(out))?;
    let _ = std::fs::remove_file(out.join("error.json"));
    let inputs = load_inputs(&plan.params, &plan.data)?;
    let solver = stage("backend", plan.backend.solver())?;
    let pool = stage(
        "config",
        rayon::ThreadPoolBuilder::new().num_threads(plan.jobs.max(1)).build(),
    )?;
    let params_toml = stage("load-params", plan.params.to_toml())?;

    let mut files = Vec::new();
    let p = out.join("params.toml");
    stage("write", std::fs::write(&p, &params_toml))?;
    files.push(p);
    files.push(stage(
        "write",
        artifacts::write_flex_portfolio(&out.join("flex_portfolio.csv"), &inputs.bundle.flex),
    )?);

    let mut results = Vec::new();
    for s in scenarios {
        let run = run_scenario(&plan.params, &inputs, s, &solver, &pool).map_err(|e| e.in_scenario(s))?;
        let dir = out.join(s);
        files.extend(stage("write", artifacts::write_scenario(&dir, &run.result, &run.config))?);
        if plan.emit_lp {
            for solved in &run.solves {
                files.extend(stage("write", artifacts::write_lp(&dir.join("lp"), s, solved))?);
            }
        }
        results.push(run);
    }

    let find = |name: &str| results.iter().find(|r| r.result.scenario == name);
    if let (Some(cm), Some(rr)) = (find(CAPACITY_MARKET), find(RESERVE)) {
        let rows = stage("report", summarize(&cm.result, &rr.result))?;
        files.push(stage("write", artifacts::write_comparison(&out.join("comparison.csv"), &rows))?);
    }
    let summary: String = results
        .iter()
        .map(|r| artifacts::summary_text(&r.result, &r.config))
        .collect::<Vec<_>>()
        .join("\n");
    let p = out.join("summary.txt");
    stage("write", std::fs::write(&p, summary))?;
    files.push(p);

    let mut outputs = BTreeMap::new();
    for f in &files {
        let bytes = stage("write", std::fs::read(f))?;
        outputs.insert(relative(out, f), sha256_hex(&bytes));
    }
    let (data_source, synth) = match &plan.data {
        DataSource::Directory(_) => ("directory", None),
        DataSource::Synthetic(s) => ("synthetic", Some(*s)),
    };
    let manifest = Manifest {
        tool: "flexcap",
        version: env!("CARGO_PKG_VERSION"),
        core_version: flexcap_core::VERSION,
        backend: plan.backend.label(),
        data_source,
        synth,
        input_hash: &inputs.hash,
        series_files: &inputs.files,
        params_toml: &params_toml,
        scenarios: results.iter().map(|r| &r.config).collect(),
        outputs,
    };
    let p = out.join("manifest.json");
    stage(
        "write",
        std::fs::write(&p, stage("write", serde_json::to_vec_pretty(&manifest))?),
    )?;
    files.push(p);
    Ok(RunReport { results, files })
}

/// Machine-readable failure record next to the outputs.
pub fn write_error(out_dir: &Path, e: &StageError) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let p = out_dir.join("error.json");
    std::fs::write(&p, serde_json::to_vec_pretty(e).unwrap_or_default())?;
    Ok(p)
}
