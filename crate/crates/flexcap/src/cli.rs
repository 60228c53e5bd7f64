//! `flexcap` command line. Exit codes: 0 success, 1 failure, 2 usage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexcap_core::domain::{validate, FlexMode, WeatherWindow};
use flexcap_core::formulation::{build, window_inputs, Stage};
use flexcap_core::report::summarize;
use flexcap_core::runner::invest;
use flexcap_core::synth::{self, SynthSpec};

use crate::artifacts;
use crate::backend::{BackendChoice, BACKEND_ENV};
use crate::params::{Params, SCENARIOS};
use crate::pipeline::{self, DataSource, RunPlan, StageError};
use crate::series;

#[derive(Debug, Parser)]
#[command(name = "flexcap", version, about = "Capacity mechanisms and demand-side flexibility model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write synthetic hourly series and a parameter file.
    Synth(SynthArgs),
    /// Check parameters and series without solving.
    Validate(ValidateArgs),
    /// Solve the scenarios and write the artifact tree.
    Run(RunArgs),
    /// Compare two scenario result directories.
    Compare(CompareArgs),
    /// Write the interchange file of one model.
    ExportLp(ExportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Template {
    /// One peak week, reduced technology set, merged industry options.
    Desk,
    /// Full technology set, seven full windows.
    Full,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2008)]
    pub first_year: i32,
    #[arg(long, default_value_t = 2015)]
    pub last_year: i32,
    /// Annual base electric load (TWh).
    #[arg(long)]
    pub base_load_twh: Option<f64>,
    /// Annual district heat (TWh_th).
    #[arg(long)]
    pub dh_heat_twh: Option<f64>,
    /// Parameter file written next to the series.
    #[arg(long, value_enum, default_value_t = Template::Desk)]
    pub template: Template,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Parameter file (TOML). Defaults to the desk-scale set.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Directory of `{name}_{year}.csv` series. Without it, series are
    /// generated in memory from the seed.
    #[arg(long)]
    pub series: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendKind {
    Reference,
    External,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = BackendKind::Reference)]
    pub backend: BackendKind,
    /// External solver program; defaults to the environment variable.
    #[arg(long)]
    pub backend_path: Option<PathBuf>,
}

/// Flags that override the parameter file.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    #[arg(long)]
    pub invest_year: Option<i32>,
    #[arg(long, value_delimiter = ',')]
    pub dispatch_years: Option<Vec<i32>>,
    #[arg(long)]
    pub activation_price: Option<f64>,
    /// GW.
    #[arg(long)]
    pub firm_target: Option<f64>,
    #[arg(long)]
    pub horizon_hours: Option<usize>,
    #[arg(long)]
    pub horizon_start: Option<usize>,
    #[arg(long)]
    pub carbon_price: Option<f64>,
    #[arg(long)]
    pub interest_rate: Option<f64>,
    #[arg(long, value_parser = parse_flex_mode)]
    pub flex_mode: Option<FlexMode>,
    #[arg(long)]
    pub size_limit: Option<usize>,
}

fn parse_flex_mode(s: &str) -> Result<FlexMode, String> {
    match s {
        "fixed-from-invest" => Ok(FlexMode::FixedFromInvest),
        "reoptimize-per-year" => Ok(FlexMode::ReoptimizePerYear),
        _ => Err("expected fixed-from-invest or reoptimize-per-year".into()),
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long = "scenario", value_parser = clap::builder::PossibleValuesParser::new(SCENARIOS))]
    pub scenarios: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long = "scenario", value_parser = clap::builder::PossibleValuesParser::new(SCENARIOS))]
    pub scenarios: Vec<String>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Concurrent window solves.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Also write the interchange file of every solve.
    #[arg(long)]
    pub emit_lp: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, default_value = "comparison.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StageArg {
    Invest,
    Dispatch,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SCENARIOS))]
    pub scenario: String,
    /// Window start year; defaults to the invest year.
    #[arg(long)]
    pub window: Option<i32>,
    #[arg(long, value_enum, default_value_t = StageArg::Invest)]
    pub stage: StageArg,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

enum Failure {
    Usage(String),
    Stage(StageError),
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure::Stage(e)
    }
}

fn fail(stage: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Stage(StageError::new(stage, e))
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let out_dir = match &cli.command {
        Command::Run(a) => Some(a.out.clone()),
        _ => None,
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Stage(e)) => {
            eprintln!("error: {e}");
            if let Some(dir) = out_dir {
                if let Ok(p) = pipeline::write_error(&dir, &e) {
                    eprintln!("details in {}", p.display());
                }
            }
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Synth(a) => cmd_synth(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Run(a) => cmd_run(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::ExportLp(a) => cmd_export(&a),
    }
}

fn cmd_synth(a: &SynthArgs) -> Result<(), Failure> {
    if a.first_year > a.last_year {
        return Err(Failure::Usage("--first-year must not exceed --last-year".into()));
    }
    let d = SynthSpec::default();
    let spec = SynthSpec {
        seed: a.seed,
        first_year: a.first_year,
        last_year: a.last_year,
        base_load_twh: a.base_load_twh.unwrap_or(d.base_load_twh),
        dh_heat_twh: a.dh_heat_twh.unwrap_or(d.dh_heat_twh),
        ..d
    };
    let files = series::write_set(&a.out, &synth::generate(&spec)).map_err(|e| fail("write", e))?;
    let mut params = match a.template {
        Template::Desk => Params::desk(),
        Template::Full => Params::full(),
    };
    params.synth = spec;
    let p = a.out.join("params.toml");
    std::fs::write(&p, params.to_toml().map_err(|e| fail("write", e))?).map_err(|e| fail("write", e))?;
    println!("wrote {} series files and {}", files.len(), p.display());
    Ok(())
}

fn load(input: &InputArgs, o: &Overrides) -> Result<(Params, DataSource), Failure> {
    let mut params = match &input.params {
        Some(p) => Params::load(p).map_err(|e| fail("load-params", e))?,
        None => Params::desk(),
    };
    apply(&mut params, o);
    if let Some(s) = input.seed {
        params.synth.seed = s;
    }
    let data = match &input.series {
        Some(dir) => DataSource::Directory(dir.clone()),
        None => DataSource::Synthetic(params.synth),
    };
    Ok((params, data))
}

pub fn apply(p: &mut Params, o: &Overrides) {
    let r = &mut p.run;
    if let Some(v) = o.invest_year {
        r.invest_year = v;
    }
    if let Some(v) = &o.dispatch_years {
        r.dispatch_years = v.clone();
    }
    if let Some(v) = o.activation_price {
        r.activation_price = v;
    }
    if let Some(v) = o.firm_target {
        r.firm_target = Some(v);
    }
    if let Some(v) = o.horizon_hours {
        r.horizon_hours = Some(v);
    }
    if let Some(v) = o.horizon_start {
        r.horizon_start = Some(v);
    }
    if let Some(v) = o.carbon_price {
        r.carbon_price = v;
    }
    if let Some(v) = o.interest_rate {
        r.interest_rate = v;
    }
    if let Some(v) = o.flex_mode {
        r.flex_mode = v;
    }
    if let Some(v) = o.size_limit {
        r.size_limit = v;
    }
}

fn backend(s: &SolveArgs, params: &Params) -> Result<BackendChoice, Failure> {
    match s.backend {
        BackendKind::Reference => Ok(BackendChoice::Reference {
            size_limit: params.run.size_limit,
        }),
        BackendKind::External => match (&s.backend_path, BackendChoice::from_env()) {
            (Some(p), _) => Ok(BackendChoice::External { program: p.clone() }),
            (None, Some(b)) => Ok(b),
            (None, None) => Err(Failure::Usage(format!(
                "--backend external needs --backend-path or {BACKEND_ENV}"
            ))),
        },
    }
}

fn scenarios_or_default(selected: &[String], params: &Params) -> Vec<String> {
    if selected.is_empty() {
        params.run.scenarios.clone()
    } else {
        selected.to_vec()
    }
}

fn cmd_validate(a: &ValidateArgs) -> Result<(), Failure> {
    let (params, data) = load(&a.input, &a.overrides)?;
    let inputs = pipeline::load_inputs(&params, &data)?;
    let mut bad = 0;
    for s in scenarios_or_default(&a.scenarios, &params) {
        let cfg = params.scenario_config(&s, &inputs.bundle).map_err(|e| fail("config", e))?;
        match validate(&cfg, &inputs.bundle) {
            Ok(()) => println!("{s}: ok"),
            Err(v) => {
                bad += v.len();
                for x in v {
                    println!("{s}: {x}");
                }
            }
        }
    }
    if bad > 0 {
        return Err(fail("validate", format!("{bad} violation(s)")));
    }
    Ok(())
}

fn cmd_run(a: &RunArgs) -> Result<(), Failure> {
    let (params, data) = load(&a.input, &a.overrides)?;
    let scenarios = scenarios_or_default(&a.scenarios, &params);
    let plan = RunPlan {
        backend: backend(&a.solve, &params)?,
        params,
        data,
        out_dir: a.out.clone(),
        jobs: a.jobs,
        emit_lp: a.emit_lp,
    };
    let report = pipeline::execute(&plan, &scenarios)?;
    for r in &report.results {
        print!("{}", artifacts::summary_text(&r.result, &r.config));
    }
    println!("wrote {} files to {}", report.files.len(), a.out.display());
    Ok(())
}

fn read_result(dir: &Path) -> Result<flexcap_core::domain::ScenarioResult, Failure> {
    let p = dir.join("result.json");
    let bytes = std::fs::read(&p).map_err(|e| fail("compare", format!("{}: {e}", p.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| fail("compare", format!("{}: {e}", p.display())))
}

fn cmd_compare(a: &CompareArgs) -> Result<(), Failure> {
    let x = read_result(&a.first)?;
    let y = read_result(&a.second)?;
    let (market, reserve) = if x.mechanism == "reserve" && y.mechanism != "reserve" {
        (y, x)
    } else {
        (x, y)
    };
    let rows = summarize(&market, &reserve).map_err(|e| fail("compare", e))?;
    artifacts::write_comparison(&a.out, &rows).map_err(|e| fail("write", e))?;
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_export(a: &ExportArgs) -> Result<(), Failure> {
    let (params, data) = load(&a.input, &a.overrides)?;
    let inputs = pipeline::load_inputs(&params, &data)?;
    let cfg = params
        .scenario_config(&a.scenario, &inputs.bundle)
        .map_err(|e| fail("config", e))?;
    validate(&cfg, &inputs.bundle).map_err(|v| fail("validate", flexcap_core::runner::RunError::Invalid(v)))?;
    let window = a.window.map(WeatherWindow::new).unwrap_or(cfg.invest_window);
    let b = &inputs.bundle;
    let wi = window_inputs(&cfg, b, window).map_err(|e| fail("formulation", e))?;
    let (problem, index) = match a.stage {
        StageArg::Invest => build(&cfg, b, &wi, Stage::Invest),
        StageArg::Dispatch => {
            let solver = backend(&a.solve, &params)?.solver().map_err(|e| fail("backend", e))?;
            let inv = invest(&cfg, b, &solver).map_err(|e| fail("invest", e))?;
            build(
                &cfg,
                b,
                &wi,
                Stage::Dispatch {
                    capacities: &inv.installed,
                    reserve_size: inv.reserve_size,
                },
            )
        }
    }
    .map_err(|e| fail("formulation", e))?;
    let stem = format!("{}_{}_{}", a.scenario, window.label(), a.stage.name());
    let files = artifacts::write_model(&a.out, &stem, &problem, &index).map_err(|e| fail("write", e))?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

impl StageArg {
    fn name(&self) -> &'static str {
        match self {
            StageArg::Invest => "invest",
            StageArg::Dispatch => "dispatch",
        }
    }
}
