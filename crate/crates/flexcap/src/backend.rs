//! LP backends: the in-process reference simplex and an external solver
//! invoked as a subprocess.
//!
//! The external contract: the program is called as `PROGRAM IN.mps OUT.sol`.
//! Exit code 0 means the solution file was written. Any other exit code is a
//! backend failure and stderr is kept as the log. The solution file holds
//! whitespace-separated records:
//!
//! ```text
//! status optimal|infeasible|unbounded
//! objective <value>
//! primal <column> <value>
//! dual <row> <value>
//! ```
//!
//! Duals are sensitivities of the objective to the row right-hand sides.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use flexcap_core::lp::{
    export_interchange, LpBackend, LpError, LpProblem, LpSolution, LpStatus, ReferenceSimplex, SimplexOptions, Solver,
};

/// Environment variable naming the external solver program.
pub const BACKEND_ENV: &str = "FLEXCAP_LP_BACKEND";

#[derive(Debug, Clone, PartialEq)]
pub enum BackendChoice {
    Reference { size_limit: usize },
    External { program: PathBuf },
}

impl BackendChoice {
    /// External program from [`BACKEND_ENV`].
    pub fn from_env() -> Option<Self> {
        std::env::var_os(BACKEND_ENV)
            .filter(|v| !v.is_empty())
            .map(|v| BackendChoice::External { program: v.into() })
    }

    pub fn label(&self) -> String {
        match self {
            BackendChoice::Reference { .. } => "reference-simplex".into(),
            BackendChoice::External { program } => format!("external:{}", file_name(program)),
        }
    }

    pub fn solver(&self) -> Result<Solver, LpError> {
        match self {
            BackendChoice::Reference { size_limit } => Solver::register(Box::new(ReferenceSimplex::new(SimplexOptions {
                size_limit: *size_limit,
                ..Default::default()
            }))),
            BackendChoice::External { program } => Solver::register(Box::new(ExternalBackend::new(program))),
        }
    }
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Solver run as a subprocess with MPS and solution-file handoff.
#[derive(Debug, Clone)]
pub struct ExternalBackend {
    program: PathBuf,
    name: String,
}

impl ExternalBackend {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        let program = program.into();
        let name = format!("external:{}", file_name(&program));
        Self { program, name }
    }

    fn fail(&self, message: impl Into<String>, log: impl Into<String>) -> LpError {
        LpError::Backend {
            backend: self.name.clone(),
            message: message.into(),
            log: log.into(),
        }
    }
}

impl LpBackend for ExternalBackend {
    fn name(&self) -> &str {
        &self.name
    }

    fn solve_raw(&self, problem: &LpProblem) -> Result<LpSolution, LpError> {
        let dir = tempfile::tempdir().map_err(|e| self.fail(format!("temp dir: {e}"), ""))?;
        let input = dir.path().join("problem.mps");
        let output = dir.path().join("problem.sol");
        std::fs::write(&input, export_interchange(problem)?).map_err(|e| self.fail(format!("write mps: {e}"), ""))?;
        let out = Command::new(&self.program)
            .arg(&input)
            .arg(&output)
            .output()
            .map_err(|e| self.fail(format!("cannot start {}: {e}", self.program.display()), ""))?;
        let log = String::from_utf8_lossy(&out.stderr).into_owned();
        if !out.status.success() {
            return Err(self.fail(format!("exit status {}", out.status), log));
        }
        let text = std::fs::read_to_string(&output).map_err(|e| self.fail(format!("read solution: {e}"), log.clone()))?;
        parse_solution(problem, &text).map_err(|m| self.fail(m, log))
    }
}

/// Reads a solution file against the problem it answers.
pub fn parse_solution(problem: &LpProblem, text: &str) -> Result<LpSolution, String> {
    let cols: HashMap<&str, usize> = problem.variables.iter().enumerate().map(|(j, v)| (v.name.as_str(), j)).collect();
    let rows: HashMap<&str, usize> = problem.constraints.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
    let mut status = None;
    let mut objective = None;
    let mut primal = vec![f64::NAN; problem.num_vars()];
    let mut duals = vec![f64::NAN; problem.num_rows()];
    for (ln, line) in text.lines().enumerate() {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let bad = || format!("solution line {}: {line:?}", ln + 1);
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        match tok.as_slice() {
            [] => {}
            ["status", s] => {
                status = Some(match *s {
                    "optimal" => LpStatus::Optimal,
                    "infeasible" => LpStatus::Infeasible,
                    "unbounded" => LpStatus::Unbounded,
                    _ => return Err(bad()),
                })
            }
            ["objective", v] => objective = Some(num(v)?),
            ["primal", n, v] => primal[*cols.get(n).ok_or_else(bad)?] = num(v)?,
            ["dual", n, v] => duals[*rows.get(n).ok_or_else(bad)?] = num(v)?,
            _ => return Err(bad()),
        }
    }
    let status = status.ok_or("solution file has no status")?;
    if status != LpStatus::Optimal {
        return Ok(LpSolution::non_optimal(status));
    }
    if let Some(j) = primal.iter().position(|v| v.is_nan()) {
        return Err(format!("no primal value for column {}", problem.variables[j].name));
    }
    if let Some(i) = duals.iter().position(|v| v.is_nan()) {
        return Err(format!("no dual value for row {}", problem.constraints[i].name));
    }
    Ok(LpSolution {
        status,
        objective: objective.unwrap_or_else(|| problem.objective_value(&primal)),
        primal,
        duals,
    })
}

/// Path of the bundled scipy backend script.
pub fn bundled_scipy_script() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scripts/scipy_lp_backend.py")
}
