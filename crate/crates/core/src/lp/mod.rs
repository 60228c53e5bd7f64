//! Backend-agnostic linear programming: problem representation, the
//! solution contract (primal, duals, status), a dense bounded revised
//! simplex for small instances and fixed-layout MPS interchange.

mod mps;
mod problem;
mod simplex;
mod solution;

use alloc::boxed::Box;
use alloc::string::String;

pub use mps::{export_interchange, import_interchange, MAX_NAME_LEN};
pub use problem::{Constraint, LpProblem, RowId, Sense, VarId, Variable};
pub use simplex::{reference_simplex, ReferenceSimplex, SimplexOptions};
pub use solution::{assess, LpSolution, LpStatus, SolutionReport, Tolerances};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("problem size {vars} variables x {rows} rows exceeds the guard of {limit}")]
    SizeGuard { vars: usize, rows: usize, limit: usize },
    #[error("numerical breakdown after {iterations} iterations: {detail}")]
    NumericalBreakdown { iterations: usize, detail: String },
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("backend {backend} failed: {message}\n{log}")]
    Backend {
        backend: String,
        message: String,
        log: String,
    },
    #[error("backend {backend} does not provide dual values")]
    NoDuals { backend: String },
    #[error("solution violates tolerances: {0}")]
    Tolerance(String),
    #[error("interchange: {0}")]
    Interchange(String),
}

/// An LP solver. Implementations must return duals for every row on
/// optimal solves.
pub trait LpBackend: Send + Sync {
    fn name(&self) -> &str;

    fn provides_duals(&self) -> bool {
        true
    }

    fn solve_raw(&self, problem: &LpProblem) -> Result<LpSolution, LpError>;
}

/// A backend that has been accepted for use: it reports duals.
pub struct Solver {
    backend: Box<dyn LpBackend>,
    tolerances: Tolerances,
}

impl core::fmt::Debug for Solver {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Solver")
            .field("backend", &self.backend.name())
            .field("tolerances", &self.tolerances)
            .finish()
    }
}

impl Solver {
    pub fn register(backend: Box<dyn LpBackend>) -> Result<Self, LpError> {
        if !backend.provides_duals() {
            return Err(LpError::NoDuals {
                backend: backend.name().into(),
            });
        }
        Ok(Self {
            backend,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn backend_name(&self) -> &str {
        self.backend.name()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// Solves `problem` and checks the returned solution against the
    /// contract tolerances.
    pub fn solve(&self, problem: &LpProblem) -> Result<LpSolution, LpError> {
        solve(problem, self.backend.as_ref(), &self.tolerances)
    }
}

/// Solves with `backend` and verifies an optimal answer post-solve.
pub fn solve(problem: &LpProblem, backend: &dyn LpBackend, tol: &Tolerances) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let sol = backend.solve_raw(problem)?;
    if !sol.is_optimal() {
        return Ok(sol);
    }
    if sol.primal.len() != problem.num_vars() || sol.duals.len() != problem.num_rows() {
        return Err(LpError::Backend {
            backend: backend.name().into(),
            message: alloc::format!(
                "solution has {} primal / {} dual values for {} variables / {} rows",
                sol.primal.len(),
                sol.duals.len(),
                problem.num_vars(),
                problem.num_rows()
            ),
            log: String::new(),
        });
    }
    let rep = assess(problem, &sol, tol);
    if !rep.within(tol) {
        return Err(LpError::Tolerance(alloc::format!("{rep:?}")));
    }
    Ok(sol)
}
