use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::problem::{LpProblem, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Primal/dual solution of an [`LpProblem`].
///
/// `duals[i]` is the sensitivity of the optimal objective to the right-hand
/// side of row `i` (so a binding `≥` row has a non-negative dual and an
/// energy balance with demand on the right-hand side yields the price).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
    pub objective: f64,
}

impl LpSolution {
    pub fn non_optimal(status: LpStatus) -> Self {
        Self {
            status,
            primal: Vec::new(),
            duals: Vec::new(),
            objective: f64::NAN,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Tolerances of the solution contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Row residual allowed per unit of `1 + |rhs|`.
    pub primal: f64,
    /// Relative gap between primal and dual objective.
    pub gap: f64,
    /// Complementary slackness bound, `|dual|·slack ≤ cs·(1 + |rhs|)`.
    pub complementarity: f64,
    /// Reduced costs smaller than this (relative to `1 + |c|`) count as zero.
    pub dual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            primal: 1e-6,
            gap: 1e-6,
            complementarity: 1e-5,
            dual: 1e-7,
        }
    }
}

/// Measured quality of an optimal solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolutionReport {
    /// Largest `residual / (1 + |rhs|)` over all rows, including sense violations.
    pub max_row_violation: f64,
    /// Largest bound violation relative to `1 + |bound|`.
    pub max_bound_violation: f64,
    pub primal_objective: f64,
    /// Lagrangian dual objective; `-inf` when the duals are not dual feasible.
    pub dual_objective: f64,
    pub relative_gap: f64,
    /// Largest `|dual|·slack / (1 + |rhs|)`.
    pub max_complementarity: f64,
    /// Largest dual sign violation on inequality rows (scaled).
    pub max_dual_sign_violation: f64,
}

impl SolutionReport {
    pub fn within(&self, tol: &Tolerances) -> bool {
        self.max_row_violation <= tol.primal
            && self.max_bound_violation <= tol.primal
            && self.relative_gap <= tol.gap
            && self.max_complementarity <= tol.complementarity
            && self.max_dual_sign_violation <= tol.gap.max(tol.dual)
    }
}

/// Evaluates primal feasibility, the duality gap and complementary
/// slackness of an optimal solution.
pub fn assess(p: &LpProblem, sol: &LpSolution, tol: &Tolerances) -> SolutionReport {
    let x = &sol.primal;
    let y = &sol.duals;
    let mut rep = SolutionReport {
        primal_objective: p.objective_value(x),
        ..SolutionReport::default()
    };

    let mut reduced: Vec<f64> = p.variables.iter().map(|v| v.cost).collect();
    let mut dual_obj = 0.0;
    let mut dual_feasible = true;

    for (i, c) in p.constraints.iter().enumerate() {
        let act = c.activity(x);
        let scale = 1.0 + c.rhs.abs();
        let viol = match c.sense {
            Sense::Le => (act - c.rhs).max(0.0),
            Sense::Ge => (c.rhs - act).max(0.0),
            Sense::Eq => (act - c.rhs).abs(),
        };
        rep.max_row_violation = rep.max_row_violation.max(viol / scale);

        let yi = y[i];
        let slack = (c.rhs - act).abs();
        rep.max_complementarity = rep.max_complementarity.max(yi.abs() * slack / scale);

        let sign_viol = match c.sense {
            Sense::Le => yi.max(0.0),
            Sense::Ge => (-yi).max(0.0),
            Sense::Eq => 0.0,
        };
        rep.max_dual_sign_violation = rep.max_dual_sign_violation.max(sign_viol / (1.0 + yi.abs()));
        if sign_viol > tol.dual * (1.0 + yi.abs()) {
            dual_feasible = false;
        }

        dual_obj += yi * c.rhs;
        for &(v, a) in &c.terms {
            reduced[v.0] -= yi * a;
        }
    }

    for (j, v) in p.variables.iter().enumerate() {
        let xj = x[j];
        let lo_v = (v.lower - xj).max(0.0) / (1.0 + v.lower.abs().min(1e300));
        let hi_v = (xj - v.upper).max(0.0) / (1.0 + v.upper.abs().min(1e300));
        rep.max_bound_violation = rep.max_bound_violation.max(lo_v).max(hi_v);

        let d = reduced[j];
        if d.abs() <= tol.dual * (1.0 + v.cost.abs()) {
            continue;
        }
        let bound = if d > 0.0 { v.lower } else { v.upper };
        if bound.is_finite() {
            dual_obj += d * bound;
        } else {
            dual_feasible = false;
        }
    }

    rep.dual_objective = if dual_feasible { dual_obj } else { f64::NEG_INFINITY };
    rep.relative_gap = if dual_feasible {
        (rep.primal_objective - dual_obj).abs() / (1.0 + rep.primal_objective.abs())
    } else {
        f64::INFINITY
    };
    rep
}
