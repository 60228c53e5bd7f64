//! Sparse linear program representation.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::LpError;

/// Index of a variable (column) inside an [`LpProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

/// Index of a constraint (row) inside an [`LpProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RowId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    /// Terms sorted by variable index.
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * x[v.0]).sum()
    }
}

/// A minimization LP: `min c'x  s.t.  rows (≤,=,≥) rhs,  lower ≤ x ≤ upper`.
///
/// Variables and rows keep insertion order; row terms are stored sorted by
/// variable index so that interchange round-trips are exact.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LpProblem {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            variables: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, cost: f64) -> VarId {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
            cost,
        });
        VarId(self.variables.len() - 1)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        mut terms: Vec<(VarId, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> RowId {
        terms.sort_by_key(|t| t.0);
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
        RowId(self.constraints.len() - 1)
    }

    pub fn set_cost(&mut self, v: VarId, cost: f64) {
        self.variables[v.0].cost = cost;
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.variables.iter().zip(x).map(|(v, xi)| v.cost * xi).sum()
    }

    pub fn nnz(&self) -> usize {
        self.constraints.iter().map(|c| c.terms.len()).sum()
    }

    /// Checks the structural invariants: ordered bounds, unique names,
    /// valid and non-repeated column references, finite data.
    pub fn validate(&self) -> Result<(), LpError> {
        let mut names = BTreeSet::new();
        for v in &self.variables {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(LpError::InvalidProblem(alloc::format!(
                    "variable {} has bounds [{}, {}]",
                    v.name,
                    v.lower,
                    v.upper
                )));
            }
            if v.lower == f64::INFINITY || v.upper == f64::NEG_INFINITY {
                return Err(LpError::InvalidProblem(alloc::format!(
                    "variable {} has an empty domain",
                    v.name
                )));
            }
            if !v.cost.is_finite() {
                return Err(LpError::InvalidProblem(alloc::format!(
                    "variable {} has non-finite cost",
                    v.name
                )));
            }
            if !names.insert(v.name.as_str()) {
                return Err(LpError::InvalidProblem(alloc::format!(
                    "duplicate variable name {}",
                    v.name
                )));
            }
        }
        let mut row_names = BTreeSet::new();
        for c in &self.constraints {
            if !row_names.insert(c.name.as_str()) {
                return Err(LpError::InvalidProblem(alloc::format!(
                    "duplicate constraint name {}",
                    c.name
                )));
            }
            if !c.rhs.is_finite() {
                return Err(LpError::InvalidProblem(alloc::format!(
                    "constraint {} has non-finite rhs",
                    c.name
                )));
            }
            let mut prev: Option<usize> = None;
            for &(v, a) in &c.terms {
                if v.0 >= self.variables.len() {
                    return Err(LpError::InvalidProblem(alloc::format!(
                        "constraint {} references missing variable {}",
                        c.name,
                        v.0
                    )));
                }
                if prev.is_some_and(|p| p >= v.0) {
                    return Err(LpError::InvalidProblem(alloc::format!(
                        "constraint {} repeats or misorders variable {}",
                        c.name,
                        self.variables[v.0].name
                    )));
                }
                if !a.is_finite() {
                    return Err(LpError::InvalidProblem(alloc::format!(
                        "constraint {} has a non-finite coefficient",
                        c.name
                    )));
                }
                prev = Some(v.0);
            }
        }
        Ok(())
    }

    /// Column-major view: for each variable the (row, coefficient) pairs.
    pub fn columns(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = alloc::vec![Vec::new(); self.variables.len()];
        for (i, c) in self.constraints.iter().enumerate() {
            for &(v, a) in &c.terms {
                cols[v.0].push((i, a));
            }
        }
        cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn terms_are_sorted_on_insert() {
        let mut p = LpProblem::new("t");
        let a = p.add_var("a", 0.0, 1.0, 0.0);
        let b = p.add_var("b", 0.0, 1.0, 0.0);
        p.add_constraint("r", vec![(b, 2.0), (a, 1.0)], Sense::Le, 1.0);
        assert_eq!(p.constraints[0].terms, vec![(a, 1.0), (b, 2.0)]);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_bad_bounds_and_duplicates() {
        let mut p = LpProblem::new("t");
        p.add_var("a", 1.0, 0.0, 0.0);
        assert!(p.validate().is_err());

        let mut p = LpProblem::new("t");
        p.add_var("a", 0.0, 1.0, 0.0);
        p.add_var("a", 0.0, 1.0, 0.0);
        assert!(p.validate().is_err());

        let mut p = LpProblem::new("t");
        let a = p.add_var("a", 0.0, 1.0, 0.0);
        p.add_constraint("r", vec![(a, 1.0), (a, 1.0)], Sense::Le, 1.0);
        assert!(p.validate().is_err());

        let mut p = LpProblem::new("t");
        p.add_var("a", 0.0, 1.0, 0.0);
        p.add_constraint("r", vec![(VarId(3), 1.0)], Sense::Le, 1.0);
        assert!(p.validate().is_err());
    }
}
