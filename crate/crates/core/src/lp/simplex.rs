//! Dense bounded-variable revised simplex.
//!
//! Every row gets a logical (slack) column so that `A x + s = b`, with the
//! slack bounds encoding the row sense. Rows whose slack cannot absorb the
//! initial residual receive an artificial column, and a phase one minimizes
//! the artificial sum. The basis inverse is held explicitly and updated by
//! elementary row operations; it is rebuilt from scratch periodically and
//! whenever the primal residual drifts.
//!
//! Entering variables are priced by the most negative reduced cost. After a
//! run of degenerate pivots the solver switches to Bland's rule (smallest
//! eligible index for both entering and leaving) until it makes progress
//! again, which rules out cycling.

use alloc::vec;
use alloc::vec::Vec;

use super::problem::{LpProblem, Sense};
use super::solution::{LpSolution, LpStatus};
use super::{LpBackend, LpError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Largest number of rows or variables accepted.
    pub size_limit: usize,
    pub max_iterations: Option<usize>,
    pub primal_tol: f64,
    pub dual_tol: f64,
    pub pivot_tol: f64,
    /// Pivots between full basis refactorizations.
    pub refactor_every: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_switch: usize,
    /// Use Bland's rule from the first iteration.
    pub always_bland: bool,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            size_limit: 5000,
            max_iterations: None,
            primal_tol: 1e-9,
            dual_tol: 1e-9,
            pivot_tol: 1e-9,
            refactor_every: 400,
            degenerate_switch: 40,
            always_bland: false,
        }
    }
}

/// The reference backend.
#[derive(Debug, Clone, Default)]
pub struct ReferenceSimplex {
    pub options: SimplexOptions,
}

impl ReferenceSimplex {
    pub fn new(options: SimplexOptions) -> Self {
        Self { options }
    }
}

impl LpBackend for ReferenceSimplex {
    fn name(&self) -> &str {
        "reference-simplex"
    }

    fn solve_raw(&self, problem: &LpProblem) -> Result<LpSolution, LpError> {
        reference_simplex(problem, &self.options)
    }
}

/// Solves `p` with the dense revised simplex.
pub fn reference_simplex(p: &LpProblem, opts: &SimplexOptions) -> Result<LpSolution, LpError> {
    p.validate()?;
    let (n, m) = (p.num_vars(), p.num_rows());
    if n > opts.size_limit || m > opts.size_limit {
        return Err(LpError::SizeGuard {
            vars: n,
            rows: m,
            limit: opts.size_limit,
        });
    }
    if m == 0 {
        return solve_unconstrained(p);
    }
    let mut s = Tableau::new(p, opts);
    s.run()
}

fn solve_unconstrained(p: &LpProblem) -> Result<LpSolution, LpError> {
    let mut x = Vec::with_capacity(p.num_vars());
    for v in &p.variables {
        let xj = if v.cost > 0.0 {
            v.lower
        } else if v.cost < 0.0 {
            v.upper
        } else if v.lower.is_finite() {
            v.lower
        } else if v.upper.is_finite() {
            v.upper
        } else {
            0.0
        };
        if !xj.is_finite() {
            return Ok(LpSolution::non_optimal(LpStatus::Unbounded));
        }
        x.push(xj);
    }
    let objective = p.objective_value(&x);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal: x,
        duals: Vec::new(),
        objective,
    })
}

const NONBASIC: usize = usize::MAX;

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

struct Tableau<'a> {
    p: &'a LpProblem,
    opts: &'a SimplexOptions,
    n: usize,
    m: usize,
    /// Structural columns; logical columns are implicit.
    cols: Vec<Vec<(usize, f64)>>,
    /// Sign of the artificial column of each row.
    art_sign: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    pos: Vec<usize>,
    binv: Vec<f64>,
    y: Vec<f64>,
    rhs: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    degenerate_run: usize,
    bland: bool,
    last_pivot_ratio: f64,
}

impl<'a> Tableau<'a> {
    fn new(p: &'a LpProblem, opts: &'a SimplexOptions) -> Self {
        let (n, m) = (p.num_vars(), p.num_rows());
        let total = n + 2 * m;
        let mut lo = vec![0.0; total];
        let mut hi = vec![0.0; total];
        let mut x = vec![0.0; total];
        for (j, v) in p.variables.iter().enumerate() {
            lo[j] = v.lower;
            hi[j] = v.upper;
            x[j] = if v.lower.is_finite() {
                v.lower
            } else if v.upper.is_finite() {
                v.upper
            } else {
                0.0
            };
        }
        for (i, c) in p.constraints.iter().enumerate() {
            let (l, h) = match c.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lo[n + i] = l;
            hi[n + i] = h;
        }
        let rhs: Vec<f64> = p.constraints.iter().map(|c| c.rhs).collect();
        Self {
            p,
            opts,
            n,
            m,
            cols: p.columns(),
            art_sign: vec![1.0; m],
            lo,
            hi,
            cost: vec![0.0; total],
            x,
            basis: vec![0; m],
            pos: vec![NONBASIC; total],
            binv: vec![0.0; m * m],
            y: vec![0.0; m],
            rhs,
            iterations: 0,
            since_refactor: 0,
            degenerate_run: 0,
            bland: opts.always_bland,
            last_pivot_ratio: 1.0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n + self.m
    }

    /// Calls `f(row, coef)` for each nonzero of column `j`.
    #[inline]
    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for &(i, a) in &self.cols[j] {
                f(i, a);
            }
        } else if j < self.n + self.m {
            f(j - self.n, 1.0);
        } else {
            let i = j - self.n - self.m;
            f(i, self.art_sign[i]);
        }
    }

    fn run(&mut self) -> Result<LpSolution, LpError> {
        let (n, m) = (self.n, self.m);
        // residual of the rows at the initial nonbasic point
        let mut r = self.rhs.clone();
        for j in 0..n {
            let xj = self.x[j];
            if xj != 0.0 {
                for &(i, a) in &self.cols[j] {
                    r[i] -= a * xj;
                }
            }
        }
        let mut need_phase_one = false;
        for i in 0..m {
            let sj = n + i;
            let aj = n + m + i;
            let tol = self.opts.primal_tol * (1.0 + self.rhs[i].abs());
            if r[i] >= self.lo[sj] - tol && r[i] <= self.hi[sj] + tol {
                self.basis[i] = sj;
                self.pos[sj] = i;
                self.x[sj] = r[i];
                self.binv[i * m + i] = 1.0;
                self.lo[aj] = 0.0;
                self.hi[aj] = 0.0;
            } else {
                let sv = r[i].clamp(self.lo[sj], self.hi[sj]);
                self.x[sj] = sv;
                let e = r[i] - sv;
                let sign = if e >= 0.0 { 1.0 } else { -1.0 };
                self.art_sign[i] = sign;
                self.basis[i] = aj;
                self.pos[aj] = i;
                self.x[aj] = e.abs();
                self.binv[i * m + i] = sign;
                self.lo[aj] = 0.0;
                self.hi[aj] = f64::INFINITY;
                self.cost[aj] = 1.0;
                need_phase_one = true;
            }
        }

        if need_phase_one {
            self.compute_duals();
            loop {
                match self.iterate()? {
                    Step::Pivoted => continue,
                    Step::Optimal => break,
                    // phase one is bounded below by zero
                    Step::Unbounded => {
                        return Err(self.breakdown("unbounded phase-one direction"));
                    }
                }
            }
            self.refactor()?;
            let infeas: f64 = (n + m..n + 2 * m).map(|j| self.x[j].max(0.0)).sum();
            let scale = 1.0 + self.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if infeas > 1e-7 * scale {
                return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
            }
            for j in n + m..n + 2 * m {
                self.lo[j] = 0.0;
                self.hi[j] = 0.0;
                self.cost[j] = 0.0;
                if self.pos[j] == NONBASIC {
                    self.x[j] = 0.0;
                }
            }
        }

        for (j, v) in self.p.variables.iter().enumerate() {
            self.cost[j] = v.cost;
        }
        self.bland = self.opts.always_bland;
        self.degenerate_run = 0;
        self.compute_duals();
        loop {
            match self.iterate()? {
                Step::Pivoted => continue,
                Step::Optimal => break,
                Step::Unbounded => return Ok(LpSolution::non_optimal(LpStatus::Unbounded)),
            }
        }
        self.refactor()?;
        // a final pricing pass on the fresh factorization
        loop {
            match self.iterate()? {
                Step::Pivoted => continue,
                Step::Optimal => break,
                Step::Unbounded => return Ok(LpSolution::non_optimal(LpStatus::Unbounded)),
            }
        }

        let primal: Vec<f64> = (0..n)
            .map(|j| {
                let v = self.x[j];
                if self.pos[j] == NONBASIC {
                    v
                } else {
                    v.clamp(self.lo[j], self.hi[j])
                }
            })
            .collect();
        let objective = self.p.objective_value(&primal);
        Ok(LpSolution {
            status: LpStatus::Optimal,
            primal,
            duals: self.y.clone(),
            objective,
        })
    }

    fn breakdown(&self, detail: &str) -> LpError {
        LpError::NumericalBreakdown {
            iterations: self.iterations,
            detail: alloc::format!(
                "{detail}; last factorization pivot ratio {:.3e}",
                self.last_pivot_ratio
            ),
        }
    }

    fn iteration_limit(&self) -> usize {
        self.opts
            .max_iterations
            .unwrap_or(50 * (self.n + self.m) + 10_000)
    }

    fn compute_duals(&mut self) {
        let m = self.m;
        self.y.iter_mut().for_each(|v| *v = 0.0);
        for r in 0..m {
            let c = self.cost[self.basis[r]];
            if c != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for (yk, b) in self.y.iter_mut().zip(row) {
                    *yk += c * b;
                }
            }
        }
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        let mut d = self.cost[j];
        self.for_col(j, |i, a| d -= self.y[i] * a);
        d
    }

    /// Returns the entering column and its direction (+1 increase, -1 decrease).
    fn price(&self) -> Option<(usize, f64, f64)> {
        let total = self.n + 2 * self.m;
        let mut best: Option<(usize, f64, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..total {
            if self.pos[j] != NONBASIC || self.lo[j] == self.hi[j] {
                continue;
            }
            let d = self.reduced_cost(j);
            let tol = self.opts.dual_tol * (1.0 + self.cost[j].abs());
            let xj = self.x[j];
            let at_lo = self.lo[j].is_finite() && xj <= self.lo[j];
            let at_hi = self.hi[j].is_finite() && xj >= self.hi[j];
            let dir = if d < -tol && !at_hi {
                1.0
            } else if d > tol && !at_lo {
                -1.0
            } else {
                continue;
            };
            if self.bland {
                return Some((j, dir, d));
            }
            let score = d.abs();
            if score > best_score {
                best_score = score;
                best = Some((j, dir, d));
            }
        }
        best
    }

    fn column_ftran(&self, q: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        self.for_col(q, |k, a| {
            for (i, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[i * m + k] * a;
            }
        });
        alpha
    }

    fn iterate(&mut self) -> Result<Step, LpError> {
        if self.iterations >= self.iteration_limit() {
            return Err(LpError::IterationLimit(self.iterations));
        }
        if self.since_refactor >= self.opts.refactor_every {
            self.refactor()?;
        }
        let Some((q, dir, dq)) = self.price() else {
            return Ok(Step::Optimal);
        };
        self.iterations += 1;
        let alpha = self.column_ftran(q);
        let m = self.m;

        // ratio test
        let ptol = self.opts.primal_tol;
        let piv = self.opts.pivot_tol;
        let range = self.hi[q] - self.lo[q];
        let dist = |s: &Self, i: usize| -> (f64, f64) {
            let b = s.basis[i];
            let a = dir * alpha[i];
            if a > 0.0 {
                ((s.x[b] - s.lo[b]).max(0.0), a)
            } else {
                ((s.hi[b] - s.x[b]).max(0.0), -a)
            }
        };
        let eligible = |s: &Self, i: usize| -> bool {
            let b = s.basis[i];
            let a = dir * alpha[i];
            (a > piv && s.lo[b].is_finite()) || (a < -piv && s.hi[b].is_finite())
        };

        let mut leave: Option<usize> = None;
        let mut theta = f64::INFINITY;
        if self.bland {
            for i in 0..m {
                if !eligible(self, i) {
                    continue;
                }
                let (d, a) = dist(self, i);
                let t = d / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        t < theta - 1e-12 * (1.0 + theta)
                            || (t <= theta + 1e-12 * (1.0 + theta) && self.basis[i] < self.basis[l])
                    }
                };
                if better {
                    theta = t;
                    leave = Some(i);
                }
            }
        } else {
            let mut bound = f64::INFINITY;
            for i in 0..m {
                if !eligible(self, i) {
                    continue;
                }
                let (d, a) = dist(self, i);
                bound = bound.min((d + ptol) / a);
            }
            if bound.is_finite() {
                let mut best_a = 0.0;
                for i in 0..m {
                    if !eligible(self, i) {
                        continue;
                    }
                    let (d, a) = dist(self, i);
                    if d / a <= bound && a > best_a {
                        best_a = a;
                        leave = Some(i);
                    }
                }
                if let Some(r) = leave {
                    let (d, a) = dist(self, r);
                    theta = d / a;
                }
            }
        }

        if range.is_finite() && range <= theta {
            // bound flip of the entering variable
            let step = dir * range;
            self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
            for i in 0..m {
                if alpha[i] != 0.0 {
                    let b = self.basis[i];
                    self.x[b] -= step * alpha[i];
                }
            }
            self.note_progress(range);
            self.since_refactor += 1;
            self.maybe_check_drift()?;
            return Ok(Step::Pivoted);
        }
        let Some(r) = leave else {
            return Ok(Step::Unbounded);
        };

        let step = dir * theta;
        self.x[q] += step;
        for i in 0..m {
            if alpha[i] != 0.0 {
                let b = self.basis[i];
                self.x[b] -= step * alpha[i];
            }
        }
        let out = self.basis[r];
        let a = dir * alpha[r];
        self.x[out] = if a > 0.0 { self.lo[out] } else { self.hi[out] };
        if self.is_artificial(out) && self.lo[out] == 0.0 {
            self.x[out] = 0.0;
        }

        let ar = alpha[r];
        if ar.abs() < 1e-12 {
            return Err(self.breakdown("vanishing pivot element"));
        }
        // dual update uses the old row r of the inverse
        let f = dq / ar;
        for k in 0..m {
            self.y[k] += f * self.binv[r * m + k];
        }
        self.update_inverse(r, &alpha);
        self.basis[r] = q;
        self.pos[q] = r;
        self.pos[out] = NONBASIC;

        self.note_progress(theta);
        self.since_refactor += 1;
        self.maybe_check_drift()?;
        Ok(Step::Pivoted)
    }

    /// Replaces row `r` of the basis by the column whose transformed
    /// vector is `alpha`.
    fn update_inverse(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let inv = 1.0 / alpha[r];
        for k in 0..m {
            self.binv[r * m + k] *= inv;
        }
        let (head, tail) = self.binv.split_at_mut(r * m);
        let (pivot_row, rest) = tail.split_at_mut(m);
        // the pivot row of the inverse is usually sparse
        let nz: Vec<usize> = (0..m).filter(|&k| pivot_row[k] != 0.0).collect();
        for i in 0..m {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let fi = alpha[i];
            let row = if i < r {
                &mut head[i * m..(i + 1) * m]
            } else {
                let off = (i - r - 1) * m;
                &mut rest[off..off + m]
            };
            for &k in &nz {
                row[k] -= fi * pivot_row[k];
            }
        }
    }

    /// Rebuilds the inverse by pivoting the structural basic columns into
    /// a unit basis one at a time. Returns false when a column finds no
    /// acceptable pivot, leaving the caller to fall back to elimination.
    fn refactor_by_pivots(&mut self) -> bool {
        let (n, m) = (self.n, self.m);
        // occupant of each row slot: Some(logical col) or None (free)
        let mut slot: Vec<Option<usize>> = vec![None; m];
        let mut structural = Vec::new();
        for &b in &self.basis {
            if b < n {
                structural.push(b);
            } else {
                let i = if b < n + m { b - n } else { b - n - m };
                if slot[i].is_some() {
                    return false;
                }
                slot[i] = Some(b);
            }
        }
        self.binv.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            let sign = match slot[i] {
                Some(b) if self.is_artificial(b) => self.art_sign[i],
                _ => 1.0,
            };
            self.binv[i * m + i] = sign;
        }
        let mut min_piv = f64::INFINITY;
        let mut max_piv = 0.0f64;
        for &j in &structural {
            let alpha = self.column_ftran(j);
            let mut best = 0.0;
            let mut r = usize::MAX;
            for i in 0..m {
                if slot[i].is_none() && alpha[i].abs() > best {
                    best = alpha[i].abs();
                    r = i;
                }
            }
            if r == usize::MAX || best < 1e-9 {
                return false;
            }
            min_piv = min_piv.min(best);
            max_piv = max_piv.max(best);
            self.update_inverse(r, &alpha);
            slot[r] = Some(j);
        }
        for (i, sl) in slot.into_iter().enumerate() {
            let Some(b) = sl else { return false };
            self.basis[i] = b;
            self.pos[b] = i;
        }
        self.last_pivot_ratio = if min_piv.is_finite() && min_piv > 0.0 { max_piv / min_piv } else { 1.0 };
        true
    }

    fn note_progress(&mut self, theta: f64) {
        if theta <= 1e-12 {
            self.degenerate_run += 1;
            if self.degenerate_run >= self.opts.degenerate_switch {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
            self.bland = self.opts.always_bland;
        }
    }

    fn maybe_check_drift(&mut self) -> Result<(), LpError> {
        if self.iterations % 64 != 0 {
            return Ok(());
        }
        let mut res = self.rhs.clone();
        let total = self.n + 2 * self.m;
        for j in 0..total {
            let xj = self.x[j];
            if xj != 0.0 {
                self.for_col(j, |i, a| res[i] -= a * xj);
            }
        }
        let bad = res
            .iter()
            .zip(&self.rhs)
            .any(|(r, b)| r.abs() > 1e-9 * (1.0 + b.abs()));
        if bad {
            self.refactor()?;
        }
        Ok(())
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination with partial
    /// pivoting, then recomputes basic values and duals.
    fn refactor(&mut self) -> Result<(), LpError> {
        if !self.refactor_by_pivots() {
            self.refactor_dense()?;
        }
        self.since_refactor = 0;
        self.recompute_basics();
        Ok(())
    }

    fn refactor_dense(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let w = 2 * m;
        let mut aug = vec![0.0; m * w];
        for (r, &b) in self.basis.iter().enumerate() {
            self.for_col(b, |i, a| aug[i * w + r] = a);
        }
        for i in 0..m {
            aug[i * w + m + i] = 1.0;
        }
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;
        for k in 0..m {
            let mut p = k;
            let mut best = aug[k * w + k].abs();
            for i in k + 1..m {
                let v = aug[i * w + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-11 {
                return Err(LpError::NumericalBreakdown {
                    iterations: self.iterations,
                    detail: alloc::format!(
                        "singular basis at position {k} (pivot {best:.3e}); pivot range [{min_piv:.3e}, {max_piv:.3e}]"
                    ),
                });
            }
            max_piv = max_piv.max(best);
            min_piv = min_piv.min(best);
            if p != k {
                for c in 0..w {
                    aug.swap(k * w + c, p * w + c);
                }
            }
            let inv = 1.0 / aug[k * w + k];
            for c in k..w {
                aug[k * w + c] *= inv;
            }
            let (pivot_row, others) = split_row(&mut aug, k, w);
            for (i, row) in others {
                let f = row[k];
                if f == 0.0 || i == k {
                    continue;
                }
                for c in k..w {
                    let pv = pivot_row[c];
                    if pv != 0.0 {
                        row[c] -= f * pv;
                    }
                }
            }
        }
        // inverse sits in the right half, rows indexed by basis position
        for r in 0..m {
            self.binv[r * m..(r + 1) * m].copy_from_slice(&aug[r * w + m..(r + 1) * w]);
        }
        self.last_pivot_ratio = if min_piv > 0.0 { max_piv / min_piv } else { f64::INFINITY };
        Ok(())
    }

    /// Basic values from the nonbasic point, then duals.
    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut res = self.rhs.clone();
        let total = self.n + 2 * self.m;
        for j in 0..total {
            if self.pos[j] != NONBASIC {
                continue;
            }
            let xj = self.x[j];
            if xj != 0.0 {
                self.for_col(j, |i, a| res[i] -= a * xj);
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            let v: f64 = row.iter().zip(&res).map(|(a, b)| a * b).sum();
            self.x[self.basis[r]] = v;
        }
        self.compute_duals();
    }
}

/// Splits the row-major matrix into the pivot row and an iterator over the
/// other rows (with their indices).
fn split_row(
    a: &mut [f64],
    k: usize,
    w: usize,
) -> (Vec<f64>, impl Iterator<Item = (usize, &mut [f64])>) {
    let pivot: Vec<f64> = a[k * w..(k + 1) * w].to_vec();
    (pivot, a.chunks_mut(w).enumerate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{assess, Tolerances};
    use alloc::vec;

    fn solve(p: &LpProblem) -> LpSolution {
        reference_simplex(p, &SimplexOptions::default()).unwrap()
    }

    #[test]
    fn one_variable_lower_bound_row() {
        let mut p = LpProblem::new("t");
        let x = p.add_var("x", 0.0, f64::INFINITY, 1.0);
        p.add_constraint("r", vec![(x, 1.0)], Sense::Ge, 3.0);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.primal[0] - 3.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_demand_above_capacity() {
        let mut p = LpProblem::new("t");
        let a = p.add_var("a", 0.0, 5.0, 1.0);
        let b = p.add_var("b", 0.0, 3.0, 2.0);
        p.add_constraint("bal", vec![(a, 1.0), (b, 1.0)], Sense::Eq, 10.0);
        assert_eq!(solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut p = LpProblem::new("t");
        let a = p.add_var("a", 0.0, f64::INFINITY, -1.0);
        let b = p.add_var("b", 0.0, f64::INFINITY, 0.0);
        p.add_constraint("r", vec![(a, 1.0), (b, -1.0)], Sense::Le, 1.0);
        assert_eq!(solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variable_and_equality() {
        // min x + 2y  s.t. x - y = -4, x + y >= 2, x free
        let mut p = LpProblem::new("t");
        let x = p.add_var("x", f64::NEG_INFINITY, f64::INFINITY, 1.0);
        let y = p.add_var("y", 0.0, f64::INFINITY, 2.0);
        p.add_constraint("e", vec![(x, 1.0), (y, -1.0)], Sense::Eq, -4.0);
        p.add_constraint("g", vec![(x, 1.0), (y, 1.0)], Sense::Ge, 2.0);
        let s = solve(&p);
        // y = 3, x = -1: cost 5
        assert!((s.objective - 5.0).abs() < 1e-9, "{s:?}");
        let rep = assess(&p, &s, &Tolerances::default());
        assert!(rep.within(&Tolerances::default()), "{rep:?}");
    }

    #[test]
    fn klee_minty_with_bland_only() {
        // max sum 2^(d-i) x_i  s.t. Klee-Minty cube, d = 6
        let d = 6;
        let mut p = LpProblem::new("km");
        let xs: Vec<_> = (0..d)
            .map(|i| p.add_var(alloc::format!("x{i}"), 0.0, f64::INFINITY, -libm::pow(2.0, (d - 1 - i) as f64)))
            .collect();
        for i in 0..d {
            let mut terms = Vec::new();
            for j in 0..i {
                terms.push((xs[j], libm::pow(2.0, (i - j + 1) as f64)));
            }
            terms.push((xs[i], 1.0));
            p.add_constraint(alloc::format!("c{i}"), terms, Sense::Le, libm::pow(5.0, (i + 1) as f64));
        }
        let opts = SimplexOptions {
            always_bland: true,
            ..SimplexOptions::default()
        };
        let s = reference_simplex(&p, &opts).unwrap();
        assert!((s.objective + libm::pow(5.0, d as f64)).abs() < 1e-6);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling LP under Dantzig pricing
        let mut p = LpProblem::new("beale");
        let x4 = p.add_var("x4", 0.0, f64::INFINITY, -0.75);
        let x5 = p.add_var("x5", 0.0, f64::INFINITY, 150.0);
        let x6 = p.add_var("x6", 0.0, f64::INFINITY, -0.02);
        let x7 = p.add_var("x7", 0.0, f64::INFINITY, 6.0);
        p.add_constraint("r1", vec![(x4, 0.25), (x5, -60.0), (x6, -0.04), (x7, 9.0)], Sense::Le, 0.0);
        p.add_constraint("r2", vec![(x4, 0.5), (x5, -90.0), (x6, -0.02), (x7, 3.0)], Sense::Le, 0.0);
        p.add_constraint("r3", vec![(x6, 1.0)], Sense::Le, 1.0);
        let s = solve(&p);
        assert!((s.objective + 0.05).abs() < 1e-9, "{s:?}");
    }

    #[test]
    fn size_guard() {
        let mut p = LpProblem::new("t");
        for i in 0..11 {
            p.add_var(alloc::format!("v{i}"), 0.0, 1.0, 1.0);
        }
        let opts = SimplexOptions {
            size_limit: 10,
            ..SimplexOptions::default()
        };
        assert!(matches!(reference_simplex(&p, &opts), Err(LpError::SizeGuard { .. })));
    }
}
