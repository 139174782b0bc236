//! Dense bounded-variable primal simplex.
//!
//! Structural columns are shifted to `[0, upper - lower]`, fixed columns are
//! substituted out, and each row receives a slack (inequalities) and, when the
//! slack cannot start basic, an artificial. Phase 1 minimizes the sum of
//! artificials; phase 2 the real cost. Entering columns follow Dantzig's rule
//! and fall back to Bland's rule after a run of degenerate pivots, which rules
//! out cycling.

use std::time::Instant;

use crate::model::{MilpModel, ObjectiveSense, RowSense};
use crate::SolverError;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;
const FEAS_TOL: f64 = 1e-6;
const DEGENERATE_RUN: usize = 50;

/// Constraint data of a model in minimization form, shared by every node LP.
#[derive(Debug, Clone)]
pub(crate) struct LpData {
    pub n: usize,
    pub rows: Vec<(Vec<(usize, f64)>, RowSense, f64)>,
    /// Objective coefficients, negated for maximization models.
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpData {
    pub fn from_model(model: &MilpModel) -> Result<Self, SolverError> {
        let n = model.variables().len();
        if n == 0 {
            return Err(SolverError::Unsupported("model has no variables".into()));
        }
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for v in model.variables() {
            if !v.lower.is_finite() {
                return Err(SolverError::Unsupported(format!("variable `{}` has no finite lower bound", v.name)));
            }
            lower.push(v.lower);
            upper.push(v.upper);
        }
        let sign = match model.objective().sense {
            ObjectiveSense::Minimize => 1.0,
            ObjectiveSense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; n];
        for &(j, c) in &model.objective().terms {
            cost[j] += sign * c;
        }
        let rows = model.constraints().iter().map(|c| (c.terms.clone(), c.sense, c.rhs)).collect();
        Ok(Self { n, rows, cost, lower, upper })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpStatus {
    /// `value` is the minimization-form objective without the model's constant.
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    TimedOut,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    TimedOut,
}

struct Tableau {
    m: usize,
    cols: usize,
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    /// Row holding each basic column, `usize::MAX` when nonbasic.
    pos: Vec<usize>,
    ub: Vec<f64>,
    at_upper: Vec<bool>,
    blocked: Vec<bool>,
    d: Vec<f64>,
    iterations: usize,
}

impl Tableau {
    fn value_of(&self, j: usize) -> f64 {
        match self.pos[j] {
            usize::MAX if self.at_upper[j] => self.ub[j],
            usize::MAX => 0.0,
            r => self.beta[r],
        }
    }

    fn price(&mut self, cost: &[f64]) {
        let cols = self.cols;
        self.d.clear();
        self.d.extend_from_slice(cost);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * cols..(r + 1) * cols];
                for (d, &a) in self.d.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let cols = self.cols;
        let piv = self.t[pr * cols + pc];
        let inv = 1.0 / piv;
        for a in &mut self.t[pr * cols..(pr + 1) * cols] {
            *a *= inv;
        }
        self.t[pr * cols + pc] = 1.0;
        let (before, rest) = self.t.split_at_mut(pr * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
            let f = row[pc];
            if f != 0.0 {
                for (a, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *a -= f * p;
                }
                row[pc] = 0.0;
            }
        }
        let f = self.d[pc];
        if f != 0.0 {
            for (d, &p) in self.d.iter_mut().zip(pivot_row.iter()) {
                *d -= f * p;
            }
            self.d[pc] = 0.0;
        }
        let leaving = self.basis[pr];
        self.pos[leaving] = usize::MAX;
        self.basis[pr] = pc;
        self.pos[pc] = pr;
    }

    fn run(&mut self, deadline: Option<Instant>, limit: usize) -> Result<PhaseEnd, SolverError> {
        let cols = self.cols;
        let mut bland = false;
        let mut degenerate = 0;
        loop {
            self.iterations += 1;
            if self.iterations > limit {
                return Err(SolverError::Numerical(format!("iteration limit {limit} reached")));
            }
            if self.iterations % 32 == 1 {
                if let Some(deadline) = deadline {
                    if Instant::now() >= deadline {
                        return Ok(PhaseEnd::TimedOut);
                    }
                }
            }

            let mut entering = None;
            let mut best = 0.0;
            for j in 0..cols {
                if self.pos[j] != usize::MAX || self.blocked[j] || self.ub[j] <= 0.0 {
                    continue;
                }
                let score = if self.at_upper[j] { self.d[j] } else { -self.d[j] };
                if score > COST_TOL {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    if score > best {
                        best = score;
                        entering = Some(j);
                    }
                }
            }
            let Some(pc) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let dir = if self.at_upper[pc] { -1.0 } else { 1.0 };

            // Ratio test. Basic r moves by -dir * alpha_r per unit step.
            let mut step = self.ub[pc];
            let mut leave: Option<(usize, bool)> = None;
            let mut leave_alpha = 0.0;
            for r in 0..self.m {
                let alpha = self.t[r * cols + pc];
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -dir * alpha;
                let b = self.basis[r];
                let (limit, to_upper) = if rate < 0.0 {
                    ((self.beta[r] / -rate).max(0.0), false)
                } else if self.ub[b].is_finite() {
                    (((self.ub[b] - self.beta[r]) / rate).max(0.0), true)
                } else {
                    continue;
                };
                let better = match leave {
                    None => limit < step,
                    Some((lr, _)) => {
                        if limit < step - 1e-12 {
                            true
                        } else if limit <= step + 1e-12 {
                            if bland {
                                b < self.basis[lr]
                            } else {
                                alpha.abs() > leave_alpha
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    step = limit;
                    leave = Some((r, to_upper));
                    leave_alpha = alpha.abs();
                }
            }
            if !step.is_finite() {
                return Ok(PhaseEnd::Unbounded);
            }

            if step <= 1e-12 {
                degenerate += 1;
                if degenerate > DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            if step != 0.0 {
                for r in 0..self.m {
                    let alpha = self.t[r * cols + pc];
                    if alpha != 0.0 {
                        self.beta[r] -= dir * alpha * step;
                    }
                }
            }
            match leave {
                None => {
                    // Bound flip of the entering column.
                    self.at_upper[pc] = !self.at_upper[pc];
                }
                Some((pr, to_upper)) => {
                    let entering_value = if self.at_upper[pc] { self.ub[pc] } else { 0.0 } + dir * step;
                    let leaving = self.basis[pr];
                    self.pivot(pr, pc);
                    self.at_upper[leaving] = to_upper;
                    self.at_upper[pc] = false;
                    self.beta[pr] = entering_value;
                }
            }
        }
    }
}

/// Solves the LP relaxation of `data` with per-variable bounds overridden by
/// `lower` / `upper`.
pub(crate) fn solve_lp(
    data: &LpData,
    lower: &[f64],
    upper: &[f64],
    deadline: Option<Instant>,
) -> Result<LpStatus, SolverError> {
    let n = data.n;
    let mut col_of = vec![usize::MAX; n];
    let mut free = Vec::new();
    for j in 0..n {
        if lower[j] > upper[j] + FEAS_TOL {
            return Ok(LpStatus::Infeasible);
        }
        if upper[j] - lower[j] > 1e-12 {
            col_of[j] = free.len();
            free.push(j);
        }
    }
    let nf = free.len();

    // Rows after shifting every structural to its lower bound.
    let mut rows: Vec<(Vec<(usize, f64)>, RowSense, f64)> = Vec::with_capacity(data.rows.len());
    for (terms, sense, rhs) in &data.rows {
        let mut r = *rhs;
        let mut kept = Vec::with_capacity(terms.len());
        for &(j, a) in terms {
            r -= a * lower[j];
            if col_of[j] != usize::MAX {
                kept.push((col_of[j], a));
            }
        }
        if kept.is_empty() {
            let ok = match sense {
                RowSense::Le => r >= -FEAS_TOL,
                RowSense::Ge => r <= FEAS_TOL,
                RowSense::Eq => r.abs() <= FEAS_TOL,
            };
            if !ok {
                return Ok(LpStatus::Infeasible);
            }
            continue;
        }
        // Rows the bounds already satisfy stay out of the tableau.
        let reach = |positive: bool| -> f64 {
            kept.iter()
                .filter(|&&(_, a)| (a > 0.0) == positive)
                .map(|&(c, a)| a * (upper[free[c]] - lower[free[c]]))
                .sum()
        };
        let redundant = match sense {
            RowSense::Le => reach(true) <= r + 1e-9,
            RowSense::Ge => reach(false) >= r - 1e-9,
            RowSense::Eq => false,
        };
        if !redundant {
            rows.push((kept, *sense, r));
        }
    }

    let m = rows.len();
    let slack_count = rows.iter().filter(|(_, s, _)| *s != RowSense::Eq).count();
    // Decide each row's starting basic column.
    let mut needs_art = Vec::with_capacity(m);
    for (_, sense, r) in &rows {
        let slack_ok = match sense {
            RowSense::Le => *r >= 0.0,
            RowSense::Ge => *r <= 0.0,
            RowSense::Eq => false,
        };
        needs_art.push(!slack_ok);
    }
    let art_count = needs_art.iter().filter(|&&a| a).count();
    let cols = nf + slack_count + art_count;

    let mut tab = Tableau {
        m,
        cols,
        t: vec![0.0; m * cols],
        beta: vec![0.0; m],
        basis: vec![0; m],
        pos: vec![usize::MAX; cols],
        ub: vec![f64::INFINITY; cols],
        at_upper: vec![false; cols],
        blocked: vec![false; cols],
        d: Vec::with_capacity(cols),
        iterations: 0,
    };
    for (c, &j) in free.iter().enumerate() {
        tab.ub[c] = upper[j] - lower[j];
    }
    let mut next_slack = nf;
    let mut next_art = nf + slack_count;
    let art_start = next_art;
    for (r, (terms, sense, rhs)) in rows.iter().enumerate() {
        let row = &mut tab.t[r * cols..(r + 1) * cols];
        for &(c, a) in terms {
            row[c] += a;
        }
        let slack = match sense {
            RowSense::Le => Some((next_slack, 1.0)),
            RowSense::Ge => Some((next_slack, -1.0)),
            RowSense::Eq => None,
        };
        if let Some((s, coef)) = slack {
            row[s] = coef;
            next_slack += 1;
        }
        let (basic, coef) = if needs_art[r] {
            let a = next_art;
            next_art += 1;
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            row[a] = sign;
            (a, sign)
        } else {
            slack.expect("slack-basic rows are inequalities")
        };
        if coef != 1.0 {
            for x in row.iter_mut() {
                *x /= coef;
            }
        }
        tab.beta[r] = rhs / coef;
        tab.basis[r] = basic;
        tab.pos[basic] = r;
    }

    let limit = 20_000 + 50 * (m + cols);

    if art_count > 0 {
        let mut phase1 = vec![0.0; cols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = 1.0;
        }
        tab.price(&phase1);
        match tab.run(deadline, limit)? {
            PhaseEnd::TimedOut => return Ok(LpStatus::TimedOut),
            PhaseEnd::Unbounded => return Err(SolverError::Numerical("phase 1 unbounded".into())),
            PhaseEnd::Optimal => {}
        }
        let infeasibility: f64 = (art_start..cols).map(|j| tab.value_of(j)).sum();
        if infeasibility > PHASE1_TOL {
            return Ok(LpStatus::Infeasible);
        }
        for j in art_start..cols {
            tab.blocked[j] = true;
            tab.ub[j] = 0.0;
        }
        // Drive basic artificials out where a real column can replace them.
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            let candidate = (0..art_start)
                .find(|&j| tab.pos[j] == usize::MAX && tab.t[r * cols + j].abs() > 1e-7);
            if let Some(j) = candidate {
                let value = tab.value_of(j);
                tab.pivot(r, j);
                tab.at_upper[j] = false;
                tab.beta[r] = value;
            }
        }
    }

    let mut phase2 = vec![0.0; cols];
    for (c, &j) in free.iter().enumerate() {
        phase2[c] = data.cost[j];
    }
    tab.price(&phase2);
    match tab.run(deadline, limit)? {
        PhaseEnd::TimedOut => return Ok(LpStatus::TimedOut),
        PhaseEnd::Unbounded => return Err(SolverError::Unbounded),
        PhaseEnd::Optimal => {}
    }

    let mut x = lower.to_vec();
    for (c, &j) in free.iter().enumerate() {
        x[j] = lower[j] + tab.value_of(c);
    }
    let violation = max_violation(data, lower, upper, &x);
    if violation > FEAS_TOL {
        return Err(SolverError::Numerical(format!("solution violates a row by {violation:e}")));
    }
    let value = data.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpStatus::Optimal { value, x })
}

fn max_violation(data: &LpData, lower: &[f64], upper: &[f64], x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..data.n {
        worst = worst.max(lower[j] - x[j]).max(x[j] - upper[j]);
    }
    for (terms, sense, rhs) in &data.rows {
        let lhs: f64 = terms.iter().map(|&(j, a)| a * x[j]).sum();
        let gap = match sense {
            RowSense::Le => lhs - rhs,
            RowSense::Ge => rhs - lhs,
            RowSense::Eq => (lhs - rhs).abs(),
        };
        worst = worst.max(gap);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(model: &MilpModel) -> LpStatus {
        let data = LpData::from_model(model).unwrap();
        solve_lp(&data, &data.lower.clone(), &data.upper.clone(), None).unwrap()
    }

    #[test]
    fn one_variable_max() {
        let mut m = MilpModel::new(ObjectiveSense::Maximize);
        let x = m.add_continuous("x", 0.0, 1.0);
        m.add_constraint("c", vec![(x, 1.0)], RowSense::Le, 0.5);
        m.set_objective(vec![(x, 1.0)], 0.0);
        match solve(&m) {
            LpStatus::Optimal { value, x } => {
                assert!((value + 0.5).abs() < 1e-12);
                assert!((x[0] - 0.5).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut m = MilpModel::new(ObjectiveSense::Minimize);
        let x = m.add_continuous("x", 0.0, f64::INFINITY);
        m.add_constraint("a", vec![(x, 1.0)], RowSense::Ge, 1.0);
        m.add_constraint("b", vec![(x, 1.0)], RowSense::Le, 0.0);
        assert_eq!(solve(&m), LpStatus::Infeasible);
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut m = MilpModel::new(ObjectiveSense::Maximize);
        let x = m.add_continuous("x", 0.0, f64::INFINITY);
        let y = m.add_continuous("y", 0.0, f64::INFINITY);
        m.add_constraint("a", vec![(x, 1.0)], RowSense::Le, 4.0);
        m.add_constraint("b", vec![(y, 2.0)], RowSense::Le, 12.0);
        m.add_constraint("c", vec![(x, 3.0), (y, 2.0)], RowSense::Le, 18.0);
        m.set_objective(vec![(x, 3.0), (y, 5.0)], 0.0);
        match solve(&m) {
            LpStatus::Optimal { value, x } => {
                assert!((value + 36.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_rows_with_shifted_bounds() {
        // min x + y, x + y = 3, x >= 1, 0.5 <= y <= 1.5, x - y >= 0
        let mut m = MilpModel::new(ObjectiveSense::Minimize);
        let x = m.add_continuous("x", 1.0, 10.0);
        let y = m.add_continuous("y", 0.5, 1.5);
        m.add_constraint("sum", vec![(x, 1.0), (y, 1.0)], RowSense::Eq, 3.0);
        m.add_constraint("gap", vec![(x, 1.0), (y, -1.0)], RowSense::Ge, 0.0);
        m.set_objective(vec![(x, 1.0), (y, 2.0)], 0.0);
        match solve(&m) {
            LpStatus::Optimal { value, x } => {
                assert!((value - 3.5).abs() < 1e-9, "{value}");
                assert!((x[0] - 2.5).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_is_reported() {
        let mut m = MilpModel::new(ObjectiveSense::Maximize);
        let x = m.add_continuous("x", 0.0, f64::INFINITY);
        m.add_constraint("c", vec![(x, 1.0)], RowSense::Ge, 1.0);
        m.set_objective(vec![(x, 1.0)], 0.0);
        let data = LpData::from_model(&m).unwrap();
        assert_eq!(solve_lp(&data, &data.lower, &data.upper, None), Err(SolverError::Unbounded));
    }

    #[test]
    fn fixed_variables_are_substituted() {
        let mut m = MilpModel::new(ObjectiveSense::Maximize);
        let a = m.add_binary("a");
        let b = m.add_binary("b");
        m.add_constraint("pair", vec![(a, 1.0), (b, 1.0)], RowSense::Le, 1.0);
        m.set_objective(vec![(a, 1.0), (b, 2.0)], 0.0);
        let data = LpData::from_model(&m).unwrap();
        let lower = vec![1.0, 0.0];
        let upper = vec![1.0, 1.0];
        match solve_lp(&data, &lower, &upper, None).unwrap() {
            LpStatus::Optimal { value, x } => {
                assert_eq!(x, vec![1.0, 0.0]);
                assert!((value + 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let lower = vec![1.0, 1.0];
        assert_eq!(solve_lp(&data, &lower, &upper, None).unwrap(), LpStatus::Infeasible);
    }
}
