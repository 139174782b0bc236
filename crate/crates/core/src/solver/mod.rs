//! Bundled exact solver: LP relaxations by simplex, integrality by
//! depth-first branch-and-bound over the binary variables.

mod propagate;
mod simplex;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::model::{MilpModel, ObjectiveSense, VarKind};
use crate::SolverError;
use propagate::propagate;
use simplex::{solve_lp, LpData, LpStatus};

/// A value within this distance of an integer counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// Stopped at a target before optimality was proved.
    BoundOnly,
    Timeout,
}

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeMarker {
    /// Search finished: optimal or infeasible is proved.
    #[serde(rename = "i")]
    Integer,
    /// Only the root relaxation bound is available.
    #[serde(rename = "r")]
    Root,
    /// Bound tightened beyond the root without a proof.
    #[serde(rename = "b")]
    Bound,
}

impl ModeMarker {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeMarker::Integer => "i",
            ModeMarker::Root => "r",
            ModeMarker::Bound => "b",
        }
    }
}

impl fmt::Display for ModeMarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Objective of the best integer solution found.
    pub primal: Option<f64>,
    /// Proven bound on the optimum: an upper bound for maximization, a lower
    /// bound for minimization. Absent when the root LP never finished.
    pub dual_bound: Option<f64>,
    pub assignment: Option<Vec<f64>>,
    pub mode: Option<ModeMarker>,
    pub root_bound: Option<f64>,
    pub elapsed: Duration,
    pub nodes: usize,
}

/// Result of the continuous relaxation.
#[derive(Debug, Clone, PartialEq)]
pub enum LpRelaxation {
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
}

/// Solves the LP relaxation of `model` (binaries relaxed to `[0, 1]`).
pub fn lp_relax(model: &MilpModel) -> Result<LpRelaxation, SolverError> {
    let data = LpData::from_model(model)?;
    match solve_lp(&data, &data.lower, &data.upper, None)? {
        LpStatus::Optimal { x, .. } => Ok(LpRelaxation::Optimal { objective: model.objective_value(&x), values: x }),
        LpStatus::Infeasible => Ok(LpRelaxation::Infeasible),
        LpStatus::TimedOut => unreachable!("no deadline was set"),
    }
}

/// Upper bound on the maximum class size read off an M1/M2 outcome:
/// the dual bound rounded down, with [`INTEGRALITY_TOL`] slack.
pub fn beta_from_outcome(outcome: &SolveOutcome) -> Option<usize> {
    outcome.dual_bound.map(|d| (d + INTEGRALITY_TOL).floor().max(0.0) as usize)
}

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Parent relaxation value (minimization form).
    bound: f64,
}

/// Depth-first branch-and-bound.
///
/// Branches on the most fractional binary (lowest index on ties) and explores
/// the 1-branch first. Feasibility models (constant objective) stop at the
/// first integer solution; with `target`, the search stops once the incumbent
/// reaches it.
pub fn solve_bnb(model: &MilpModel, budget: Duration, target: Option<f64>) -> Result<SolveOutcome, SolverError> {
    let start = Instant::now();
    let deadline = start.checked_add(budget);
    let data = LpData::from_model(model)?;
    let binaries: Vec<usize> = model
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Binary)
        .map(|(j, _)| j)
        .collect();
    let maximize = model.objective().sense == ObjectiveSense::Maximize;
    let to_model = |min_value: f64| {
        let v = if maximize { -min_value } else { min_value };
        v + model.objective().constant
    };
    let integral_objective = model.objective().terms.iter().all(|&(j, c)| {
        c.fract() == 0.0 && model.variables()[j].kind == VarKind::Binary
    });
    let feasibility = model.is_feasibility();
    // Relaxation bound that still leaves room for a strictly better incumbent.
    let can_improve = |bound: f64, incumbent: f64| {
        if integral_objective {
            bound <= incumbent - 1.0 + INTEGRALITY_TOL
        } else {
            bound < incumbent - 1e-9
        }
    };
    let reached = |primal: f64| match target {
        Some(t) if maximize => primal >= t - 1e-9,
        Some(t) => primal <= t + 1e-9,
        None => false,
    };

    let finish = |status, primal, dual_bound, assignment, mode, root_bound, nodes| SolveOutcome {
        status,
        primal,
        dual_bound,
        assignment,
        mode,
        root_bound,
        elapsed: start.elapsed(),
        nodes,
    };

    let integer: Vec<bool> = model.variables().iter().map(|v| v.kind == VarKind::Binary).collect();
    let (mut root_lower, mut root_upper) = (data.lower.clone(), data.upper.clone());
    if !propagate(&data, &integer, &mut root_lower, &mut root_upper) {
        return Ok(finish(SolveStatus::Infeasible, None, None, None, Some(ModeMarker::Integer), None, 1));
    }
    let root = solve_lp(&data, &root_lower, &root_upper, deadline)?;
    let (root_value, root_x) = match root {
        LpStatus::TimedOut => return Ok(finish(SolveStatus::Timeout, None, None, None, None, None, 0)),
        LpStatus::Infeasible => {
            return Ok(finish(SolveStatus::Infeasible, None, None, None, Some(ModeMarker::Integer), None, 1))
        }
        LpStatus::Optimal { value, x } => (value, x),
    };

    let mut stack = vec![Node { lower: root_lower, upper: root_upper, bound: root_value }];
    let mut cached_root = Some((root_value, root_x));
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut nodes = 0usize;
    let mut timed_out = false;
    let mut stopped = false;

    while let Some(node) = stack.pop() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            stack.push(node);
            timed_out = true;
            break;
        }
        if let Some((inc, _)) = &incumbent {
            if !can_improve(node.bound, *inc) {
                continue;
            }
        }
        let mut node = node;
        let (value, x) = match cached_root.take() {
            Some(root) => root,
            None if !propagate(&data, &integer, &mut node.lower, &mut node.upper) => {
                nodes += 1;
                continue;
            }
            None => match solve_lp(&data, &node.lower, &node.upper, deadline)? {
                LpStatus::Optimal { value, x } => (value, x),
                LpStatus::Infeasible => {
                    nodes += 1;
                    continue;
                }
                LpStatus::TimedOut => {
                    stack.push(node);
                    timed_out = true;
                    break;
                }
            },
        };
        nodes += 1;
        if let Some((inc, _)) = &incumbent {
            if !can_improve(value, *inc) {
                continue;
            }
        }

        let mut branch: Option<(usize, f64)> = None;
        for &j in &binaries {
            let frac = x[j] - x[j].floor();
            let dist = frac.min(1.0 - frac);
            if dist > INTEGRALITY_TOL && branch.is_none_or(|(_, best)| dist > best) {
                branch = Some((j, dist));
            }
        }

        match branch {
            None => {
                let mut solution = x;
                for &j in &binaries {
                    solution[j] = solution[j].round();
                }
                // Score the rounded point so the primal value carries no LP noise.
                let primal = model.objective_value(&solution);
                let sign = if maximize { -1.0 } else { 1.0 };
                incumbent = Some((sign * (primal - model.objective().constant), solution));
                if feasibility || reached(primal) {
                    stopped = true;
                    break;
                }
            }
            Some((j, _)) => {
                let mut zero = Node { lower: node.lower.clone(), upper: node.upper.clone(), bound: value };
                zero.upper[j] = 0.0;
                let mut one = node;
                one.lower[j] = 1.0;
                one.bound = value;
                stack.push(zero);
                stack.push(one);
            }
        }
    }

    let root_bound = Some(to_model(root_value));
    let complete = !timed_out && !stopped;
    if complete || (stopped && feasibility) {
        return Ok(match incumbent {
            Some((value, x)) => {
                let primal = to_model(value);
                finish(SolveStatus::Optimal, Some(primal), Some(primal), Some(x), Some(ModeMarker::Integer), root_bound, nodes)
            }
            None => finish(SolveStatus::Infeasible, None, None, None, Some(ModeMarker::Integer), root_bound, nodes),
        });
    }

    // Open nodes still bound the optimum; so does the incumbent.
    let mut global = stack
        .iter()
        .filter(|node| incumbent.as_ref().is_none_or(|(inc, _)| can_improve(node.bound, *inc)))
        .map(|node| node.bound)
        .fold(f64::INFINITY, f64::min);
    if let Some((inc, _)) = &incumbent {
        global = global.min(*inc);
    }
    let primal = incumbent.as_ref().map(|(v, _)| to_model(*v));
    let assignment = incumbent.map(|(_, x)| x);
    if stopped && primal.is_some_and(|p| (to_model(global) - p).abs() <= 1e-9) {
        return Ok(finish(SolveStatus::Optimal, primal, primal, assignment, Some(ModeMarker::Integer), root_bound, nodes));
    }
    let mode = if (global - root_value).abs() <= 1e-9 { ModeMarker::Root } else { ModeMarker::Bound };
    let status = if timed_out { SolveStatus::Timeout } else { SolveStatus::BoundOnly };
    Ok(finish(status, primal, Some(to_model(global)), assignment, Some(mode), root_bound, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::model::{build_m2, build_m2p, decode_assignment, verify_coloring, RowSense};

    const BUDGET: Duration = Duration::from_secs(30);

    #[test]
    fn knapsack() {
        // max 5a + 4b + 3c, 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8 -> 9 at (1, 1, 0)
        let mut m = MilpModel::new(ObjectiveSense::Maximize);
        let a = m.add_binary("a");
        let b = m.add_binary("b");
        let c = m.add_binary("c");
        m.add_constraint("r1", vec![(a, 2.0), (b, 3.0), (c, 1.0)], RowSense::Le, 5.0);
        m.add_constraint("r2", vec![(a, 4.0), (b, 1.0), (c, 2.0)], RowSense::Le, 11.0);
        m.add_constraint("r3", vec![(a, 3.0), (b, 4.0), (c, 2.0)], RowSense::Le, 8.0);
        m.set_objective(vec![(a, 5.0), (b, 4.0), (c, 3.0)], 0.0);
        let out = solve_bnb(&m, BUDGET, None).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.primal, Some(9.0));
        assert_eq!(out.dual_bound, Some(9.0));
        assert_eq!(out.assignment.unwrap(), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn triangle_feasibility() {
        let g = fixtures::complete(3);
        let m = build_m2p(&g, 3).unwrap();
        let out = solve_bnb(&m, BUDGET, None).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        let c = decode_assignment(&m, out.assignment.as_ref().unwrap(), &g).unwrap();
        assert!(verify_coloring(&g, &c).is_certified());

        let m = build_m2p(&g, 2).unwrap();
        let out = solve_bnb(&m, BUDGET, None).unwrap();
        assert_eq!(out.status, SolveStatus::Infeasible);
        assert_eq!(out.assignment, None);
        assert_eq!(out.mode, Some(ModeMarker::Integer));
    }

    #[test]
    fn five_cycle_max_class() {
        let g = fixtures::cycle(5);
        let m = build_m2(&g, 3, 2).unwrap();
        let out = solve_bnb(&m, BUDGET, None).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.primal, Some(2.0));
        assert_eq!(beta_from_outcome(&out), Some(2));
    }

    #[test]
    fn beta_flooring() {
        let mut out = SolveOutcome {
            status: SolveStatus::Optimal,
            primal: Some(30.0),
            dual_bound: Some(30.0),
            assignment: None,
            mode: Some(ModeMarker::Integer),
            root_bound: None,
            elapsed: Duration::ZERO,
            nodes: 0,
        };
        assert_eq!(beta_from_outcome(&out), Some(30));
        out.dual_bound = Some(4.99999);
        assert_eq!(beta_from_outcome(&out), Some(4));
        out.dual_bound = Some(4.9999995);
        assert_eq!(beta_from_outcome(&out), Some(5));
        out.status = SolveStatus::Timeout;
        out.dual_bound = None;
        assert_eq!(beta_from_outcome(&out), None);
    }

    #[test]
    fn zero_budget_times_out_without_bound() {
        let g = fixtures::random(8, 0.5, 1);
        let m = build_m2(&g, 8, 8).unwrap();
        let out = solve_bnb(&m, Duration::ZERO, None).unwrap();
        assert_eq!(out.status, SolveStatus::Timeout);
        assert_eq!(out.dual_bound, None);
        assert_eq!(beta_from_outcome(&out), None);
    }
}
