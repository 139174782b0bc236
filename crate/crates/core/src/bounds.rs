//! The two-stage lower-bounding method.
//!
//! Stage 1 solves a maximum-cardinality model (M1 or M2) with `k = ub` and
//! `M = ceil(n / lb)`. Any integer upper bound `beta` on the largest class of
//! an equitable coloring gives `chi_eq >= ceil(n / beta)`. Stage 2 walks
//! `p = lb, lb + 1, ...` proving each equitable `p`-coloring infeasible until
//! one is found (which settles `chi_eq`) or a solve runs out of time.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::model::{build_m1, build_m2, build_m2p, decode_assignment, verify_coloring, ModelKind};
use crate::solver::{beta_from_outcome, solve_bnb, ModeMarker, SolveOutcome, SolveStatus};
use crate::EngineError;

/// Current lower and upper bound on the equitable chromatic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorBounds {
    pub lb: usize,
    pub ub: usize,
}

impl ColorBounds {
    /// Checks `1 <= lb <= ub <= n`.
    pub fn new(lb: usize, ub: usize, n: usize) -> Result<Self, EngineError> {
        if lb < 1 || lb > ub || ub > n {
            return Err(EngineError::InvalidBounds { lb, ub, n });
        }
        Ok(Self { lb, ub })
    }
}

/// `ub = max degree + 1`; `lb = 3` with an odd cycle, `2` when bipartite with an
/// edge, `1` when edgeless.
pub fn default_bounds(g: &Graph) -> Result<ColorBounds, EngineError> {
    let lb = if g.m() == 0 {
        1
    } else if g.is_bipartite() {
        2
    } else {
        3
    };
    ColorBounds::new(lb, g.max_degree() + 1, g.n())
}

/// Big-M constant for M1/M2 given a lower bound `k0` on `chi_eq`: `ceil(n / k0)`.
pub fn big_m_value(n: usize, k0: usize) -> Result<usize, EngineError> {
    if k0 < 1 {
        return Err(EngineError::OutOfRange(format!("lower bound k0 = {k0} must be at least 1")));
    }
    Ok(n.div_ceil(k0))
}

/// Lower bound `ceil(n / beta0)` on `chi_eq` from an upper bound `beta0` on the
/// largest class of any equitable coloring.
pub fn lb_from_beta(n: usize, beta0: usize) -> Result<usize, EngineError> {
    if beta0 < 1 {
        return Err(EngineError::OutOfRange(format!("class bound beta0 = {beta0} must be at least 1")));
    }
    Ok(n.div_ceil(beta0))
}

/// Every `beta >= 2` with `ceil(n / (beta - 1)) == ceil(n / beta1)`, scanning `2..=n + 1`.
pub fn candidate_betas(n: usize, beta1: usize) -> Result<Vec<usize>, EngineError> {
    if beta1 < 2 {
        return Err(EngineError::OutOfRange(format!("beta1 = {beta1} must be at least 2")));
    }
    let target = n.div_ceil(beta1);
    Ok((2..=n + 1).filter(|&b| n.div_ceil(b - 1) == target).collect())
}

/// Model used to bound the largest class in stage 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage1Model {
    M1,
    M2,
}

impl From<Stage1Model> for ModelKind {
    fn from(m: Stage1Model) -> Self {
        match m {
            Stage1Model::M1 => ModelKind::M1,
            Stage1Model::M2 => ModelKind::M2,
        }
    }
}

/// Feasibility check used for each `p` in stage 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Stage2Backend {
    #[default]
    M2P,
    /// M2 with `k = p`, `M = ceil(n / p)`, stopped at the first integer solution.
    M2,
}

/// One result row: a stage-1 bound or a stage-2 sweep on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub lb_in: usize,
    pub ub_in: usize,
    pub model_used: ModelKind,
    pub beta0: Option<usize>,
    pub lb_star: usize,
    pub mode_marker: Option<ModeMarker>,
    pub time_s: f64,
    pub stage: u8,
    pub chi_eq_proved: Option<usize>,
    /// Lower bound after each stage-2 step, starting with the input bound.
    pub lb_trace: Vec<usize>,
    /// Wall-clock seconds of each stage-2 solve.
    pub iteration_times: Vec<f64>,
}

impl StageReport {
    fn new(g: &Graph, bounds: ColorBounds, model_used: ModelKind, stage: u8) -> Self {
        Self {
            instance: g.name().to_string(),
            n: g.n(),
            m: g.m(),
            lb_in: bounds.lb,
            ub_in: bounds.ub,
            model_used,
            beta0: None,
            lb_star: bounds.lb,
            mode_marker: None,
            time_s: 0.0,
            stage,
            chi_eq_proved: None,
            lb_trace: Vec::new(),
            iteration_times: Vec::new(),
        }
    }

    pub fn bounds(&self) -> ColorBounds {
        ColorBounds { lb: self.lb_star, ub: self.ub_in }
    }

    /// Mean stage-2 solve time, if any solve ran.
    pub fn average_iteration_time(&self) -> Option<f64> {
        if self.iteration_times.is_empty() {
            None
        } else {
            Some(self.iteration_times.iter().sum::<f64>() / self.iteration_times.len() as f64)
        }
    }
}

fn check_bounds(g: &Graph, bounds: ColorBounds) -> Result<(), EngineError> {
    ColorBounds::new(bounds.lb, bounds.ub, g.n()).map(|_| ())
}

/// Stage 1: bound the largest equitable class and lift `lb` to `ceil(n / beta0)`.
pub fn stage1(g: &Graph, bounds: ColorBounds, model: Stage1Model, budget: Duration) -> Result<StageReport, EngineError> {
    stage1_with_big_m(g, bounds, model, None, budget)
}

/// Stage 1 with an explicit big-M instead of `ceil(n / lb)`.
pub fn stage1_with_big_m(
    g: &Graph,
    bounds: ColorBounds,
    model: Stage1Model,
    big_m: Option<usize>,
    budget: Duration,
) -> Result<StageReport, EngineError> {
    check_bounds(g, bounds)?;
    let start = Instant::now();
    let big_m = match big_m {
        Some(m) => m,
        None => big_m_value(g.n(), bounds.lb)?,
    };
    let milp = match model {
        Stage1Model::M1 => build_m1(g, bounds.ub, big_m)?,
        Stage1Model::M2 => build_m2(g, bounds.ub, big_m)?,
    };
    let outcome = solve_bnb(&milp, budget, None)?;
    let mut report = StageReport::new(g, bounds, model.into(), 1);
    apply_outcome(&mut report, g.n(), &outcome)?;
    report.time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn apply_outcome(report: &mut StageReport, n: usize, outcome: &SolveOutcome) -> Result<(), EngineError> {
    report.mode_marker = outcome.mode;
    if outcome.status == SolveStatus::Infeasible {
        // No equitable coloring with at most `ub` colors: the upper bound is wrong.
        return Err(EngineError::WrongUpperBound { ub: report.ub_in });
    }
    if let Some(beta0) = beta_from_outcome(outcome).filter(|&b| b >= 1) {
        report.beta0 = Some(beta0);
        report.lb_star = report.lb_in.max(lb_from_beta(n, beta0)?);
    }
    Ok(())
}

/// Runs M1 and M2 concurrently and keeps the report with the smaller `beta0`
/// (M2 on ties, or whichever produced a bound).
pub fn stage1_race(g: &Graph, bounds: ColorBounds, budget: Duration) -> Result<StageReport, EngineError> {
    let (m1, m2) = std::thread::scope(|s| {
        let m1 = s.spawn(|| stage1(g, bounds, Stage1Model::M1, budget));
        let m2 = s.spawn(|| stage1(g, bounds, Stage1Model::M2, budget));
        (m1.join().expect("M1 worker panicked"), m2.join().expect("M2 worker panicked"))
    });
    let (m1, m2) = (m1?, m2?);
    Ok(match (m1.beta0, m2.beta0) {
        (Some(a), Some(b)) if a < b => m1,
        (Some(_), None) => m1,
        _ => m2,
    })
}

/// Stage 2: for `p = lb..=ub`, prove infeasibility or find a certified
/// equitable `p`-coloring. `budget` applies to each solve separately.
pub fn stage2(g: &Graph, bounds: ColorBounds, budget: Duration, backend: Stage2Backend) -> Result<StageReport, EngineError> {
    check_bounds(g, bounds)?;
    let start = Instant::now();
    let model_used = match backend {
        Stage2Backend::M2P => ModelKind::M2P,
        Stage2Backend::M2 => ModelKind::M2,
    };
    let mut report = StageReport::new(g, bounds, model_used, 2);
    let mut lb = bounds.lb;
    report.lb_trace.push(lb);

    for p in bounds.lb..=bounds.ub {
        let iteration = Instant::now();
        let milp = match backend {
            Stage2Backend::M2P => build_m2p(g, p)?,
            Stage2Backend::M2 => build_m2(g, p, g.n().div_ceil(p))?,
        };
        let target = match backend {
            Stage2Backend::M2P => None,
            Stage2Backend::M2 => Some(0.0),
        };
        let outcome = solve_bnb(&milp, budget, target)?;
        report.iteration_times.push(iteration.elapsed().as_secs_f64());
        report.mode_marker = outcome.mode;

        if let Some(values) = &outcome.assignment {
            let coloring = decode_assignment(&milp, values, g)?;
            let verdict = verify_coloring(g, &coloring);
            if !verdict.is_certified() {
                return Err(EngineError::Certification(format!("{:?}", verdict.violations)));
            }
            if coloring.p() != p {
                // Only possible with the M2 backend when `lb` was not a valid lower bound.
                return Err(EngineError::Certification(format!(
                    "found an equitable {}-coloring while checking p = {p}",
                    coloring.p()
                )));
            }
            report.chi_eq_proved = Some(p);
            break;
        }
        match outcome.status {
            SolveStatus::Infeasible => {
                if p == bounds.ub {
                    return Err(EngineError::WrongUpperBound { ub: bounds.ub });
                }
                lb = p + 1;
                report.lb_trace.push(lb);
            }
            // Out of time: no claim about p.
            _ => break,
        }
    }
    report.lb_star = lb;
    report.time_s = start.elapsed().as_secs_f64();
    Ok(report)
}
