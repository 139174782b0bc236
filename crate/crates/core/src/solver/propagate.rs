//! Bound propagation over linear rows, applied at every search node.

use super::simplex::LpData;
use crate::model::RowSense;

const TOL: f64 = 1e-9;
const MAX_PASSES: usize = 50;

/// Tightens `lower` / `upper` in place from the rows of `data`, rounding the
/// bounds of `integer` columns. Returns `false` when some row cannot be
/// satisfied within the bounds.
pub(crate) fn propagate(data: &LpData, integer: &[bool], lower: &mut [f64], upper: &mut [f64]) -> bool {
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        for (terms, sense, rhs) in &data.rows {
            // Activity range with the count of unbounded contributions.
            let (mut lo, mut hi) = (0.0, 0.0);
            let (mut lo_inf, mut hi_inf) = (0usize, 0usize);
            for &(j, a) in terms {
                let (l, u) = if a > 0.0 { (a * lower[j], a * upper[j]) } else { (a * upper[j], a * lower[j]) };
                if l.is_finite() { lo += l } else { lo_inf += 1 }
                if u.is_finite() { hi += u } else { hi_inf += 1 }
            }
            let need_le = *sense != RowSense::Ge;
            let need_ge = *sense != RowSense::Le;
            if (need_le && lo_inf == 0 && lo > rhs + 1e-6) || (need_ge && hi_inf == 0 && hi < rhs - 1e-6) {
                return false;
            }
            for &(j, a) in terms {
                let (l, u) = if a > 0.0 { (a * lower[j], a * upper[j]) } else { (a * upper[j], a * lower[j]) };
                // a * x_j <= rhs - (lo without j)
                if need_le {
                    let rest = if l.is_finite() {
                        (lo_inf == 0).then(|| lo - l)
                    } else {
                        (lo_inf == 1).then_some(lo)
                    };
                    if let Some(rest) = rest {
                        let cap = (rhs - rest) / a;
                        changed |= if a > 0.0 {
                            tighten_upper(j, cap, integer, upper)
                        } else {
                            tighten_lower(j, cap, integer, lower)
                        };
                    }
                }
                // a * x_j >= rhs - (hi without j)
                if need_ge {
                    let rest = if u.is_finite() {
                        (hi_inf == 0).then(|| hi - u)
                    } else {
                        (hi_inf == 1).then_some(hi)
                    };
                    if let Some(rest) = rest {
                        let floor = (rhs - rest) / a;
                        changed |= if a > 0.0 {
                            tighten_lower(j, floor, integer, lower)
                        } else {
                            tighten_upper(j, floor, integer, upper)
                        };
                    }
                }
                if lower[j] > upper[j] + 1e-6 {
                    return false;
                }
            }
        }
        if !changed {
            break;
        }
    }
    true
}

fn tighten_upper(j: usize, cap: f64, integer: &[bool], upper: &mut [f64]) -> bool {
    let cap = if integer[j] { (cap + 1e-6).floor() } else { cap };
    if cap < upper[j] - TOL {
        // Continuous bounds only move on a clear gain, which keeps passes finite.
        if integer[j] || upper[j] - cap > 1e-6 * (1.0 + cap.abs()) {
            upper[j] = cap;
            return true;
        }
    }
    false
}

fn tighten_lower(j: usize, floor: f64, integer: &[bool], lower: &mut [f64]) -> bool {
    let floor = if integer[j] { (floor - 1e-6).ceil() } else { floor };
    if floor > lower[j] + TOL {
        if integer[j] || floor - lower[j] > 1e-6 * (1.0 + floor.abs()) {
            lower[j] = floor;
            return true;
        }
    }
    false
}
