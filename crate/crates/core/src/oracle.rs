//! Brute-force ground truth for small graphs.
//!
//! Everything here is decided by exhaustive backtracking and shares no code
//! with the integer programs it is used to check.

use serde::Serialize;

use crate::graph::Graph;
use crate::model::EquitableColoring;
use crate::OracleError;

/// Largest vertex count the oracle accepts.
pub const MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub chi_eq: usize,
    /// `per_p_feasible[p - 1]`: is there an equitable coloring with exactly `p` classes.
    pub per_p_feasible: Vec<bool>,
    /// `max_class_by_k[k - 1]`: largest class over equitable colorings with at most `k` colors.
    pub max_class_by_k: Vec<Option<usize>>,
    /// One witness per feasible `p`.
    pub witnesses: Vec<Option<EquitableColoring>>,
}

fn check_size(g: &Graph) -> Result<(), OracleError> {
    if g.n() > MAX_VERTICES {
        return Err(OracleError::TooLarge { n: g.n(), limit: MAX_VERTICES });
    }
    Ok(())
}

struct Search<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    p: usize,
    lo: usize,
    hi: usize,
    /// Classes allowed to reach `hi` when `hi > lo`.
    big_allowed: usize,
    color: Vec<usize>,
    sizes: Vec<usize>,
    big: usize,
    used: usize,
}

impl Search<'_> {
    fn run(&mut self, idx: usize) -> bool {
        let n = self.order.len();
        if idx == n {
            return self.used == self.p && self.sizes.iter().all(|&s| s >= self.lo);
        }
        let remaining = n - idx;
        let deficit: usize = self.sizes[..self.used].iter().map(|&s| self.lo.saturating_sub(s)).sum::<usize>()
            + (self.p - self.used) * self.lo.max(1);
        if deficit > remaining {
            return false;
        }
        let v = self.order[idx];
        // A new class may only be opened as the next unused index.
        let limit = (self.used + 1).min(self.p);
        for c in 0..limit {
            let s = self.sizes[c];
            if s >= self.hi {
                continue;
            }
            let grows_big = self.hi > self.lo && s + 1 == self.hi;
            if grows_big && self.big >= self.big_allowed {
                continue;
            }
            if self.g.neighbors(v).iter().any(|&u| self.color[u] == c + 1) {
                continue;
            }
            self.color[v] = c + 1;
            self.sizes[c] += 1;
            let opened = c == self.used;
            if opened {
                self.used += 1;
            }
            if grows_big {
                self.big += 1;
            }
            if self.run(idx + 1) {
                return true;
            }
            if grows_big {
                self.big -= 1;
            }
            if opened {
                self.used -= 1;
            }
            self.sizes[c] -= 1;
            self.color[v] = 0;
        }
        false
    }
}

/// Searches for an equitable coloring of `g` with exactly `p` non-empty classes.
pub fn oracle_equitable_p(g: &Graph, p: usize) -> Result<Option<EquitableColoring>, OracleError> {
    check_size(g)?;
    let n = g.n();
    if p < 1 || p > n {
        return Err(OracleError::ColorsOutOfRange { p, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut search = Search {
        g,
        order,
        p,
        lo: n / p,
        hi: n.div_ceil(p),
        big_allowed: n % p,
        color: vec![0; n],
        sizes: vec![0; p],
        big: 0,
        used: 0,
    };
    if search.run(0) {
        Ok(Some(EquitableColoring::from_colors(search.color, p)))
    } else {
        Ok(None)
    }
}

/// Exact equitable chromatic number plus the full feasibility map.
pub fn oracle_chi_eq(g: &Graph) -> Result<OracleResult, OracleError> {
    check_size(g)?;
    let n = g.n();
    let mut witnesses = Vec::with_capacity(n);
    // Equitable colorability is not monotone in p, so every p is checked.
    for p in 1..=n {
        witnesses.push(oracle_equitable_p(g, p)?);
    }
    let per_p_feasible: Vec<bool> = witnesses.iter().map(Option::is_some).collect();
    let chi_eq = per_p_feasible.iter().position(|&f| f).map_or(0, |i| i + 1);
    let mut max_class_by_k = Vec::with_capacity(n);
    let mut best: Option<usize> = None;
    for w in &witnesses {
        if let Some(c) = w {
            best = best.max(Some(c.max_class()));
        }
        max_class_by_k.push(best);
    }
    Ok(OracleResult { chi_eq, per_p_feasible, max_class_by_k, witnesses })
}

/// Largest class over all equitable colorings using at most `k` colors;
/// `None` when no such coloring exists.
pub fn oracle_max_class(g: &Graph, k: usize) -> Result<Option<usize>, OracleError> {
    check_size(g)?;
    let mut best = None;
    for p in 1..=k.min(g.n()) {
        if let Some(c) = oracle_equitable_p(g, p)? {
            best = best.max(Some(c.max_class()));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::model::verify_coloring;

    #[test]
    fn triangle() {
        let g = fixtures::complete(3);
        assert!(oracle_equitable_p(&g, 3).unwrap().is_some());
        assert!(oracle_equitable_p(&g, 2).unwrap().is_none());
    }

    #[test]
    fn star_is_not_monotone() {
        let g = fixtures::star(5);
        let r = oracle_chi_eq(&g).unwrap();
        assert_eq!(r.per_p_feasible, vec![false, false, false, true, true, true]);
        assert_eq!(r.chi_eq, 4);
        assert!(oracle_equitable_p(&g, 3).unwrap().is_none());
    }

    #[test]
    fn non_monotone_feasibility_exists() {
        // K_{3,3}: 2 classes work, 4 classes (sizes 2,2,1,1) work, but 3 classes of size 2 need
        // a perfect matching of non-edges across sides, which is impossible.
        let g = fixtures::complete_bipartite(3, 3);
        let r = oracle_chi_eq(&g).unwrap();
        assert_eq!(r.chi_eq, 2);
        assert_eq!(r.per_p_feasible, vec![false, true, false, true, true, true]);
    }

    #[test]
    fn cycles_and_cliques() {
        assert_eq!(oracle_chi_eq(&fixtures::cycle(5)).unwrap().chi_eq, 3);
        assert_eq!(oracle_chi_eq(&fixtures::cycle(6)).unwrap().chi_eq, 2);
        assert_eq!(oracle_chi_eq(&fixtures::complete(5)).unwrap().chi_eq, 5);
    }

    #[test]
    fn max_class() {
        assert_eq!(oracle_max_class(&fixtures::cycle(5), 3).unwrap(), Some(2));
        assert_eq!(oracle_max_class(&fixtures::complete(4), 4).unwrap(), Some(1));
        assert_eq!(oracle_max_class(&fixtures::edgeless(6), 1).unwrap(), Some(6));
        assert_eq!(oracle_max_class(&fixtures::complete(4), 3).unwrap(), None);
    }

    #[test]
    fn witnesses_are_certified() {
        for g in fixtures::corpus().iter().step_by(7) {
            let r = oracle_chi_eq(g).unwrap();
            assert_eq!(r.per_p_feasible[g.n() - 1], true);
            assert!(r.chi_eq <= g.max_degree() + 1);
            for (p, w) in r.witnesses.iter().enumerate() {
                if let Some(c) = w {
                    assert!(verify_coloring(g, c).is_certified());
                    assert_eq!(c.p(), p + 1);
                }
            }
        }
    }

    #[test]
    fn refuses_large_graphs() {
        let g = fixtures::path(13);
        assert_eq!(oracle_chi_eq(&g), Err(OracleError::TooLarge { n: 13, limit: 12 }));
        assert_eq!(oracle_equitable_p(&fixtures::path(3), 4), Err(OracleError::ColorsOutOfRange { p: 4, n: 3 }));
    }
}
