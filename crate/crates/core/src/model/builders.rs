//! The four equitable coloring formulations.
//!
//! Variable order is fixed: all `y` (color-major), all `z` (color-major), then
//! `w`, `v` and `x` (color-major) as the model needs them. Identical inputs
//! therefore produce identical models, row for row.

use super::{names, MilpModel, ModelKind, ModelMeta, ObjectiveSense, RowSense};
use crate::graph::Graph;
use crate::ModelError;

/// How a partial-ordering feasibility model pins class sizes to
/// `{floor(n/p), ceil(n/p)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CardinalityEncoding {
    /// Four inequalities per class, no extra variables.
    #[default]
    BigMFree,
    /// Selector binaries `v_i + w_i = 1` choosing the large or small size.
    Indicator,
}

/// Parameters of the maximum-cardinality models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxClassOptions {
    /// Upper bound on the number of colors.
    pub k: usize,
    pub big_m: usize,
    /// Adds `u_1 >= u_2 >= ... >= u_k`. Off by default: it does not speed up solving.
    pub ordered_classes: bool,
}

impl MaxClassOptions {
    pub fn new(k: usize, big_m: usize) -> Self {
        Self { k, big_m, ordered_classes: false }
    }
}

/// Accumulates a linear expression, merging repeated variables.
#[derive(Default)]
struct Expr(Vec<(usize, f64)>);

impl Expr {
    fn add(&mut self, var: usize, coef: f64) -> &mut Self {
        match self.0.iter_mut().find(|(j, _)| *j == var) {
            Some(term) => term.1 += coef,
            None => self.0.push((var, coef)),
        }
        self
    }

    fn add_all(&mut self, vars: &[usize], coef: f64) -> &mut Self {
        for &v in vars {
            self.add(v, coef);
        }
        self
    }

    fn finish(&mut self) -> Vec<(usize, f64)> {
        let mut terms = std::mem::take(&mut self.0);
        terms.retain(|&(_, c)| c != 0.0);
        terms
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn check_colors(g: &Graph, p: usize) -> Result<(), ModelError> {
    if p < 1 || p > g.n() {
        return Err(ModelError::ColorsOutOfRange { colors: p, n: g.n() });
    }
    Ok(())
}


/// Declares the ordering variables and emits the rows shared by both
/// partial-ordering models: `z_{v,1} = 0`, `y_{k,v} = 0`, monotone `y`, the
/// `y`/`z` coupling and the edge rows.
/// Returns the `y` ids, `y[i - 1][v]` for color `i`.
fn ordering_skeleton(model: &mut MilpModel, g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let y: Vec<Vec<usize>> =
        (1..=k).map(|i| (0..n).map(|v| model.add_binary(names::y(i, v))).collect()).collect();
    let z: Vec<Vec<usize>> =
        (1..=k).map(|i| (0..n).map(|v| model.add_binary(names::z(v, i))).collect()).collect();

    for v in 0..n {
        model.add_constraint(format!("first_{}", v + 1), vec![(z[0][v], 1.0)], RowSense::Eq, 0.0);
    }
    for v in 0..n {
        model.add_constraint(format!("last_{}", v + 1), vec![(y[k - 1][v], 1.0)], RowSense::Eq, 0.0);
    }
    for i in 0..k - 1 {
        for v in 0..n {
            model.add_constraint(
                format!("mono_{}_{}", i + 1, v + 1),
                vec![(y[i][v], 1.0), (y[i + 1][v], -1.0)],
                RowSense::Ge,
                0.0,
            );
        }
    }
    for i in 0..k - 1 {
        for v in 0..n {
            model.add_constraint(
                format!("link_{}_{}", i + 1, v + 1),
                vec![(y[i][v], 1.0), (z[i + 1][v], 1.0)],
                RowSense::Eq,
                1.0,
            );
        }
    }
    for i in 0..k {
        for &(u, v) in g.edges() {
            model.add_constraint(
                format!("edge_{}_{}_{}", i + 1, u + 1, v + 1),
                vec![(y[i][u], 1.0), (z[i][u], 1.0), (y[i][v], 1.0), (z[i][v], 1.0)],
                RowSense::Ge,
                1.0,
            );
        }
    }
    y
}

/// Partial-ordering model deciding whether `g` has an equitable coloring with
/// exactly `p` non-empty classes.
pub fn build_m1p(g: &Graph, p: usize, encoding: CardinalityEncoding) -> Result<MilpModel, ModelError> {
    check_colors(g, p)?;
    let n = g.n();
    let (lo, hi) = ((n / p) as f64, ceil_div(n, p) as f64);
    let mut model = MilpModel::new(ObjectiveSense::Minimize);
    let y = ordering_skeleton(&mut model, g, p);

    match encoding {
        CardinalityEncoding::BigMFree => {
            // u_1 = n - sum y_1
            let first = Expr::default().add_all(&y[0], -1.0).finish();
            model.add_constraint("size_hi_1", first.clone(), RowSense::Le, hi - n as f64);
            model.add_constraint("size_lo_1", first, RowSense::Ge, lo - n as f64);
            for i in 1..p {
                let size = Expr::default().add_all(&y[i - 1], 1.0).add_all(&y[i], -1.0).finish();
                model.add_constraint(format!("size_hi_{}", i + 1), size.clone(), RowSense::Le, hi);
                model.add_constraint(format!("size_lo_{}", i + 1), size, RowSense::Ge, lo);
            }
        }
        CardinalityEncoding::Indicator => {
            let w: Vec<usize> = (1..=p).map(|i| model.add_binary(names::w(i))).collect();
            let v: Vec<usize> = (1..=p).map(|i| model.add_binary(names::v(i))).collect();
            let first = Expr::default().add_all(&y[0], 1.0).add(v[0], hi).add(w[0], lo).finish();
            model.add_constraint("size_1", first, RowSense::Eq, n as f64);
            for i in 1..p {
                let size = Expr::default()
                    .add_all(&y[i - 1], 1.0)
                    .add_all(&y[i], -1.0)
                    .add(v[i], -hi)
                    .add(w[i], -lo)
                    .finish();
                model.add_constraint(format!("size_{}", i + 1), size, RowSense::Eq, 0.0);
            }
            for i in 0..p {
                model.add_constraint(
                    format!("pick_{}", i + 1),
                    vec![(v[i], 1.0), (w[i], 1.0)],
                    RowSense::Eq,
                    1.0,
                );
            }
        }
    }

    model.set_meta(ModelMeta { kind: ModelKind::M1P, graph: g.name().into(), colors: p, big_m: None, vertices: n });
    Ok(model)
}

fn check_max_class(opts: &MaxClassOptions) -> Result<(), ModelError> {
    if opts.k < 1 {
        return Err(ModelError::NoColors);
    }
    if opts.big_m < 1 {
        return Err(ModelError::BigMTooSmall);
    }
    Ok(())
}

/// Partial-ordering model maximizing the size of color class 1 over equitable
/// colorings with at most `k` colors (empty classes allowed).
pub fn build_m1(g: &Graph, k: usize, big_m: usize) -> Result<MilpModel, ModelError> {
    build_m1_with(g, &MaxClassOptions::new(k, big_m))
}

pub fn build_m1_with(g: &Graph, opts: &MaxClassOptions) -> Result<MilpModel, ModelError> {
    check_max_class(opts)?;
    let (n, k) = (g.n(), opts.k);
    let big_m = opts.big_m as f64;
    let nf = n as f64;
    let mut model = MilpModel::new(ObjectiveSense::Maximize);
    let y = ordering_skeleton(&mut model, g, k);
    let v: Vec<usize> = (2..=k).map(|i| model.add_binary(names::v(i))).collect();

    // Class i (>= 2) size is sum y_{i-1} - sum y_i; u_1 = n - sum y_1.
    for i in 1..k {
        let no_bigger = Expr::default()
            .add_all(&y[i - 1], 1.0)
            .add_all(&y[i], -1.0)
            .add_all(&y[0], 1.0)
            .finish();
        model.add_constraint(format!("dom_{}", i + 1), no_bigger, RowSense::Le, nf);
    }
    for i in 1..k {
        let near_first = Expr::default()
            .add_all(&y[i - 1], 1.0)
            .add_all(&y[i], -1.0)
            .add_all(&y[0], 1.0)
            .add(v[i - 1], big_m)
            .finish();
        model.add_constraint(format!("low_{}", i + 1), near_first, RowSense::Ge, nf - 1.0);
    }
    for i in 1..k {
        let empty = Expr::default().add_all(&y[i - 1], 1.0).add_all(&y[i], -1.0).add(v[i - 1], big_m).finish();
        model.add_constraint(format!("empty_{}", i + 1), empty, RowSense::Le, big_m);
    }
    if opts.ordered_classes && k >= 2 {
        let first = Expr::default().add_all(&y[0], -2.0).add_all(&y[1], 1.0).finish();
        model.add_constraint("order_1", first, RowSense::Ge, -nf);
        for i in 1..k - 1 {
            let row = Expr::default()
                .add_all(&y[i - 1], 1.0)
                .add_all(&y[i], -2.0)
                .add_all(&y[i + 1], 1.0)
                .finish();
            model.add_constraint(format!("order_{}", i + 1), row, RowSense::Ge, 0.0);
        }
    }

    let objective = Expr::default().add_all(&y[0], -1.0).finish();
    model.set_objective(objective, nf);
    model.set_meta(ModelMeta {
        kind: ModelKind::M1,
        graph: g.name().into(),
        colors: k,
        big_m: Some(opts.big_m),
        vertices: n,
    });
    Ok(model)
}

/// `x[i][v]` ids for colors `1..=k` (stored at `i - 1`).
fn assignment_core(model: &mut MilpModel, g: &Graph, k: usize, w: &[usize]) -> Vec<Vec<usize>> {
    let n = g.n();
    let x: Vec<Vec<usize>> =
        (1..=k).map(|i| (0..n).map(|v| model.add_binary(names::x(v, i))).collect()).collect();
    for v in 0..n {
        let terms = (0..k).map(|i| (x[i][v], 1.0)).collect();
        model.add_constraint(format!("assign_{}", v + 1), terms, RowSense::Eq, 1.0);
    }
    for i in 0..k {
        for &(a, b) in g.edges() {
            model.add_constraint(
                format!("edge_{}_{}_{}", i + 1, a + 1, b + 1),
                vec![(x[i][a], 1.0), (x[i][b], 1.0), (w[i], -1.0)],
                RowSense::Le,
                0.0,
            );
        }
    }
    for i in 0..k - 1 {
        model.add_constraint(
            format!("used_{}", i + 1),
            vec![(w[i + 1], 1.0), (w[i], -1.0)],
            RowSense::Le,
            0.0,
        );
    }
    x
}

/// Assignment model maximizing the size of color class 1 over equitable
/// colorings with at most `k` colors (empty classes allowed).
pub fn build_m2(g: &Graph, k: usize, big_m: usize) -> Result<MilpModel, ModelError> {
    build_m2_with(g, &MaxClassOptions::new(k, big_m))
}

pub fn build_m2_with(g: &Graph, opts: &MaxClassOptions) -> Result<MilpModel, ModelError> {
    check_max_class(opts)?;
    let (n, k) = (g.n(), opts.k);
    let big_m = opts.big_m as f64;
    let mut model = MilpModel::new(ObjectiveSense::Maximize);
    let w: Vec<usize> = (1..=k).map(|i| model.add_binary(names::w(i))).collect();
    let v: Vec<usize> = (2..=k).map(|i| model.add_binary(names::v(i))).collect();
    let x = assignment_core(&mut model, g, k, &w);

    for i in 1..k {
        let row = Expr::default().add_all(&x[i], 1.0).add_all(&x[0], -1.0).finish();
        model.add_constraint(format!("dom_{}", i + 1), row, RowSense::Le, 0.0);
    }
    for i in 1..k {
        let row = Expr::default().add_all(&x[i], 1.0).add_all(&x[0], -1.0).add(v[i - 1], big_m).finish();
        model.add_constraint(format!("low_{}", i + 1), row, RowSense::Ge, -1.0);
    }
    for i in 1..k {
        let row = Expr::default().add_all(&x[i], 1.0).add(v[i - 1], big_m).finish();
        model.add_constraint(format!("empty_{}", i + 1), row, RowSense::Le, big_m);
    }
    if opts.ordered_classes {
        for i in 0..k - 1 {
            let row = Expr::default().add_all(&x[i], 1.0).add_all(&x[i + 1], -1.0).finish();
            model.add_constraint(format!("order_{}", i + 1), row, RowSense::Ge, 0.0);
        }
    }

    model.set_objective(x[0].iter().map(|&j| (j, 1.0)).collect(), 0.0);
    model.set_meta(ModelMeta {
        kind: ModelKind::M2,
        graph: g.name().into(),
        colors: k,
        big_m: Some(opts.big_m),
        vertices: n,
    });
    Ok(model)
}

/// Assignment model deciding whether `g` has an equitable coloring with
/// exactly `p` non-empty classes.
pub fn build_m2p(g: &Graph, p: usize) -> Result<MilpModel, ModelError> {
    check_colors(g, p)?;
    let n = g.n();
    let (lo, hi) = ((n / p) as f64, ceil_div(n, p) as f64);
    let mut model = MilpModel::new(ObjectiveSense::Minimize);
    let w: Vec<usize> = (1..=p).map(|i| model.add_binary(names::w(i))).collect();
    let x = assignment_core(&mut model, g, p, &w);
    for i in 0..p {
        let terms: Vec<_> = x[i].iter().map(|&j| (j, 1.0)).collect();
        model.add_constraint(format!("cap_{}", i + 1), terms.clone(), RowSense::Le, hi);
        model.add_constraint(format!("floor_{}", i + 1), terms, RowSense::Ge, lo);
    }
    model.set_meta(ModelMeta { kind: ModelKind::M2P, graph: g.name().into(), colors: p, big_m: None, vertices: n });
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn m2p_counts_match_closed_form() {
        let g = fixtures::cycle(6);
        for p in 1..=6 {
            let m = build_m2p(&g, p).unwrap();
            assert_eq!(m.variables().len(), 6 * p + p);
            assert_eq!(m.num_binaries(), 6 * p + p);
            assert_eq!(m.constraints().len(), 6 + 6 * p + (p - 1) + 2 * p);
        }
    }

    #[test]
    fn m1p_counts() {
        let g = fixtures::path(3);
        let m = build_m1p(&g, 2, CardinalityEncoding::BigMFree).unwrap();
        // 2 * 3 * 2 ordering variables
        assert_eq!(m.variables().len(), 12);
        assert_eq!(m.constraints().len(), 2 * 3 + 2 * 3 * 1 + 2 * 2 + 2 * 2);
        let m = build_m1p(&g, 2, CardinalityEncoding::Indicator).unwrap();
        assert_eq!(m.variables().len(), 12 + 4);
        assert_eq!(m.constraints().len(), 2 * 3 + 2 * 3 + 2 * 2 + 2 + 2);
    }

    #[test]
    fn variable_order_is_y_z_then_rest() {
        let g = fixtures::path(2);
        let m = build_m1p(&g, 2, CardinalityEncoding::Indicator).unwrap();
        let names: Vec<_> = m.variables().iter().map(|v| v.name.as_str()).collect();
        assert_eq!(
            names,
            ["y_1_1", "y_1_2", "y_2_1", "y_2_2", "z_1_1", "z_2_1", "z_1_2", "z_2_2", "w_1", "w_2", "v_1", "v_2"]
        );
        let m = build_m2(&g, 2, 1).unwrap();
        let names: Vec<_> = m.variables().iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["w_1", "w_2", "v_2", "x_1_1", "x_2_1", "x_1_2", "x_2_2"]);
    }

    #[test]
    fn repeated_sums_merge_coefficients() {
        let g = fixtures::edgeless(3);
        let m = build_m1(&g, 3, 1).unwrap();
        let dom2 = m.constraints().iter().find(|c| c.name == "dom_2").unwrap();
        let y11 = m.var_index("y_1_1").unwrap();
        assert!(dom2.terms.contains(&(y11, 2.0)));
        assert_eq!(dom2.terms.len(), 6);
    }

    #[test]
    fn range_errors() {
        let g = fixtures::complete(3);
        assert_eq!(build_m2p(&g, 0), Err(ModelError::ColorsOutOfRange { colors: 0, n: 3 }));
        assert_eq!(build_m2p(&g, 4), Err(ModelError::ColorsOutOfRange { colors: 4, n: 3 }));
        assert!(build_m1p(&g, 4, CardinalityEncoding::BigMFree).is_err());
        assert_eq!(build_m1(&g, 0, 1), Err(ModelError::NoColors));
        assert_eq!(build_m2(&g, 3, 0), Err(ModelError::BigMTooSmall));
    }

    #[test]
    fn builders_are_deterministic_and_valid() {
        let g = fixtures::random(7, 0.5, 3);
        let a = build_m1_with(&g, &MaxClassOptions { k: 4, big_m: 2, ordered_classes: true }).unwrap();
        let b = build_m1_with(&g, &MaxClassOptions { k: 4, big_m: 2, ordered_classes: true }).unwrap();
        assert_eq!(a, b);
        for m in [
            a,
            build_m2_with(&g, &MaxClassOptions { k: 4, big_m: 2, ordered_classes: true }).unwrap(),
            build_m1p(&g, 3, CardinalityEncoding::Indicator).unwrap(),
            build_m2p(&g, 3).unwrap(),
        ] {
            m.validate().unwrap();
            assert!(!m.constraints().is_empty());
        }
    }

    #[test]
    fn feasibility_models_have_constant_objective() {
        let g = fixtures::cycle(5);
        assert!(build_m2p(&g, 3).unwrap().is_feasibility());
        assert!(build_m1p(&g, 3, CardinalityEncoding::BigMFree).unwrap().is_feasibility());
        assert!(!build_m2(&g, 3, 2).unwrap().is_feasibility());
    }
}
