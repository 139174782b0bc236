//! Decoding solver assignments into colorings, and certifying colorings.

use serde::{Deserialize, Serialize};

use super::{names, MilpModel, ModelKind};
use crate::graph::Graph;
use crate::ModelError;

/// A vertex coloring with per-class accounting.
///
/// `colors[v]` is 1-based. `class_sizes[i - 1]` is the number of vertices with
/// color `i` and may contain zeros when the source model allows empty classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquitableColoring {
    pub colors: Vec<usize>,
    pub class_sizes: Vec<usize>,
}

impl EquitableColoring {
    /// Builds the coloring from 1-based colors, counting classes `1..=num_colors`.
    pub fn from_colors(colors: Vec<usize>, num_colors: usize) -> Self {
        let mut class_sizes = vec![0; num_colors];
        for &c in &colors {
            assert!(c >= 1 && c <= num_colors, "color {c} outside 1..={num_colors}");
            class_sizes[c - 1] += 1;
        }
        Self { colors, class_sizes }
    }

    /// Number of non-empty classes.
    pub fn p(&self) -> usize {
        self.class_sizes.iter().filter(|&&s| s > 0).count()
    }

    pub fn max_class(&self) -> usize {
        self.class_sizes.iter().copied().max().unwrap_or(0)
    }

    /// Drops empty classes and renumbers the remaining ones `1..=p`, keeping
    /// their relative order.
    pub fn compacted(&self) -> Self {
        let mut relabel = vec![0; self.class_sizes.len() + 1];
        let mut next = 0;
        for (i, &s) in self.class_sizes.iter().enumerate() {
            if s > 0 {
                next += 1;
                relabel[i + 1] = next;
            }
        }
        let colors = self.colors.iter().map(|&c| relabel[c]).collect();
        Self::from_colors(colors, next)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Both endpoints share `color`.
    Edge { u: usize, v: usize, color: usize },
    /// Non-empty classes differ by more than one.
    Equity { largest: usize, smallest: usize },
    ColorOutOfRange { vertex: usize, color: usize },
    /// `class_sizes` disagrees with the per-vertex colors.
    SizeMismatch { color: usize, recorded: usize, actual: usize },
    WrongVertexCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColoringVerdict {
    pub violations: Vec<Violation>,
}

impl ColoringVerdict {
    pub fn is_certified(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every improper edge and every equity failure of `c` on `g`.
pub fn verify_coloring(g: &Graph, c: &EquitableColoring) -> ColoringVerdict {
    let mut violations = Vec::new();
    if c.colors.len() != g.n() {
        violations.push(Violation::WrongVertexCount { expected: g.n(), got: c.colors.len() });
        return ColoringVerdict { violations };
    }
    let k = c.class_sizes.len();
    let mut actual = vec![0usize; k];
    for (v, &color) in c.colors.iter().enumerate() {
        if color == 0 || color > k {
            violations.push(Violation::ColorOutOfRange { vertex: v, color });
        } else {
            actual[color - 1] += 1;
        }
    }
    for (i, (&recorded, &count)) in c.class_sizes.iter().zip(&actual).enumerate() {
        if recorded != count {
            violations.push(Violation::SizeMismatch { color: i + 1, recorded, actual: count });
        }
    }
    for &(u, v) in g.edges() {
        if c.colors[u] == c.colors[v] {
            violations.push(Violation::Edge { u, v, color: c.colors[u] });
        }
    }
    let used = actual.iter().copied().filter(|&s| s > 0);
    if let (Some(largest), Some(smallest)) = (used.clone().max(), used.min()) {
        if largest - smallest > 1 {
            violations.push(Violation::Equity { largest, smallest });
        }
    }
    ColoringVerdict { violations }
}

/// Colors vertices from ordering vectors: `y[i - 1][v]` is 1 when vertex `v`
/// is above color `i`, and `v` takes the first color whose entry is 0.
pub fn decode_order_matrix(y: &[Vec<bool>]) -> Result<EquitableColoring, ModelError> {
    let k = y.len();
    let n = y.first().map_or(0, Vec::len);
    let mut colors = Vec::with_capacity(n);
    for v in 0..n {
        let first_zero = (0..k).find(|&i| !y[i][v]);
        let Some(first_zero) = first_zero else {
            return Err(ModelError::AmbiguousColor { vertex: v, count: 0 });
        };
        if (first_zero..k).any(|i| y[i][v]) {
            return Err(ModelError::NonMonotoneOrder { vertex: v });
        }
        colors.push(first_zero + 1);
    }
    Ok(EquitableColoring::from_colors(colors, k))
}

fn check_assignment(model: &MilpModel, values: &[f64], g: &Graph) -> Result<(), ModelError> {
    if values.len() != model.variables().len() {
        return Err(ModelError::AssignmentLength { expected: model.variables().len(), got: values.len() });
    }
    if model.meta().vertices != g.n() {
        return Err(ModelError::Invalid(format!(
            "model was built for {} vertices, graph has {}",
            model.meta().vertices,
            g.n()
        )));
    }
    Ok(())
}

/// Decodes an assignment of a partial-ordering model (M1 or M1P). Classes are
/// not compacted, so `class_sizes` lines up with the model's color indices.
pub fn decode_partial_order(model: &MilpModel, values: &[f64], g: &Graph) -> Result<EquitableColoring, ModelError> {
    let kind = model.meta().kind;
    if !matches!(kind, ModelKind::M1 | ModelKind::M1P) {
        return Err(ModelError::WrongModelKind { expected: "M1 or M1P", found: kind.to_string() });
    }
    check_assignment(model, values, g)?;
    let k = model.meta().colors;
    let mut y = Vec::with_capacity(k);
    for i in 1..=k {
        let row = (0..g.n())
            .map(|v| model.value_of(values, &names::y(i, v)).map(|x| x > 0.5))
            .collect::<Result<Vec<_>, _>>()?;
        y.push(row);
    }
    decode_order_matrix(&y)
}

/// Decodes an assignment of an assignment model (M2 or M2P). Models that
/// allow empty classes (M2) come back compacted to `1..=p`.
pub fn decode_assignment(model: &MilpModel, values: &[f64], g: &Graph) -> Result<EquitableColoring, ModelError> {
    let kind = model.meta().kind;
    if !matches!(kind, ModelKind::M2 | ModelKind::M2P) {
        return Err(ModelError::WrongModelKind { expected: "M2 or M2P", found: kind.to_string() });
    }
    check_assignment(model, values, g)?;
    let k = model.meta().colors;
    let mut colors = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let mut chosen = Vec::new();
        for i in 1..=k {
            if model.value_of(values, &names::x(v, i))? > 0.5 {
                chosen.push(i);
            }
        }
        if chosen.len() != 1 {
            return Err(ModelError::AmbiguousColor { vertex: v, count: chosen.len() });
        }
        colors.push(chosen[0]);
    }
    let coloring = EquitableColoring::from_colors(colors, k);
    Ok(if kind == ModelKind::M2 { coloring.compacted() } else { coloring })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::model::{build_m2, build_m2p};

    fn order_matrix(colors: &[usize], k: usize) -> Vec<Vec<bool>> {
        (1..=k).map(|i| colors.iter().map(|&c| i < c).collect()).collect()
    }

    #[test]
    fn all_zero_order_vectors_give_one_class() {
        let y = vec![vec![false; 4]; 3];
        let c = decode_order_matrix(&y).unwrap();
        assert_eq!(c.colors, vec![1; 4]);
        assert_eq!(c.class_sizes, vec![4, 0, 0]);
    }

    #[test]
    fn path_middle_above_first_color() {
        // y_{1,middle} = 1 only
        let y = vec![vec![false, true, false], vec![false, false, false]];
        let c = decode_order_matrix(&y).unwrap();
        assert_eq!(c.colors, vec![1, 2, 1]);
        assert_eq!(c.class_sizes, vec![2, 1]);
    }

    #[test]
    fn non_monotone_order_is_rejected() {
        let y = vec![vec![false, false], vec![true, false], vec![false, false]];
        assert_eq!(decode_order_matrix(&y), Err(ModelError::NonMonotoneOrder { vertex: 0 }));
        let y = vec![vec![true], vec![true]];
        assert!(matches!(decode_order_matrix(&y), Err(ModelError::AmbiguousColor { .. })));
    }

    #[test]
    fn order_round_trip() {
        let colors = [3, 1, 2, 2, 1];
        let c = decode_order_matrix(&order_matrix(&colors, 4)).unwrap();
        assert_eq!(c.colors, colors);
        assert_eq!(c.class_sizes, vec![2, 2, 1, 0]);
        assert_eq!(c.p(), 3);
    }

    #[test]
    fn assignment_identity_on_triangle() {
        let g = fixtures::complete(3);
        let m = build_m2p(&g, 3).unwrap();
        let mut values = vec![0.0; m.variables().len()];
        for v in 0..3 {
            values[m.var_index(&names::x(v, v + 1)).unwrap()] = 1.0;
        }
        let c = decode_assignment(&m, &values, &g).unwrap();
        assert_eq!(c.colors, vec![1, 2, 3]);
        assert!(verify_coloring(&g, &c).is_certified());

        values[m.var_index(&names::x(0, 2)).unwrap()] = 1.0;
        assert_eq!(decode_assignment(&m, &values, &g), Err(ModelError::AmbiguousColor { vertex: 0, count: 2 }));
    }

    #[test]
    fn m2_decoding_compacts_empty_classes() {
        let g = fixtures::cycle(4);
        let m = build_m2(&g, 4, 2).unwrap();
        let mut values = vec![0.0; m.variables().len()];
        for (v, color) in [(0, 1), (1, 4), (2, 1), (3, 4)] {
            values[m.var_index(&names::x(v, color)).unwrap()] = 1.0;
        }
        let c = decode_assignment(&m, &values, &g).unwrap();
        assert_eq!(c.colors, vec![1, 2, 1, 2]);
        assert_eq!(c.class_sizes, vec![2, 2]);
    }

    #[test]
    fn verdicts() {
        let c6 = fixtures::cycle(6);
        let ok = EquitableColoring::from_colors(vec![1, 2, 1, 2, 1, 2], 2);
        assert!(verify_coloring(&c6, &ok).is_certified());

        let k3 = fixtures::complete(3);
        let bad = EquitableColoring::from_colors(vec![1, 2, 1], 2);
        let verdict = verify_coloring(&k3, &bad);
        assert_eq!(verdict.violations, vec![Violation::Edge { u: 0, v: 2, color: 1 }]);

        let e4 = fixtures::edgeless(4);
        let lopsided = EquitableColoring::from_colors(vec![1, 1, 1, 2], 2);
        assert_eq!(
            verify_coloring(&e4, &lopsided).violations,
            vec![Violation::Equity { largest: 3, smallest: 1 }]
        );
    }

    #[test]
    fn wrong_model_kind() {
        let g = fixtures::path(3);
        let m = build_m2p(&g, 2).unwrap();
        let values = vec![0.0; m.variables().len()];
        assert!(matches!(decode_partial_order(&m, &values, &g), Err(ModelError::WrongModelKind { .. })));
    }
}
