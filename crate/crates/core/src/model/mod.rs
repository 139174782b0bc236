//! Solver-independent mixed binary linear programs and the equitable coloring
//! formulations built on top of them.

mod builders;
mod coloring;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use builders::{
    build_m1, build_m1_with, build_m1p, build_m2, build_m2_with, build_m2p,
    CardinalityEncoding, MaxClassOptions,
};
pub use coloring::{
    decode_assignment, decode_order_matrix, decode_partial_order, verify_coloring,
    ColoringVerdict, EquitableColoring, Violation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

impl RowSense {
    pub fn symbol(self) -> &'static str {
        match self {
            RowSense::Le => "<=",
            RowSense::Eq => "=",
            RowSense::Ge => ">=",
        }
    }
}

/// One linear row `sum(coef * var) <sense> rhs`, with variables referenced by index.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: ObjectiveSense,
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

/// Which formulation produced a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Partial-ordering model, maximum class cardinality.
    M1,
    /// Partial-ordering model, equitable p-coloring feasibility.
    M1P,
    /// Assignment model, maximum class cardinality.
    M2,
    /// Assignment model, equitable p-coloring feasibility.
    M2P,
    Custom,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::M1 => "M1",
            ModelKind::M1P => "M1P",
            ModelKind::M2 => "M2",
            ModelKind::M2P => "M2P",
            ModelKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "M1" => Ok(ModelKind::M1),
            "M1P" => Ok(ModelKind::M1P),
            "M2" => Ok(ModelKind::M2),
            "M2P" => Ok(ModelKind::M2P),
            "CUSTOM" => Ok(ModelKind::Custom),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub kind: ModelKind,
    pub graph: String,
    /// `k` for the maximum-cardinality models, `p` for the feasibility models.
    pub colors: usize,
    pub big_m: Option<usize>,
    /// Number of vertices of the source graph.
    pub vertices: usize,
}

impl Default for ModelMeta {
    fn default() -> Self {
        Self { kind: ModelKind::Custom, graph: String::new(), colors: 0, big_m: None, vertices: 0 }
    }
}

/// A mixed binary linear program.
#[derive(Debug, Clone)]
pub struct MilpModel {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
    meta: ModelMeta,
    index: HashMap<String, usize>,
}

impl PartialEq for MilpModel {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables
            && self.constraints == other.constraints
            && self.objective == other.objective
            && self.meta == other.meta
    }
}

impl MilpModel {
    pub fn new(sense: ObjectiveSense) -> Self {
        Self {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Objective { sense, terms: Vec::new(), constant: 0.0 },
            meta: ModelMeta::default(),
            index: HashMap::new(),
        }
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> usize {
        self.add_variable(name, VarKind::Binary, 0.0, 1.0)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> usize {
        self.add_variable(name, VarKind::Continuous, lower, upper)
    }

    /// Panics on a duplicate name; builders generate unique names.
    pub fn add_variable(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64) -> usize {
        let name = name.into();
        let id = self.variables.len();
        let previous = self.index.insert(name.clone(), id);
        assert!(previous.is_none(), "duplicate variable `{name}`");
        self.variables.push(Variable { name, kind, lower, upper });
        id
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        sense: RowSense,
        rhs: f64,
    ) {
        self.constraints.push(Constraint { name: name.into(), terms, sense, rhs });
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, f64)>, constant: f64) {
        self.objective.terms = terms;
        self.objective.constant = constant;
    }

    pub fn set_sense(&mut self, sense: ObjectiveSense) {
        self.objective.sense = sense;
    }

    pub fn set_meta(&mut self, meta: ModelMeta) {
        self.meta = meta;
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn num_binaries(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Value of a variable by name in an assignment vector.
    pub fn value_of(&self, values: &[f64], name: &str) -> Result<f64, crate::ModelError> {
        let id = self
            .var_index(name)
            .ok_or_else(|| crate::ModelError::MissingVariable(name.to_string()))?;
        Ok(values[id])
    }

    /// True when the objective has no terms, i.e. the model only asks for feasibility.
    pub fn is_feasibility(&self) -> bool {
        self.objective.terms.iter().all(|&(_, c)| c == 0.0)
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.constant + self.objective.terms.iter().map(|&(j, c)| c * values[j]).sum::<f64>()
    }

    /// Largest violation of any row or bound by `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, &x) in self.variables.iter().zip(values) {
            worst = worst.max(v.lower - x).max(x - v.upper);
        }
        for row in &self.constraints {
            let lhs: f64 = row.terms.iter().map(|&(j, c)| c * values[j]).sum();
            let gap = match row.sense {
                RowSense::Le => lhs - row.rhs,
                RowSense::Ge => row.rhs - lhs,
                RowSense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }

    /// Checks the structural invariants: every term references a declared
    /// variable, binaries are bounded by [0, 1], names are unique.
    pub fn validate(&self) -> Result<(), crate::ModelError> {
        use crate::ModelError::Invalid;
        let n = self.variables.len();
        for v in &self.variables {
            if v.kind == VarKind::Binary && (v.lower != 0.0 || v.upper != 1.0) {
                return Err(Invalid(format!("binary `{}` has bounds [{}, {}]", v.name, v.lower, v.upper)));
            }
            if v.lower > v.upper {
                return Err(Invalid(format!("variable `{}` has empty domain", v.name)));
            }
        }
        if self.index.len() != n {
            return Err(Invalid("duplicate variable names".into()));
        }
        let check = |terms: &[(usize, f64)], what: &str| -> Result<(), crate::ModelError> {
            match terms.iter().find(|(j, c)| *j >= n || !c.is_finite()) {
                Some((j, _)) => Err(Invalid(format!("{what} references unknown variable {j}"))),
                None => Ok(()),
            }
        };
        for row in &self.constraints {
            check(&row.terms, &format!("constraint `{}`", row.name))?;
        }
        check(&self.objective.terms, "objective")?;
        Ok(())
    }
}

/// Canonical variable names shared by builders, decoders and the LP writer.
/// Colors and vertices are 1-based in names, matching DIMACS ids.
pub(crate) mod names {
    pub fn y(color: usize, vertex: usize) -> String {
        format!("y_{}_{}", color, vertex + 1)
    }
    pub fn z(vertex: usize, color: usize) -> String {
        format!("z_{}_{}", vertex + 1, color)
    }
    pub fn x(vertex: usize, color: usize) -> String {
        format!("x_{}_{}", vertex + 1, color)
    }
    pub fn w(color: usize) -> String {
        format!("w_{color}")
    }
    pub fn v(color: usize) -> String {
        format!("v_{color}")
    }
}
