//! Certified lower bounds for the equitable chromatic number.
//!
//! The method runs in two stages. Stage 1 bounds the largest class of any
//! equitable coloring with an integer program (`M1` partial-ordering or `M2`
//! assignment formulation); a bound `beta` on that class size gives
//! `chi_eq >= ceil(n / beta)`. Stage 2 then proves, one `p` at a time, that no
//! equitable `p`-coloring exists (`M2P` or `M1P`), until a feasible `p`
//! certifies the equitable chromatic number or the time budget runs out.
//!
//! ```
//! use eqcol::{bounds, graph::fixtures};
//! use std::time::Duration;
//!
//! let g = fixtures::star(5);
//! let start = bounds::default_bounds(&g).unwrap();
//! let report = bounds::stage2(&g, start, Duration::from_secs(10), bounds::Stage2Backend::M2P).unwrap();
//! assert_eq!(report.chi_eq_proved, Some(4));
//! ```

pub mod bounds;
mod error;
pub mod graph;
pub mod lp_format;
pub mod model;
pub mod oracle;
pub mod report;
pub mod run;
pub mod solver;

pub use error::{EngineError, ModelError, OracleError, ParseError, SolverError};
pub use graph::{parse_dimacs, Graph};
pub use model::{EquitableColoring, MilpModel};
pub use solver::{solve_bnb, SolveOutcome};
