// Compare the integer programs against exhaustive search on a small graph.
//
//     cargo run --example oracle_check

use std::time::Duration;

use eqcol::graph::fixtures;
use eqcol::model::build_m2p;
use eqcol::oracle::oracle_chi_eq;
use eqcol::solver::SolveStatus;
use eqcol::solve_bnb;

fn main() {
    let g = fixtures::random(8, 0.5, 42);
    let truth = oracle_chi_eq(&g).unwrap();
    println!("{}: chi_eq = {}", g.name(), truth.chi_eq);

    for p in 1..=g.n() {
        let out = solve_bnb(&build_m2p(&g, p).unwrap(), Duration::from_secs(10), None).unwrap();
        let solver = out.status == SolveStatus::Optimal;
        let exact = truth.per_p_feasible[p - 1];
        println!("p={p}: solver {solver:<5} oracle {exact}");
        assert_eq!(solver, exact);
    }
}
