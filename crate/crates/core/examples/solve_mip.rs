// Solve one model with the bundled branch and bound and read the outcome.
//
//     cargo run --example solve_mip

use std::time::Duration;

use eqcol::graph::fixtures;
use eqcol::model::{build_m2, decode_assignment, verify_coloring};
use eqcol::solver::{beta_from_outcome, lp_relax, LpRelaxation};
use eqcol::solve_bnb;

fn main() {
    let g = fixtures::complete_bipartite(3, 4);
    // Largest class of an equitable coloring with at most 4 colors.
    let model = build_m2(&g, 4, g.n()).unwrap();

    if let LpRelaxation::Optimal { objective, .. } = lp_relax(&model).unwrap() {
        println!("LP relaxation: {objective:.3}");
    }

    let out = solve_bnb(&model, Duration::from_secs(10), None).unwrap();
    println!(
        "status {:?}, primal {:?}, bound {:?}, mode {}, {} nodes in {:.1?}",
        out.status,
        out.primal,
        out.dual_bound,
        out.mode.map_or("-", |m| m.as_str()),
        out.nodes,
        out.elapsed
    );
    let beta = beta_from_outcome(&out).unwrap();
    assert_eq!(beta, 4);

    let coloring = decode_assignment(&model, out.assignment.as_deref().unwrap(), &g).unwrap();
    println!("class sizes {:?}", coloring.class_sizes);
    assert!(verify_coloring(&g, &coloring).is_certified());
}
