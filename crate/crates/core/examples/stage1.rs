// Stage 1: bound the largest equitable class and turn it into a lower bound.
//
//     cargo run --example stage1

use std::time::Duration;

use eqcol::bounds::{default_bounds, stage1, stage1_race, Stage1Model};
use eqcol::graph::fixtures;

fn main() {
    let g = fixtures::random(12, 0.6, 11);
    let start = default_bounds(&g).unwrap();
    let budget = Duration::from_secs(5);

    for model in [Stage1Model::M1, Stage1Model::M2] {
        let r = stage1(&g, start, model, budget).unwrap();
        println!(
            "{:?}: beta0={:?} mode={} lb {} -> {} in {:.2}s",
            model,
            r.beta0,
            r.mode_marker.map_or("-", |m| m.as_str()),
            r.lb_in,
            r.lb_star,
            r.time_s
        );
    }

    // Both models at once; the smaller beta0 wins.
    let best = stage1_race(&g, start, budget).unwrap();
    println!("race kept {:?} with lb*={}", best.model_used, best.lb_star);
    assert!(best.lb_star >= start.lb);
}
