// Stage 2: walk p upwards from the lower bound until an equitable p-coloring exists.
//
//     cargo run --example stage2

use std::time::Duration;

use eqcol::bounds::{default_bounds, stage2, Stage2Backend};
use eqcol::graph::fixtures;

fn main() {
    let budget = Duration::from_secs(10);
    for g in [fixtures::star(5), fixtures::cycle(7), fixtures::complete(5)] {
        let start = default_bounds(&g).unwrap();
        let r = stage2(&g, start, budget, Stage2Backend::M2P).unwrap();
        println!(
            "{:<6} lb trace {:?} -> chi_eq = {:?} ({} steps, {:.3}s)",
            g.name(),
            r.lb_trace,
            r.chi_eq_proved,
            r.iteration_times.len(),
            r.time_s
        );
    }

    // The star K_{1,5} needs four colors: the center sits alone and the
    // leaves must split into classes of at most two.
    let star = fixtures::star(5);
    let r = stage2(&star, default_bounds(&star).unwrap(), budget, Stage2Backend::M2).unwrap();
    assert_eq!(r.chi_eq_proved, Some(4));
}
