// Write the models for a 125-vertex instance as LP files for an external solver.
//
//     cargo run --release --example export_lp

use std::time::Instant;

use eqcol::graph::fixtures;
use eqcol::lp_format::{export_lp, read_lp};
use eqcol::model::{build_m1, build_m1p, build_m2, build_m2p, CardinalityEncoding};

fn main() {
    // Same size as R125.1 (125 vertices, 209 edges); the real file is not bundled.
    let g = fixtures::random_with_edges("r125_like", 125, 209, 1);
    let (lb, ub) = (3, 5);
    let big_m = g.n().div_ceil(lb);
    let dir = tempfile::tempdir().unwrap();

    let models = [
        ("m1", build_m1(&g, ub, big_m).unwrap()),
        ("m2", build_m2(&g, ub, big_m).unwrap()),
        ("m1p", build_m1p(&g, ub, CardinalityEncoding::BigMFree).unwrap()),
        ("m2p", build_m2p(&g, ub).unwrap()),
    ];
    for (label, model) in &models {
        let start = Instant::now();
        let path = dir.path().join(format!("{}.{label}.lp", g.name()));
        export_lp(model, &path).unwrap();
        let back = read_lp(&path).unwrap();
        assert_eq!(&back, model, "{label} changed on the way through the file");
        println!(
            "{label:<4} {:>5} vars {:>5} rows {:>7} bytes {:.2?}",
            model.variables().len(),
            model.constraints().len(),
            std::fs::metadata(&path).unwrap().len(),
            start.elapsed()
        );
    }
}
