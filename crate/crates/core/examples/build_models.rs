// Build the four formulations on a 5-cycle and compare their sizes.
//
//     cargo run --example build_models

use eqcol::graph::fixtures;
use eqcol::model::{build_m1, build_m1p, build_m2, build_m2p, CardinalityEncoding};
use eqcol::MilpModel;

fn describe(label: &str, m: &MilpModel) {
    println!(
        "{label:<14} {:>4} vars {:>4} binary {:>4} rows",
        m.variables().len(),
        m.num_binaries(),
        m.constraints().len()
    );
}

fn main() {
    let g = fixtures::cycle(5);
    let (n, k, p) = (g.n(), 3, 3);
    let big_m = n.div_ceil(p);

    let m2p = build_m2p(&g, p).unwrap();
    describe("M2P", &m2p);
    describe("M1P big-M-free", &build_m1p(&g, p, CardinalityEncoding::BigMFree).unwrap());
    describe("M1P indicator", &build_m1p(&g, p, CardinalityEncoding::Indicator).unwrap());
    describe("M1", &build_m1(&g, k, big_m).unwrap());
    describe("M2", &build_m2(&g, k, big_m).unwrap());

    // n·p assignment variables plus one w per class.
    assert_eq!(m2p.num_binaries(), n * p + p);
    // One row per vertex, one per edge and color, p - 1 symmetry rows, two per class size.
    assert_eq!(m2p.constraints().len(), n + g.m() * p + (p - 1) + 2 * p);
}
