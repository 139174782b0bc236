// Read a DIMACS edge list and look at the starting color bounds.
//
//     cargo run --example parse_graph

use eqcol::bounds::default_bounds;
use eqcol::parse_dimacs;

const PETERSEN: &str = "\
c Petersen graph
p edge 10 15
e 1 2
e 2 3
e 3 4
e 4 5
e 5 1
e 1 6
e 2 7
e 3 8
e 4 9
e 5 10
e 6 8
e 8 10
e 10 7
e 7 9
e 9 6
";

fn main() {
    let parsed = parse_dimacs(PETERSEN).expect("valid DIMACS");
    let g = parsed.graph.with_name("petersen");
    for w in &parsed.warnings {
        println!("warning: {w}");
    }
    println!("{}: n={} m={} max degree={}", g.name(), g.n(), g.m(), g.max_degree());
    println!("bipartite: {}", g.is_bipartite());

    let b = default_bounds(&g).unwrap();
    println!("start with lb={} ub={}", b.lb, b.ub);
    assert_eq!((b.lb, b.ub), (3, 4));

    // Writing it back gives a file any DIMACS reader accepts.
    let again = parse_dimacs(&g.to_dimacs()).unwrap().graph;
    assert_eq!(again.edges(), g.edges());
}
