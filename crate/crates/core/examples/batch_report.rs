// Run both stages over a directory of instances and print the report three ways.
//
//     cargo run --example batch_report

use std::fs;

use eqcol::graph::fixtures;
use eqcol::report::{render_report, Format, RunRecord};
use eqcol::run::{run_batch, Job, RunConfig};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut instances = Vec::new();
    for g in [fixtures::cycle(6), fixtures::star(4), fixtures::random(8, 0.5, 3)] {
        let path = dir.path().join(format!("{}.col", g.name()));
        fs::write(&path, g.to_dimacs()).unwrap();
        instances.push(path);
    }
    // A broken file is reported, not fatal.
    let bad = dir.path().join("broken.col");
    fs::write(&bad, "p edge 2 1\ne 1 9\n").unwrap();
    instances.push(bad);

    let cfg = RunConfig { instances, budget_s: 10.0, workers: 2, ..RunConfig::default() };
    let records = run_batch(&cfg, Job::Bounds).unwrap();

    println!("{}", render_report(&records, Format::Table));
    println!("{}", render_report(&records, Format::Csv));
    let json = render_report(&records, Format::Json);
    println!("{} bytes of JSON", json.len());

    let failed = records.iter().filter(|r| matches!(r, RunRecord::Failed { .. })).count();
    assert_eq!(failed, 1);
}
