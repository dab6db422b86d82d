//! Exact circuit-level distance of the memory circuit (d rounds, every
//! location noisy) for the default schedule and the worst uniform one.
//!
//! `cargo run --release --example circuit_distance -- 5`

use std::time::Instant;

use colorcode::analysis::distance::circuit_distance;
use colorcode::analysis::fractional::distance_model;
use colorcode::harness::worst_uniform_schedule;
use colorcode::lattice::build_patch;
use colorcode::schedule::default_schedule;

fn main() -> colorcode::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("distance"));
    let patch = build_patch(d)?;
    for (name, s) in [("default", default_schedule()), ("worst uniform", worst_uniform_schedule(&patch)?)] {
        let t = Instant::now();
        let (_, dem) = distance_model(&patch, &s)?;
        let r = circuit_distance(&dem, d.min(6))?;
        let shown = r.map_or(format!("> {}", d.min(6)), |r| format!("{} via classes {:?}", r.value, r.witness));
        println!("{name} ({s}): {} classes, distance {shown} in {:.1?}", dem.num_classes(), t.elapsed());
    }
    Ok(())
}
