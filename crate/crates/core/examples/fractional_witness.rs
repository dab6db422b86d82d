//! Classify a minimum-weight circuit-level logical into hook and data faults,
//! then check that no single hook plus data errors beats it cheaply.
//!
//! `cargo run --release --example fractional_witness -- 5`

use std::time::Instant;

use colorcode::analysis::fractional::{find_fractional_hook_witness, single_hook_shortcuts};
use colorcode::lattice::build_patch;
use colorcode::schedule::default_schedule;

fn main() -> colorcode::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("distance"));
    let patch = build_patch(d)?;
    let schedule = default_schedule();

    let t = Instant::now();
    let w = find_fractional_hook_witness(&patch, &schedule)?;
    println!(
        "d={d}: weight {} ({} hooks on faces {:?}, {} data, {} other) in {:.1?}",
        w.weight(),
        w.hooks(),
        w.hook_faces(),
        w.data(),
        w.weight() - w.hooks() - w.data(),
        t.elapsed()
    );

    for max in [3, 4] {
        let t = Instant::now();
        let found = single_hook_shortcuts(&patch, &schedule, max)?;
        let corners = found.iter().filter(|s| s.corner).count();
        println!(
            "single hook + data, weight <= {max}: {} ({corners} at corners) in {:.1?}",
            found.len(),
            t.elapsed()
        );
        for s in found.iter().take(5) {
            println!("  face {} corner={} classes {:?}", s.face, s.corner, s.witness);
        }
    }
    Ok(())
}
