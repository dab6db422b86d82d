//! Search for CNOT schedules that are conflict-free, keep every bulk hook
//! benign and put trapezoid hooks on diagonals.
//!
//! `cargo run --release --example schedule_search -- 7 3`

use std::time::Instant;

use colorcode::lattice::build_patch;
use colorcode::schedule::{check_schedule, search_schedules, Constraints};

fn main() -> colorcode::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(7, |s| s.parse().expect("distance"));
    let limit: usize = args.next().map_or(1, |s| s.parse().expect("limit"));

    let patch = build_patch(d)?;
    let t = Instant::now();
    let found = search_schedules(&patch, Constraints::ALL, Some(limit))?;
    println!("d={d}: {} schedule(s) in {:.1?}", found.len(), t.elapsed());
    for s in &found {
        let report = check_schedule(&patch, s, Constraints::ALL)?;
        println!("{s}  ok={}", report.ok());
    }
    Ok(())
}
