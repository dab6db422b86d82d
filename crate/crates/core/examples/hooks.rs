//! Hook errors of a schedule: per-face table, single-hook malignancy and the
//! hook-augmented distance, for the color-dependent default and a uniform
//! schedule.
//!
//! `cargo run --release --example hooks -- 7`

use colorcode::analysis::hooks::{hook_augmented_distance, malign_hooks, propagate_hooks, HookPauli};
use colorcode::lattice::build_patch;
use colorcode::schedule::{bulk_hooks, default_schedule, Schedule};

fn main() -> colorcode::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(7, |s| s.parse().expect("distance"));
    let patch = build_patch(d)?;
    for (name, s) in [("default", default_schedule()), ("uniform 012345", Schedule::uniform([0, 1, 2, 3, 4, 5])?)] {
        let hooks: Vec<_> = propagate_hooks(&patch, &s).into_iter().filter(|h| h.pauli == HookPauli::X).collect();
        let malign = malign_hooks(&patch, &hooks)?;
        let all = hook_augmented_distance(&patch, &hooks)?.value;
        let bulk = hook_augmented_distance(&patch, &bulk_hooks(&patch, &s))?.value;
        println!("{name}: {} X hooks, {} individually malign; distance {all} with all, {bulk} with bulk weight-2", hooks.len(), malign.len());
        for &i in malign.iter().take(4) {
            let h = &hooks[i];
            let f = patch.face(h.face);
            println!("  malign: face {} ({} {:?}) offset {} -> {:?}", f.id, f.color.name(), f.kind, h.offset, h.induced_error);
        }
    }
    Ok(())
}
