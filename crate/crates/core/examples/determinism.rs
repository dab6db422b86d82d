//! Check with the stabilizer tableau that every detector of the noiseless
//! circuit is deterministic, then confirm with the frame sampler.
//!
//! `cargo run --release --example determinism`

use colorcode::circuit::{build_memory_circuit, Variant};
use colorcode::lattice::build_patch;
use colorcode::schedule::default_schedule;
use colorcode::sim::sample;
use colorcode::sim::tableau::detectors_deterministic;

fn main() -> colorcode::Result<()> {
    for variant in [Variant::XZ, Variant::XYZ] {
        for d in [3, 5] {
            for rounds in [1, d] {
                let c = build_memory_circuit(&build_patch(d)?, &default_schedule(), rounds, variant)?;
                let tableau = detectors_deterministic(&c, 16, 1)?;
                let silent = sample(&c, 10_000, 2).iter().all(|r| r.is_trivial());
                println!("{variant} d={d} rounds={rounds}: tableau deterministic {tableau}, 10^4 frame shots silent {silent}");
            }
        }
    }
    Ok(())
}
