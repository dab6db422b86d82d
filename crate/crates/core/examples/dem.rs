//! Enumerate every fault of a noisy circuit, group them by detector
//! signature and print the detector error model.
//!
//! `cargo run --release --example dem -- 3`

use colorcode::circuit::{build_memory_circuit, Variant};
use colorcode::dem::{compile_dem, enumerate_faults};
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::default_schedule;

fn main() -> colorcode::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("distance"));
    let clean = build_memory_circuit(&build_patch(d)?, &default_schedule(), d, Variant::XZ)?;
    let noisy = annotate(&clean, &NoiseModel::uniform(0.001)?)?;
    let faults = enumerate_faults(&noisy);
    let dem = compile_dem(&noisy);
    let flips = dem.classes.iter().filter(|c| c.observable).count();
    let heaviest = dem.classes.iter().map(|c| c.detectors.len()).max().unwrap_or(0);
    println!(
        "d={d}: {} faults -> {} classes over {} detectors; {flips} flip the observable; heaviest touches {heaviest}",
        faults.len(),
        dem.num_classes(),
        dem.num_detectors
    );
    for line in dem.to_text().lines().take(10) {
        println!("  {line}");
    }
    Ok(())
}
