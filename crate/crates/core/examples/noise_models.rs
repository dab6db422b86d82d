//! The three circuit-level noise models applied to one circuit: how many
//! channels of each kind they insert and how many fault classes result.
//!
//! `cargo run --release --example noise_models`

use std::collections::BTreeMap;

use colorcode::circuit::{build_memory_circuit, Instruction, Variant};
use colorcode::dem::compile_dem;
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::default_schedule;

fn main() -> colorcode::Result<()> {
    let clean = build_memory_circuit(&build_patch(3)?, &default_schedule(), 3, Variant::XZ)?;
    for spec in ["si1000:0.001", "uniform:0.001", "cnot:0.001"] {
        let model: NoiseModel = spec.parse()?;
        let noisy = annotate(&clean, &model)?;
        let mut channels: BTreeMap<String, usize> = BTreeMap::new();
        for ins in &noisy.instructions {
            if let Instruction::Noise { channel, .. } = ins {
                let name = format!("{channel:?}");
                *channels.entry(name).or_default() += 1;
            }
        }
        println!("{spec}: {} fault classes", compile_dem(&noisy).num_classes());
        for (c, n) in channels {
            println!("  {n:>4} x {c}");
        }
    }
    Ok(())
}
