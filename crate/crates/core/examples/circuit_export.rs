//! Compile a patch and schedule into a memory circuit, export it in the
//! line-oriented interchange format and parse it back.
//!
//! `cargo run --release --example circuit_export -- 3 xyz`

use colorcode::circuit::{build_memory_circuit, Circuit, Instruction, Variant};
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::default_schedule;

fn main() -> colorcode::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(3, |s| s.parse().expect("distance"));
    let variant: Variant = args.next().map_or(Ok(Variant::XZ), |s| s.parse())?;

    let clean = build_memory_circuit(&build_patch(d)?, &default_schedule(), d, variant)?;
    let noisy = annotate(&clean, &NoiseModel::noisy_cnot(0.001)?)?;
    let text = noisy.to_text();
    let back = Circuit::from_text(&text)?;
    assert_eq!(back, noisy);

    let ticks = noisy.instructions.iter().filter(|i| matches!(i, Instruction::Tick)).count();
    println!(
        "d={d} {variant}: {} qubits, {} measurements, {} detectors, {ticks} ticks, {} text lines (round trip ok)",
        noisy.num_qubits,
        noisy.num_measurements(),
        noisy.num_detectors(),
        text.lines().count()
    );
    for line in text.lines().filter(|l| !l.starts_with("QUBIT_COORDS")).take(12) {
        println!("  {line}");
    }
    Ok(())
}
