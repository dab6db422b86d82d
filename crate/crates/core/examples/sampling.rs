//! Sample detector records with the bit-packed frame sampler, write them as
//! a packed binary dump and read them back.
//!
//! `cargo run --release --example sampling -- 5 100000`

use std::time::Instant;

use colorcode::circuit::{build_memory_circuit, Variant};
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::default_schedule;
use colorcode::sim::{bytes_per_shot, read_shots, sample, write_shots};

fn main() -> colorcode::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(5, |s| s.parse().expect("distance"));
    let shots: usize = args.next().map_or(100_000, |s| s.parse().expect("shots"));

    let clean = build_memory_circuit(&build_patch(d)?, &default_schedule(), d, Variant::XZ)?;
    let circuit = annotate(&clean, &NoiseModel::si1000(0.001)?)?;
    let t = Instant::now();
    let records = sample(&circuit, shots, 42);
    let dt = t.elapsed();

    let nd = circuit.num_detectors();
    let mean = records.iter().map(|r| r.fired().len()).sum::<usize>() as f64 / shots as f64;
    let flips = records.iter().filter(|r| r.observable).count();
    println!("d={d}: {shots} shots in {dt:.1?}; {mean:.2} detectors fire per shot; raw observable flips {flips}");

    let mut dump = Vec::new();
    write_shots(&mut dump, &records)?;
    assert_eq!(dump.len(), shots * bytes_per_shot(nd));
    assert_eq!(read_shots(&mut dump.as_slice(), nd)?, records);
    println!("dump: {} bytes ({} per shot), round trip ok", dump.len(), bytes_per_shot(nd));
    Ok(())
}
