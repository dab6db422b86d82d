//! Sample a noisy memory circuit and decode every shot with the
//! most-likely-error-set decoder.
//!
//! `cargo run --release --example decode_shots -- 5 2000`

use std::time::Instant;

use colorcode::circuit::{build_memory_circuit, Variant};
use colorcode::decode::{Decoder, DEFAULT_BEAM};
use colorcode::dem::compile_dem;
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::default_schedule;
use colorcode::sim::sample;

fn main() -> colorcode::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(5, |s| s.parse().expect("distance"));
    let shots: usize = args.next().map_or(2000, |s| s.parse().expect("shots"));

    let patch = build_patch(d)?;
    let clean = build_memory_circuit(&patch, &default_schedule(), d, Variant::XZ)?;
    let circuit = annotate(&clean, &NoiseModel::noisy_cnot(0.001)?)?;
    let dem = compile_dem(&circuit);
    let decoder = Decoder::new(&dem);

    let records = sample(&circuit, shots, 7);
    let t = Instant::now();
    let (mut failures, mut inexact) = (0, 0);
    for r in &records {
        let res = decoder.decode_fired(&r.fired(), DEFAULT_BEAM)?;
        failures += (res.predicted_flip != r.observable) as usize;
        inexact += !res.exact as usize;
    }
    let dt = t.elapsed();
    println!(
        "d={d}: {failures} failures, {inexact} beam-truncated, in {shots} shots; {:.1} us/shot",
        dt.as_secs_f64() * 1e6 / shots as f64
    );
    Ok(())
}
