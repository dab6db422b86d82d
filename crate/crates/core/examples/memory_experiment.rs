//! One Monte Carlo memory experiment: sample, decode, and report the
//! per-shot and per-round logical error rates with likelihood intervals.
//!
//! `cargo run --release --example memory_experiment -- 3 100000`

use colorcode::harness::{init_workers, run_experiment, ExperimentSpec};
use colorcode::noise::NoiseModel;

fn main() -> colorcode::Result<()> {
    init_workers()?;
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(3, |s| s.parse().expect("distance"));
    let shots: usize = args.next().map_or(100_000, |s| s.parse().expect("shots"));
    let spec = ExperimentSpec::new(d, NoiseModel::noisy_cnot(0.001)?, shots, 1);
    let r = run_experiment(&spec)?;
    let (lo, hi) = r.likelihood_interval;
    println!(
        "d={d}, {} rounds, n_tot={}: {} / {} failures; p_shot {:.3e} in [{lo:.2e}, {hi:.2e}]; p_round {:.3e}",
        spec.rounds(),
        r.total_qubits,
        r.logical_failures,
        r.shots,
        r.p_shot,
        r.p_round
    );
    Ok(())
}
