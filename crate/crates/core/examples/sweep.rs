//! Run a TOML sweep and print the CSV, as `colorcode sweep` does.
//!
//! `cargo run --release --example sweep -- crates/core/examples/configs/noisy_cnot.toml`

use colorcode::harness::{compare_sweep, init_workers, SweepConfig};

fn main() -> colorcode::Result<()> {
    init_workers()?;
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/quick.toml").into());
    let cfg = SweepConfig::from_toml(&std::fs::read_to_string(path)?)?;
    print!("{}", compare_sweep(&cfg.experiment)?);
    Ok(())
}
