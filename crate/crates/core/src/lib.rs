pub mod analysis;
pub mod circuit;
pub mod decode;
pub mod dem;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod noise;
pub mod schedule;
pub mod sim;

pub use error::{Error, Result};
