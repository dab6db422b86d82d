//! Hook-error analysis and distance certification.
//!
//! * [`hooks`]: hook propagation and the hook-augmented phenomenological
//!   distance (syndrome-space BFS).
//! * [`distance`]: exact circuit-level distance of a detector error model by
//!   meet-in-the-middle.
//! * [`fractional`]: classification of minimal circuit-level witnesses into
//!   hook and data faults.

pub mod distance;
pub mod fractional;
pub mod hooks;

/// Minimum-weight result with one witness achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceResult<W> {
    pub value: usize,
    pub witness: Vec<W>,
}
