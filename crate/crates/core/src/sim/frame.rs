//! 64-lane bit-packed Pauli-frame sampler.
//!
//! When sampling, the frame component a reset or measurement leaves
//! irrelevant (Z after a Z reset or Z measurement, X for the X basis) is
//! randomized. That does not change any deterministic outcome, but makes
//! every non-deterministic one a fair coin, so a detector built on a random
//! outcome fires even without noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ShotRecord;
use crate::circuit::{Basis, Channel, Circuit, GateKind, Instruction};
use crate::dem::{Fault, P1};

#[derive(Debug, Clone)]
enum Op {
    Reset(Basis, Vec<usize>),
    Measure(Basis, Vec<usize>),
    Gate(GateKind, Vec<(usize, usize)>),
    Noise {
        instruction: usize,
        channel: Channel,
        log_keep: f64,
        qubits: Vec<usize>,
    },
}

/// Shots `64 * batch ..` of a sampling run, lane `k` being shot
/// `64 * batch + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub lanes: usize,
    /// One word per detector, bit `k` = lane `k`.
    pub detectors: Vec<u64>,
    pub observable: u64,
}

impl Batch {
    /// Unpack lane `k`.
    pub fn shot(&self, k: usize) -> ShotRecord {
        let mut r = ShotRecord::zero(self.detectors.len());
        for (d, w) in self.detectors.iter().enumerate() {
            if w >> k & 1 == 1 {
                r.set_detector(d);
            }
        }
        r.observable = self.observable >> k & 1 == 1;
        r
    }
}

/// A circuit compiled for repeated frame simulation.
#[derive(Debug, Clone)]
pub struct FrameSampler {
    ops: Vec<Op>,
    num_qubits: usize,
    num_measurements: usize,
    detectors: Vec<Vec<usize>>,
    observable: Vec<usize>,
}

/// Visit the indices in `0..n` of independent Bernoulli(p) successes by
/// drawing geometric gaps.
fn bernoulli_hits(rng: &mut ChaCha8Rng, p: f64, log_keep: f64, n: usize, mut hit: impl FnMut(usize)) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..n).for_each(hit);
        return;
    }
    let mut i = 0usize;
    loop {
        let u: f64 = rng.random();
        let gap = ((1.0 - u).ln() / log_keep).floor();
        if gap >= (n - i) as f64 {
            return;
        }
        i += gap as usize;
        hit(i);
        i += 1;
        if i >= n {
            return;
        }
    }
}

struct Frame {
    x: Vec<u64>,
    z: Vec<u64>,
    flips: Vec<u64>,
}

impl Frame {
    fn apply(&mut self, q: usize, p: P1, mask: u64) {
        if p.has_x() {
            self.x[q] ^= mask;
        }
        if p.has_z() {
            self.z[q] ^= mask;
        }
    }
}

impl FrameSampler {
    pub fn new(circuit: &Circuit) -> FrameSampler {
        let ops = circuit
            .instructions
            .iter()
            .enumerate()
            .filter_map(|(k, ins)| match ins {
                Instruction::Tick => None,
                Instruction::Reset { basis, qubits } => Some(Op::Reset(*basis, qubits.clone())),
                Instruction::Measure { basis, qubits } => Some(Op::Measure(*basis, qubits.clone())),
                Instruction::Gate { kind, pairs } => Some(Op::Gate(*kind, pairs.clone())),
                Instruction::Noise { channel, qubits } => Some(Op::Noise {
                    instruction: k,
                    channel: *channel,
                    log_keep: (1.0 - channel.probability()).ln(),
                    qubits: qubits.clone(),
                }),
            })
            .collect();
        FrameSampler {
            ops,
            num_qubits: circuit.num_qubits,
            num_measurements: circuit.num_measurements(),
            detectors: circuit.detectors.iter().map(|d| d.measurements.clone()).collect(),
            observable: circuit.observable.clone(),
        }
    }

    pub fn num_detectors(&self) -> usize {
        self.detectors.len()
    }

    /// Run the frame; `noise` is called at each channel to inject errors.
    /// Without `rng` the gauge is not randomized.
    fn run(
        &self,
        mut rng: Option<&mut ChaCha8Rng>,
        mut noise: impl FnMut(&mut Frame, Option<&mut ChaCha8Rng>, usize, &Channel, f64, &[usize]),
    ) -> (Vec<u64>, u64) {
        let gauge = |rng: &mut Option<&mut ChaCha8Rng>| rng.as_deref_mut().map_or(0, |r| r.random::<u64>());
        let mut f = Frame {
            x: vec![0; self.num_qubits],
            z: vec![0; self.num_qubits],
            flips: Vec::with_capacity(self.num_measurements),
        };
        for op in &self.ops {
            match op {
                Op::Reset(basis, qs) => {
                    for &q in qs {
                        let g = gauge(&mut rng);
                        (f.x[q], f.z[q]) = match basis {
                            Basis::Z => (0, g),
                            Basis::X => (g, 0),
                        };
                    }
                }
                Op::Measure(basis, qs) => {
                    for &q in qs {
                        let g = gauge(&mut rng);
                        match basis {
                            Basis::Z => {
                                f.flips.push(f.x[q]);
                                f.z[q] = g;
                            }
                            Basis::X => {
                                f.flips.push(f.z[q]);
                                f.x[q] = g;
                            }
                        }
                    }
                }
                Op::Gate(GateKind::CX, pairs) => {
                    for &(c, t) in pairs {
                        f.x[t] ^= f.x[c];
                        f.z[c] ^= f.z[t];
                    }
                }
                Op::Gate(GateKind::CY, pairs) => {
                    for &(c, t) in pairs {
                        f.z[c] ^= f.x[t] ^ f.z[t];
                        f.x[t] ^= f.x[c];
                        f.z[t] ^= f.x[c];
                    }
                }
                Op::Noise {
                    instruction,
                    channel,
                    log_keep,
                    qubits,
                } => noise(&mut f, rng.as_deref_mut(), *instruction, channel, *log_keep, qubits),
            }
        }
        let dets = self
            .detectors
            .iter()
            .map(|ms| ms.iter().fold(0, |acc, &m| acc ^ f.flips[m]))
            .collect();
        let obs = self.observable.iter().fold(0, |acc, &m| acc ^ f.flips[m]);
        (dets, obs)
    }

    /// Sample `lanes <= 64` shots with the generator keyed by `(seed, batch)`.
    pub fn sample_batch(&self, seed: u64, batch: u64, lanes: usize) -> Batch {
        assert!((1..=64).contains(&lanes));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        let lane_mask = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
        let (detectors, observable) = self.run(Some(&mut rng), |f, rng, _, channel, log_keep, qubits| {
            let rng = rng.expect("sampling always has a generator");
            let p = channel.probability();
            match channel {
                Channel::XError(_) | Channel::ZError(_) => {
                    let pauli = if matches!(channel, Channel::XError(_)) { P1::X } else { P1::Z };
                    bernoulli_hits(rng, p, log_keep, qubits.len() * lanes, |i| {
                        f.apply(qubits[i / lanes], pauli, 1 << (i % lanes));
                    });
                }
                Channel::Depolarize1(_) => {
                    let mut hits = Vec::new();
                    bernoulli_hits(rng, p, log_keep, qubits.len() * lanes, |i| hits.push(i));
                    for i in hits {
                        let pauli = [P1::X, P1::Y, P1::Z][rng.random_range(0..3)];
                        f.apply(qubits[i / lanes], pauli, 1 << (i % lanes));
                    }
                }
                Channel::Depolarize2(_) => {
                    let pairs = qubits.len() / 2;
                    let mut hits = Vec::new();
                    bernoulli_hits(rng, p, log_keep, pairs * lanes, |i| hits.push(i));
                    for i in hits {
                        let k = rng.random_range(1..16);
                        let pair = i / lanes;
                        let mask = 1 << (i % lanes);
                        const P: [P1; 4] = [P1::I, P1::X, P1::Y, P1::Z];
                        f.apply(qubits[2 * pair], P[k / 4], mask);
                        f.apply(qubits[2 * pair + 1], P[k % 4], mask);
                    }
                }
            }
        });
        Batch {
            lanes,
            detectors: detectors.into_iter().map(|w| w & lane_mask).collect(),
            observable: observable & lane_mask,
        }
    }

    /// Noise-free run with the given faults forced on, one lane.
    pub fn propagate_faults(&self, faults: &[Fault]) -> ShotRecord {
        let (dets, obs) = self.run(None, |f, _, instruction, _, _, _| {
            for fault in faults.iter().filter(|ft| ft.instruction == instruction) {
                for (q, p) in fault.components() {
                    f.apply(q, p, 1);
                }
            }
        });
        Batch {
            lanes: 1,
            detectors: dets,
            observable: obs,
        }
        .shot(0)
    }

    /// `shots` shots as batches of 64, in shot order.
    pub fn sample_batches(&self, shots: usize, seed: u64) -> Vec<Batch> {
        let n = shots.div_ceil(64);
        (0..n)
            .into_par_iter()
            .map(|b| {
                let lanes = (shots - b * 64).min(64);
                self.sample_batch(seed, b as u64, lanes)
            })
            .collect()
    }
}

/// Sample `shots` records of a noisy circuit, reproducibly from `seed`.
pub fn sample(circuit: &Circuit, shots: usize, seed: u64) -> Vec<ShotRecord> {
    let s = FrameSampler::new(circuit);
    s.sample_batches(shots, seed)
        .iter()
        .flat_map(|b| (0..b.lanes).map(move |k| b.shot(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_memory_circuit, Variant};
    use crate::lattice::build_patch;
    use crate::noise::{annotate, NoiseModel};
    use crate::schedule::default_schedule;

    fn noisy(d: usize, model: NoiseModel) -> Circuit {
        let c = build_memory_circuit(&build_patch(d).unwrap(), &default_schedule(), d, Variant::XZ).unwrap();
        annotate(&c, &model).unwrap()
    }

    #[test]
    fn bernoulli_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = 0.013;
        let n = 1_000_000;
        let mut count = 0;
        bernoulli_hits(&mut rng, p, (1.0 - p).ln(), n, |_| count += 1);
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((count as f64 - n as f64 * p).abs() < 5.0 * sd, "{count}");
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = Vec::new();
        bernoulli_hits(&mut rng, 1.0, f64::NEG_INFINITY, 5, |i| hits.push(i));
        assert_eq!(hits, vec![0, 1, 2, 3, 4]);
        bernoulli_hits(&mut rng, 0.0, 0.0, 5, |_| panic!());
    }

    #[test]
    fn noiseless_is_silent() {
        let c = noisy(3, NoiseModel::uniform(0.0).unwrap());
        for r in sample(&c, 500, 3) {
            assert!(r.is_trivial());
        }
    }

    #[test]
    fn random_outcomes_fire_detectors() {
        // A detector on the first X-round outcome of a Z-basis memory is random.
        let mut c = build_memory_circuit(&build_patch(3).unwrap(), &default_schedule(), 1, Variant::XZ).unwrap();
        let first_x = c.measurement_targets().iter().position(|&(_, b)| b == Basis::X).unwrap();
        c.detectors.push(crate::circuit::Detector {
            measurements: vec![first_x],
            ..c.detectors[0].clone()
        });
        let shots = sample(&c, 2000, 4);
        let last = c.detectors.len() - 1;
        let fired = shots.iter().filter(|r| r.detector(last)).count();
        assert!((800..1200).contains(&fired), "{fired}");
        assert!(shots.iter().all(|r| (0..last).all(|d| !r.detector(d))));
    }

    #[test]
    fn deterministic_given_seed() {
        let c = noisy(3, NoiseModel::si1000(0.01).unwrap());
        assert_eq!(sample(&c, 300, 9), sample(&c, 300, 9));
        assert_ne!(sample(&c, 300, 9), sample(&c, 300, 10));
    }

    #[test]
    fn partial_batch_masks_unused_lanes() {
        let c = noisy(3, NoiseModel::uniform(0.05).unwrap());
        let part = FrameSampler::new(&c).sample_batch(4, 0, 10);
        assert_eq!(part.lanes, 10);
        assert!(part.detectors.iter().all(|w| w >> 10 == 0));
        assert!(part.detectors.iter().any(|&w| w != 0));
        assert_eq!(sample(&c, 75, 1).len(), 75);
    }
}
