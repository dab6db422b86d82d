//! Detector error models: every single Pauli fault of every noise channel,
//! propagated to the detectors and observable it flips.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::circuit::{Basis, Channel, Circuit, GateKind, Instruction};
use crate::error::{Error, Result};

/// One-qubit Pauli of a fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum P1 {
    I,
    X,
    Y,
    Z,
}

impl P1 {
    const NON_IDENTITY: [P1; 3] = [P1::X, P1::Y, P1::Z];
    const ALL: [P1; 4] = [P1::I, P1::X, P1::Y, P1::Z];

    pub fn has_x(self) -> bool {
        matches!(self, P1::X | P1::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, P1::Z | P1::Y)
    }
}

/// A single fault: a Pauli inserted at the position of noise instruction
/// `instruction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fault {
    pub instruction: usize,
    pub qubits: [usize; 2],
    pub paulis: [P1; 2],
    pub probability: f64,
}

impl Fault {
    /// Non-identity `(qubit, pauli)` components.
    pub fn components(&self) -> impl Iterator<Item = (usize, P1)> + '_ {
        (0..2).filter(|&k| self.paulis[k] != P1::I).map(|k| (self.qubits[k], self.paulis[k]))
    }
}

/// Every single-Pauli outcome of every channel, in circuit order.
pub fn enumerate_faults(circuit: &Circuit) -> Vec<Fault> {
    let mut out = Vec::new();
    for (k, ins) in circuit.instructions.iter().enumerate() {
        let Instruction::Noise { channel, qubits } = ins else {
            continue;
        };
        let p = channel.probability();
        if p <= 0.0 {
            continue;
        }
        let single = |q: usize, pauli: P1, prob: f64| Fault {
            instruction: k,
            qubits: [q, q],
            paulis: [pauli, P1::I],
            probability: prob,
        };
        match channel {
            Channel::XError(_) => out.extend(qubits.iter().map(|&q| single(q, P1::X, p))),
            Channel::ZError(_) => out.extend(qubits.iter().map(|&q| single(q, P1::Z, p))),
            Channel::Depolarize1(_) => {
                for &q in qubits {
                    out.extend(P1::NON_IDENTITY.iter().map(|&pl| single(q, pl, p / 3.0)));
                }
            }
            Channel::Depolarize2(_) => {
                for pair in qubits.chunks(2) {
                    for a in P1::ALL {
                        for b in P1::ALL {
                            if a == P1::I && b == P1::I {
                                continue;
                            }
                            out.push(Fault {
                                instruction: k,
                                qubits: [pair[0], pair[1]],
                                paulis: [a, b],
                                probability: p / 15.0,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Fixed-width bitset over detectors plus one trailing observable bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(pub Vec<u64>);

impl Signature {
    pub fn zero(bits: usize) -> Signature {
        Signature(vec![0; bits.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor(&mut self, other: &Signature) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + b
                })
            })
        })
    }
}

/// Backward sensitivity pass: for every noise instruction, the detectors
/// (and observable, bit `num_detectors`) flipped by an X or a Z on each
/// qubit at that point.
pub struct Sensitivity {
    pub num_detectors: usize,
    /// `(instruction index, per-qubit X signature, per-qubit Z signature)`
    /// for noise instructions, in reverse circuit order.
    snapshots: HashMap<usize, (Vec<Signature>, Vec<Signature>)>,
}

impl Sensitivity {
    pub fn compute(circuit: &Circuit) -> Sensitivity {
        let nd = circuit.num_detectors();
        let bits = nd + 1;
        let nm = circuit.num_measurements();
        let mut rec: Vec<Signature> = vec![Signature::zero(bits); nm];
        for (d, det) in circuit.detectors.iter().enumerate() {
            for &m in &det.measurements {
                rec[m].set(d);
            }
        }
        for &m in &circuit.observable {
            rec[m].set(nd);
        }

        let nq = circuit.num_qubits;
        let mut sx = vec![Signature::zero(bits); nq];
        let mut sz = vec![Signature::zero(bits); nq];
        let mut snapshots = HashMap::new();
        let mut m = nm;
        for (k, ins) in circuit.instructions.iter().enumerate().rev() {
            match ins {
                Instruction::Tick => {}
                Instruction::Noise { qubits, .. } => {
                    let keep = |s: &[Signature]| {
                        let mut v = vec![Signature(Vec::new()); nq];
                        for &q in qubits {
                            v[q] = s[q].clone();
                        }
                        v
                    };
                    snapshots.insert(k, (keep(&sx), keep(&sz)));
                }
                Instruction::Measure { basis, qubits } => {
                    m -= qubits.len();
                    for (off, &q) in qubits.iter().enumerate() {
                        let r = &rec[m + off];
                        match basis {
                            Basis::Z => {
                                sx[q].xor(r);
                                sz[q] = Signature::zero(bits);
                            }
                            Basis::X => {
                                sz[q].xor(r);
                                sx[q] = Signature::zero(bits);
                            }
                        }
                    }
                }
                Instruction::Reset { qubits, .. } => {
                    for &q in qubits {
                        sx[q] = Signature::zero(bits);
                        sz[q] = Signature::zero(bits);
                    }
                }
                Instruction::Gate { kind, pairs } => {
                    for &(c, t) in pairs {
                        match kind {
                            GateKind::CX => {
                                let xt = sx[t].clone();
                                sx[c].xor(&xt);
                                let zc = sz[c].clone();
                                sz[t].xor(&zc);
                            }
                            GateKind::CY => {
                                let (xt, zt, zc) = (sx[t].clone(), sz[t].clone(), sz[c].clone());
                                sx[c].xor(&xt);
                                sx[c].xor(&zt);
                                sx[t].xor(&zc);
                                sz[t].xor(&zc);
                            }
                        }
                    }
                }
            }
        }
        Sensitivity {
            num_detectors: nd,
            snapshots,
        }
    }

    /// Detectors and observable flipped by `fault`.
    pub fn signature(&self, fault: &Fault) -> Signature {
        let (sx, sz) = &self.snapshots[&fault.instruction];
        let mut s = Signature::zero(self.num_detectors + 1);
        for (q, p) in fault.components() {
            if p.has_x() {
                s.xor(&sx[q]);
            }
            if p.has_z() {
                s.xor(&sz[q]);
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaultClass {
    pub probability: f64,
    pub detectors: Vec<usize>,
    pub observable: bool,
    /// Every single fault that produces this signature.
    pub sources: Vec<Fault>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorErrorModel {
    pub num_detectors: usize,
    pub classes: Vec<FaultClass>,
}

/// Probability that exactly one of two independent events fires.
pub fn xor_combine(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// Compile a noisy circuit into its deduplicated fault classes.
pub fn compile_dem(circuit: &Circuit) -> DetectorErrorModel {
    let sens = Sensitivity::compute(circuit);
    let nd = circuit.num_detectors();
    let mut index: HashMap<Signature, usize> = HashMap::new();
    let mut classes: Vec<FaultClass> = Vec::new();
    for fault in enumerate_faults(circuit) {
        let sig = sens.signature(&fault);
        if sig.is_zero() {
            continue;
        }
        let k = *index.entry(sig.clone()).or_insert_with(|| {
            let observable = sig.get(nd);
            classes.push(FaultClass {
                probability: 0.0,
                detectors: sig.ones().filter(|&d| d < nd).collect(),
                observable,
                sources: Vec::new(),
            });
            classes.len() - 1
        });
        let c = &mut classes[k];
        c.probability = xor_combine(c.probability, fault.probability);
        c.sources.push(fault);
    }
    DetectorErrorModel {
        num_detectors: nd,
        classes,
    }
}

impl DetectorErrorModel {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Signature of class `k` as a bitset with the observable at bit
    /// `num_detectors`.
    pub fn signature(&self, k: usize) -> Signature {
        let c = &self.classes[k];
        let mut s = Signature::zero(self.num_detectors + 1);
        for &d in &c.detectors {
            s.set(d);
        }
        if c.observable {
            s.set(self.num_detectors);
        }
        s
    }

    /// `E(p) D.. [L0]` per class, then `detector D<n-1>` so the detector
    /// count survives classes that never touch the last detector.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.classes {
            let _ = write!(out, "E({})", c.probability);
            for d in &c.detectors {
                let _ = write!(out, " D{d}");
            }
            if c.observable {
                out.push_str(" L0");
            }
            out.push('\n');
        }
        if self.num_detectors > 0 {
            let _ = writeln!(out, "detector D{}", self.num_detectors - 1);
        }
        out
    }

    /// Parse [`DetectorErrorModel::to_text`] output. Sources are not stored in
    /// the text form and come back empty.
    pub fn from_text(text: &str) -> Result<DetectorErrorModel> {
        let mut classes = Vec::new();
        let mut num_detectors = 0;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: ln + 1, msg };
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap();
            let id = |t: &str| -> Result<usize> {
                t.strip_prefix('D')
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(format!("bad detector '{t}'")))
            };
            if head == "detector" {
                for t in tokens {
                    num_detectors = num_detectors.max(id(t)? + 1);
                }
                continue;
            }
            let p: f64 = head
                .strip_prefix("E(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.parse().ok())
                .filter(|p| (0.0..=1.0).contains(p))
                .ok_or_else(|| err(format!("bad error line head '{head}'")))?;
            let mut detectors = Vec::new();
            let mut observable = false;
            for t in tokens {
                if t == "L0" {
                    observable = !observable;
                } else {
                    detectors.push(id(t)?);
                }
            }
            if let Some(&m) = detectors.iter().max() {
                num_detectors = num_detectors.max(m + 1);
            }
            classes.push(FaultClass {
                probability: p,
                detectors,
                observable,
                sources: Vec::new(),
            });
        }
        Ok(DetectorErrorModel { num_detectors, classes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_memory_circuit, Variant};
    use crate::lattice::build_patch;
    use crate::noise::{annotate, NoiseModel};
    use crate::schedule::default_schedule;

    fn noisy(d: usize, rounds: usize, model: NoiseModel) -> Circuit {
        let c = build_memory_circuit(&build_patch(d).unwrap(), &default_schedule(), rounds, Variant::XZ).unwrap();
        annotate(&c, &model).unwrap()
    }

    #[test]
    fn xor_combination() {
        assert_eq!(xor_combine(0.0, 0.3), 0.3);
        assert!((xor_combine(0.1, 0.2) - 0.26).abs() < 1e-12);
        assert!((xor_combine(0.5, 0.9) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn channel_outcome_counts() {
        let c = noisy(3, 1, NoiseModel::uniform(0.003).unwrap());
        for f in enumerate_faults(&c) {
            let Instruction::Noise { channel, .. } = &c.instructions[f.instruction] else {
                panic!()
            };
            let expect = match channel {
                Channel::Depolarize1(p) => p / 3.0,
                Channel::Depolarize2(p) => p / 15.0,
                other => other.probability(),
            };
            assert_eq!(f.probability, expect);
        }
    }

    #[test]
    fn zero_noise_gives_empty_model() {
        let dem = compile_dem(&noisy(3, 2, NoiseModel::uniform(0.0).unwrap()));
        assert!(dem.classes.is_empty());
        // Z against init, X and Z comparisons in round 1, final reconstruction
        assert_eq!(dem.num_detectors, 3 + 3 * 2 + 3);
    }

    #[test]
    fn classes_are_unique_and_nonempty() {
        let dem = compile_dem(&noisy(3, 3, NoiseModel::si1000(0.001).unwrap()));
        let mut seen = std::collections::HashSet::new();
        for (k, c) in dem.classes.iter().enumerate() {
            assert!(!c.detectors.is_empty() || c.observable);
            assert!(seen.insert(dem.signature(k)));
            let total: f64 = c.sources.iter().map(|f| f.probability).sum();
            assert!(c.probability > 0.0 && c.probability <= total * (1.0 + 1e-12));
        }
    }

    #[test]
    fn bulk_data_error_flips_three_faces_twice() {
        // X on a three-face qubit right before the second round's Z
        // extraction: that round's three Z comparisons and the next ones.
        let p = build_patch(5).unwrap();
        let q = (0..p.num_data()).find(|&q| p.faces_of(q).len() == 3).unwrap();
        let mut c = build_memory_circuit(&p, &default_schedule(), 3, Variant::XZ).unwrap();
        // position: the reset layer of round 1's Z extraction
        let resets: Vec<usize> = c
            .instructions
            .iter()
            .enumerate()
            .filter(|(_, i)| matches!(i, Instruction::Reset { basis: Basis::Z, .. }))
            .map(|(k, _)| k)
            .collect();
        c.instructions.insert(
            resets[2] + 1,
            Instruction::Noise {
                channel: Channel::XError(0.01),
                qubits: vec![q],
            },
        );
        let dem = compile_dem(&c);
        assert_eq!(dem.classes.len(), 1);
        let dets = &dem.classes[0].detectors;
        assert_eq!(dets.len(), 3);
        for &d in dets {
            let det = &c.detectors[d];
            assert_eq!(det.coords[2], 1.0);
            assert_eq!(det.coords[3], 2.0);
        }
    }

    #[test]
    fn text_round_trip() {
        let dem = compile_dem(&noisy(3, 2, NoiseModel::uniform(0.001).unwrap()));
        let text = dem.to_text();
        let back = DetectorErrorModel::from_text(&text).unwrap();
        assert_eq!(back.num_detectors, dem.num_detectors);
        assert_eq!(back.classes.len(), dem.classes.len());
        for (a, b) in back.classes.iter().zip(&dem.classes) {
            assert_eq!(a.probability, b.probability);
            assert_eq!(a.detectors, b.detectors);
            assert_eq!(a.observable, b.observable);
        }
        assert!(DetectorErrorModel::from_text("E(2) D0\n").is_err());
    }
}
