//! Stabilizer-tableau reference simulator (Aaronson–Gottesman), used as an
//! oracle for the frame sampler and the detector definitions.
//!
//! Random measurement outcomes are resolved canonically to 0, so every run
//! is deterministic.

use super::ShotRecord;
use crate::circuit::{Basis, Circuit, GateKind, Instruction};
use crate::dem::{Fault, P1};
use crate::error::{Error, Result};

pub const MAX_TABLEAU_QUBITS: usize = 40;

/// Rows `0..n` destabilizers, `n..2n` stabilizers, row `2n` scratch.
#[derive(Debug, Clone)]
pub struct Tableau {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

impl Tableau {
    pub fn new(n: usize) -> Tableau {
        assert!(n <= 64);
        let mut t = Tableau {
            n,
            x: vec![0; 2 * n + 1],
            z: vec![0; 2 * n + 1],
            r: vec![false; 2 * n + 1],
        };
        for i in 0..n {
            t.x[i] = 1 << i;
            t.z[n + i] = 1 << i;
        }
        t
    }

    fn rows(&self) -> usize {
        2 * self.n
    }

    pub fn h(&mut self, a: usize) {
        let m = 1u64 << a;
        for i in 0..self.rows() {
            let (xa, za) = (self.x[i] & m, self.z[i] & m);
            self.r[i] ^= xa != 0 && za != 0;
            self.x[i] = (self.x[i] & !m) | za;
            self.z[i] = (self.z[i] & !m) | xa;
        }
    }

    pub fn s(&mut self, a: usize) {
        let m = 1u64 << a;
        for i in 0..self.rows() {
            let (xa, za) = (self.x[i] & m, self.z[i] & m);
            self.r[i] ^= xa != 0 && za != 0;
            self.z[i] ^= xa;
        }
    }

    pub fn s_dag(&mut self, a: usize) {
        self.s(a);
        self.s(a);
        self.s(a);
    }

    pub fn cx(&mut self, a: usize, b: usize) {
        for i in 0..self.rows() {
            let xa = self.x[i] >> a & 1 == 1;
            let zb = self.z[i] >> b & 1 == 1;
            let xb = self.x[i] >> b & 1 == 1;
            let za = self.z[i] >> a & 1 == 1;
            self.r[i] ^= xa && zb && (xb == za);
            if xa {
                self.x[i] ^= 1 << b;
            }
            if zb {
                self.z[i] ^= 1 << a;
            }
        }
    }

    /// Controlled-Y as `S_t · CX · S_t†`.
    pub fn cy(&mut self, c: usize, t: usize) {
        self.s_dag(t);
        self.cx(c, t);
        self.s(t);
    }

    pub fn pauli(&mut self, q: usize, p: P1) {
        let m = 1u64 << q;
        for i in 0..self.rows() {
            let anti = match p {
                P1::I => false,
                P1::X => self.z[i] & m != 0,
                P1::Z => self.x[i] & m != 0,
                P1::Y => ((self.x[i] ^ self.z[i]) & m) != 0,
            };
            self.r[i] ^= anti;
        }
    }

    /// Row `h` <- row `h` * row `i`, with the phase bookkeeping.
    fn rowsum(&mut self, h: usize, i: usize) {
        let (x1, z1, x2, z2) = (self.x[i], self.z[i], self.x[h], self.z[h]);
        let y1 = x1 & z1;
        let xo = x1 & !z1;
        let zo = !x1 & z1;
        let pos = (y1 & z2 & !x2) | (xo & z2 & x2) | (zo & x2 & !z2);
        let neg = (y1 & x2 & !z2) | (xo & z2 & !x2) | (zo & x2 & z2);
        let sum = 2 * (self.r[h] as i64) + 2 * (self.r[i] as i64) + pos.count_ones() as i64 - neg.count_ones() as i64;
        self.r[h] = sum.rem_euclid(4) == 2;
        self.x[h] ^= x1;
        self.z[h] ^= z1;
    }

    /// Measure Z on `a`; returns `(outcome, deterministic)`. A random
    /// outcome resolves to 0.
    pub fn measure_z(&mut self, a: usize) -> (bool, bool) {
        self.measure_z_resolved(a, false)
    }

    /// Like [`Tableau::measure_z`], but a random outcome resolves to `random`.
    pub fn measure_z_resolved(&mut self, a: usize, random: bool) -> (bool, bool) {
        let n = self.n;
        let m = 1u64 << a;
        if let Some(p) = (n..2 * n).find(|&p| self.x[p] & m != 0) {
            for i in 0..2 * n {
                if i != p && self.x[i] & m != 0 {
                    self.rowsum(i, p);
                }
            }
            self.x[p - n] = self.x[p];
            self.z[p - n] = self.z[p];
            self.r[p - n] = self.r[p];
            self.x[p] = 0;
            self.z[p] = m;
            self.r[p] = random;
            (random, false)
        } else {
            let s = 2 * n;
            self.x[s] = 0;
            self.z[s] = 0;
            self.r[s] = false;
            for i in 0..n {
                if self.x[i] & m != 0 {
                    self.rowsum(s, i + n);
                }
            }
            (self.r[s], true)
        }
    }

    pub fn measure(&mut self, a: usize, basis: Basis) -> (bool, bool) {
        self.measure_resolved(a, basis, false)
    }

    pub fn measure_resolved(&mut self, a: usize, basis: Basis, random: bool) -> (bool, bool) {
        match basis {
            Basis::Z => self.measure_z_resolved(a, random),
            Basis::X => {
                self.h(a);
                let out = self.measure_z_resolved(a, random);
                self.h(a);
                out
            }
        }
    }

    /// Whether measuring `a` in `basis` now would give a random outcome.
    pub fn is_random(&self, a: usize, basis: Basis) -> bool {
        let m = 1u64 << a;
        let n = self.n;
        let bits = match basis {
            Basis::Z => &self.x,
            Basis::X => &self.z,
        };
        bits[n..2 * n].iter().any(|&w| w & m != 0)
    }

    pub fn reset(&mut self, a: usize, basis: Basis) {
        if self.measure_z(a).0 {
            self.pauli(a, P1::X);
        }
        if basis == Basis::X {
            self.h(a);
        }
    }
}

/// Measurement outcomes of one run with `faults` applied; each entry is
/// `(outcome, deterministic)`. Random outcomes come from `choose`.
pub fn run_resolved(circuit: &Circuit, faults: &[Fault], mut choose: impl FnMut() -> bool) -> Result<Vec<(bool, bool)>> {
    if circuit.num_qubits > MAX_TABLEAU_QUBITS {
        return Err(Error::CircuitTooLarge {
            qubits: circuit.num_qubits,
            max: MAX_TABLEAU_QUBITS,
        });
    }
    let mut t = Tableau::new(circuit.num_qubits);
    let mut out = Vec::with_capacity(circuit.num_measurements());
    for (k, ins) in circuit.instructions.iter().enumerate() {
        match ins {
            Instruction::Tick => {}
            Instruction::Reset { basis, qubits } => qubits.iter().for_each(|&q| t.reset(q, *basis)),
            Instruction::Measure { basis, qubits } => {
                for &q in qubits {
                    // Only consulted when the outcome is random.
                    let pick = t.is_random(q, *basis) && choose();
                    out.push(t.measure_resolved(q, *basis, pick));
                }
            }
            Instruction::Gate { kind, pairs } => {
                for &(c, tg) in pairs {
                    match kind {
                        GateKind::CX => t.cx(c, tg),
                        GateKind::CY => t.cy(c, tg),
                    }
                }
            }
            Instruction::Noise { .. } => {
                for f in faults.iter().filter(|f| f.instruction == k) {
                    for (q, p) in f.components() {
                        t.pauli(q, p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// [`run_resolved`] with every random outcome fixed to 0.
pub fn run_measurements(circuit: &Circuit, faults: &[Fault]) -> Result<Vec<(bool, bool)>> {
    run_resolved(circuit, faults, || false)
}

fn parities(circuit: &Circuit, m: &[(bool, bool)]) -> ShotRecord {
    let mut r = ShotRecord::zero(circuit.num_detectors());
    for (d, det) in circuit.detectors.iter().enumerate() {
        if det.measurements.iter().fold(false, |a, &k| a ^ m[k].0) {
            r.set_detector(d);
        }
    }
    r.observable = circuit.observable.iter().fold(false, |a, &k| a ^ m[k].0);
    r
}

/// Detector and observable flips caused by `faults`, relative to the
/// fault-free run.
pub fn tableau_reference(circuit: &Circuit, faults: &[Fault]) -> Result<ShotRecord> {
    let clean = parities(circuit, &run_measurements(circuit, &[])?);
    let faulty = parities(circuit, &run_measurements(circuit, faults)?);
    Ok(faulty.xor(&clean))
}

/// Whether detectors and observable take the same values under `trials`
/// random resolutions of the non-deterministic measurements. A parity that
/// depends on random outcomes survives each trial with probability 1/2.
pub fn detectors_deterministic(circuit: &Circuit, trials: usize, seed: u64) -> Result<bool> {
    use rand::{Rng, SeedableRng};
    let base = parities(circuit, &run_measurements(circuit, &[])?);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m = run_resolved(circuit, &[], || rng.random())?;
        if parities(circuit, &m) != base {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_pair_correlations() {
        let mut t = Tableau::new(2);
        t.h(0);
        t.cx(0, 1);
        let (a, det_a) = t.measure_z(0);
        let (b, det_b) = t.measure_z(1);
        assert!(!det_a && det_b);
        assert_eq!(a, b);
    }

    #[test]
    fn paulis_flip_deterministic_outcomes() {
        let mut t = Tableau::new(1);
        t.pauli(0, P1::Y);
        assert_eq!(t.measure_z(0), (true, true));
        let mut t = Tableau::new(1);
        t.h(0);
        t.pauli(0, P1::Z);
        assert_eq!(t.measure(0, Basis::X), (true, true));
    }

    #[test]
    fn controlled_y_kickback_measures_y() {
        // |+>_c, target prepared in the +1 eigenstate of Y (S H |0>).
        for flip in [false, true] {
            let mut t = Tableau::new(2);
            t.h(1);
            t.s(1);
            if flip {
                t.pauli(1, P1::X);
            }
            t.h(0);
            t.cy(0, 1);
            assert_eq!(t.measure(0, Basis::X), (flip, true));
        }
    }

    #[test]
    fn s_squared_is_z() {
        let mut t = Tableau::new(1);
        t.h(0);
        t.s(0);
        t.s(0);
        assert_eq!(t.measure(0, Basis::X), (true, true));
        let mut t = Tableau::new(1);
        t.h(0);
        t.s(0);
        t.s_dag(0);
        assert_eq!(t.measure(0, Basis::X), (false, true));
    }

    #[test]
    fn resolved_outcomes_collapse_consistently() {
        for forced in [false, true] {
            let mut t = Tableau::new(3);
            t.h(0);
            t.cx(0, 1);
            t.cx(0, 2);
            assert!(t.is_random(0, Basis::Z));
            assert_eq!(t.measure_z_resolved(0, forced), (forced, false));
            assert_eq!(t.measure_z(1), (forced, true));
            assert_eq!(t.measure_z(2), (forced, true));
        }
        // X-basis: |0> measured in X, forced to 1, is |->.
        let mut t = Tableau::new(1);
        assert_eq!(t.measure_resolved(0, Basis::X, true), (true, false));
        assert_eq!(t.measure(0, Basis::X), (true, true));
    }

    #[test]
    fn ghz_parity() {
        let mut t = Tableau::new(3);
        t.h(0);
        t.cx(0, 1);
        t.cx(1, 2);
        // X X X = +1 on GHZ
        for q in 0..3 {
            t.h(q);
        }
        let m: Vec<bool> = (0..3).map(|q| t.measure_z(q).0).collect();
        assert!(!(m[0] ^ m[1] ^ m[2]));
    }
}
