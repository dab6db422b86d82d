//! Memory-experiment circuits and their line-oriented text form.
//!
//! Qubits `0..n` are data qubits, `n + f` is the auxiliary of face `f`.
//! Every syndrome extraction is one reset layer, six gate layers and one
//! measurement layer, each closed by a `TICK`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::Patch;
use crate::schedule::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    CX,
    CY,
}

/// Pauli type of a stabilizer extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    Depolarize1(f64),
    /// Targets are consumed in pairs.
    Depolarize2(f64),
    XError(f64),
    ZError(f64),
}

impl Channel {
    pub fn probability(&self) -> f64 {
        match *self {
            Channel::Depolarize1(p) | Channel::Depolarize2(p) | Channel::XError(p) | Channel::ZError(p) => p,
        }
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Channel::Depolarize1(_) => "DEPOLARIZE1",
            Channel::Depolarize2(_) => "DEPOLARIZE2",
            Channel::XError(_) => "X_ERROR",
            Channel::ZError(_) => "Z_ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Reset { basis: Basis, qubits: Vec<usize> },
    /// `(control, target)` pairs, all applied in parallel.
    Gate { kind: GateKind, pairs: Vec<(usize, usize)> },
    Measure { basis: Basis, qubits: Vec<usize> },
    Noise { channel: Channel, qubits: Vec<usize> },
    Tick,
}

impl Instruction {
    /// Number of measurement records this instruction appends.
    pub fn num_measurements(&self) -> usize {
        match self {
            Instruction::Measure { qubits, .. } => qubits.len(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detector {
    /// Absolute measurement indices whose parity is checked.
    pub measurements: Vec<usize>,
    /// `(i, j, round, pauli)` for generated circuits.
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub qubit_coords: Vec<(i32, i32)>,
    pub instructions: Vec<Instruction>,
    pub detectors: Vec<Detector>,
    pub observable: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// X then Z extraction in every round.
    XZ,
    /// One extraction per round cycling X -> Y -> Z, phased to end on Z.
    XYZ,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xz" => Ok(Variant::XZ),
            "xyz" => Ok(Variant::XYZ),
            other => Err(Error::Unsupported(format!("variant '{other}'"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::XZ => "xz",
            Variant::XYZ => "xyz",
        })
    }
}

/// Extraction types of each round of an XYZ experiment.
pub fn xyz_cycle(rounds: usize) -> Vec<Pauli> {
    const CYCLE: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    let shift = (2 + 3 - (rounds.max(1) - 1) % 3) % 3;
    (0..rounds).map(|t| CYCLE[(t + shift) % 3]).collect()
}

struct Builder<'a> {
    patch: &'a Patch,
    schedule: &'a Schedule,
    instructions: Vec<Instruction>,
    num_measurements: usize,
}

impl Builder<'_> {
    /// Append one extraction of type `pauli`; returns each face's record index.
    fn extract(&mut self, pauli: Pauli, reset_data: bool) -> Vec<usize> {
        let n = self.patch.num_data();
        let aux: Vec<usize> = self.patch.faces().iter().map(|f| f.aux_qubit).collect();
        let aux_basis = if pauli == Pauli::Z { Basis::Z } else { Basis::X };

        if reset_data {
            if aux_basis == Basis::Z {
                let mut all: Vec<usize> = (0..n).collect();
                all.extend(&aux);
                self.instructions.push(Instruction::Reset {
                    basis: Basis::Z,
                    qubits: all,
                });
            } else {
                self.instructions.push(Instruction::Reset {
                    basis: Basis::Z,
                    qubits: (0..n).collect(),
                });
                self.instructions.push(Instruction::Reset {
                    basis: Basis::X,
                    qubits: aux.clone(),
                });
            }
        } else {
            self.instructions.push(Instruction::Reset {
                basis: aux_basis,
                qubits: aux.clone(),
            });
        }
        self.instructions.push(Instruction::Tick);

        let kind = if pauli == Pauli::Y { GateKind::CY } else { GateKind::CX };
        for step in 0..6 {
            let mut pairs = Vec::new();
            for face in self.patch.faces() {
                let slot = self.schedule.order(face.color)[step] as usize;
                if let Some(q) = face.slots[slot] {
                    pairs.push(match pauli {
                        Pauli::Z => (q, face.aux_qubit),
                        _ => (face.aux_qubit, q),
                    });
                }
            }
            self.instructions.push(Instruction::Gate { kind, pairs });
            self.instructions.push(Instruction::Tick);
        }

        self.instructions.push(Instruction::Measure {
            basis: aux_basis,
            qubits: aux.clone(),
        });
        self.instructions.push(Instruction::Tick);
        let base = self.num_measurements;
        self.num_measurements += aux.len();
        (base..base + aux.len()).collect()
    }

    fn measure_data(&mut self) -> usize {
        let n = self.patch.num_data();
        self.instructions.push(Instruction::Measure {
            basis: Basis::Z,
            qubits: (0..n).collect(),
        });
        let base = self.num_measurements;
        self.num_measurements += n;
        base
    }
}

fn detector(measurements: Vec<usize>, center: (i32, i32), round: usize, pauli: Pauli) -> Detector {
    Detector {
        measurements,
        coords: vec![center.0 as f64, center.1 as f64, round as f64, pauli.index() as f64],
    }
}

/// Build a Z-basis memory experiment with `rounds` rounds of extraction.
pub fn build_memory_circuit(patch: &Patch, schedule: &Schedule, rounds: usize, variant: Variant) -> Result<Circuit> {
    if rounds == 0 {
        return Err(Error::InvalidRounds);
    }
    let mut b = Builder {
        patch,
        schedule,
        instructions: Vec::new(),
        num_measurements: 0,
    };
    let mut detectors = Vec::new();
    let faces = patch.faces();

    let last_z = match variant {
        Variant::XZ => {
            let mut prev: Option<(Vec<usize>, Vec<usize>)> = None;
            for t in 0..rounds {
                let mx = b.extract(Pauli::X, t == 0);
                if let Some((px, _)) = &prev {
                    for f in faces {
                        detectors.push(detector(vec![px[f.id], mx[f.id]], f.center, t, Pauli::X));
                    }
                }
                let mz = b.extract(Pauli::Z, false);
                for f in faces {
                    let ms = match &prev {
                        Some((_, pz)) => vec![pz[f.id], mz[f.id]],
                        None => vec![mz[f.id]],
                    };
                    detectors.push(detector(ms, f.center, t, Pauli::Z));
                }
                prev = Some((mx, mz));
            }
            prev.unwrap().1
        }
        Variant::XYZ => {
            let kinds = xyz_cycle(rounds);
            let mut history: Vec<Vec<usize>> = Vec::new();
            let mut seen_z = false;
            for (t, &pauli) in kinds.iter().enumerate() {
                let m = b.extract(pauli, t == 0);
                history.push(m);
                for f in faces {
                    if t >= 2 {
                        let ms = (t - 2..=t).map(|r| history[r][f.id]).collect();
                        detectors.push(detector(ms, f.center, t, pauli));
                    }
                    if pauli == Pauli::Z && !seen_z {
                        detectors.push(detector(vec![history[t][f.id]], f.center, t, pauli));
                    }
                }
                seen_z |= pauli == Pauli::Z;
            }
            history.pop().unwrap()
        }
    };

    let data_base = b.measure_data();
    for f in faces {
        let mut ms = vec![last_z[f.id]];
        ms.extend(f.data_slots().iter().map(|&q| data_base + q));
        detectors.push(detector(ms, f.center, rounds, Pauli::Z));
    }
    let observable = patch.logical_z_support().iter().map(|&q| data_base + q).collect();

    let qubit_coords = (0..patch.num_qubits()).map(|q| patch.qubit_coord(q)).collect();
    let circuit = Circuit {
        num_qubits: patch.num_qubits(),
        qubit_coords,
        instructions: b.instructions,
        detectors,
        observable,
    };
    debug_assert!(circuit.validate().is_ok());
    Ok(circuit)
}

impl Circuit {
    pub fn num_measurements(&self) -> usize {
        self.instructions.iter().map(Instruction::num_measurements).sum()
    }

    pub fn num_detectors(&self) -> usize {
        self.detectors.len()
    }

    pub fn is_noisy(&self) -> bool {
        self.instructions.iter().any(|i| matches!(i, Instruction::Noise { .. }))
    }

    /// Copy with every noise channel removed.
    pub fn without_noise(&self) -> Circuit {
        let mut c = self.clone();
        c.instructions.retain(|i| !matches!(i, Instruction::Noise { .. }));
        c
    }

    /// `(qubit, basis)` of every measurement record in order.
    pub fn measurement_targets(&self) -> Vec<(usize, Basis)> {
        let mut out = Vec::new();
        for ins in &self.instructions {
            if let Instruction::Measure { basis, qubits } = ins {
                out.extend(qubits.iter().map(|&q| (q, *basis)));
            }
        }
        out
    }

    /// Structural checks: qubit ranges, record references, and that no qubit
    /// is used twice by non-noise operations between two ticks.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse { line: 0, msg });
        let mut busy: HashSet<usize> = HashSet::new();
        for ins in &self.instructions {
            let qs: Vec<usize> = match ins {
                Instruction::Tick => {
                    busy.clear();
                    continue;
                }
                Instruction::Reset { qubits, .. } | Instruction::Measure { qubits, .. } => qubits.clone(),
                Instruction::Gate { pairs, .. } => pairs.iter().flat_map(|&(a, b)| [a, b]).collect(),
                Instruction::Noise { channel, qubits } => {
                    if matches!(channel, Channel::Depolarize2(_)) && qubits.len() % 2 == 1 {
                        return bad("DEPOLARIZE2 needs an even number of targets".into());
                    }
                    if let Some(&q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
                        return bad(format!("qubit {q} out of range"));
                    }
                    continue;
                }
            };
            for q in qs {
                if q >= self.num_qubits {
                    return bad(format!("qubit {q} out of range"));
                }
                if !busy.insert(q) {
                    return bad(format!("qubit {q} used twice in one layer"));
                }
            }
        }
        let m = self.num_measurements();
        let refs = self.detectors.iter().flat_map(|d| &d.measurements).chain(&self.observable);
        if let Some(&r) = refs.into_iter().find(|&&r| r >= m) {
            return bad(format!("record {r} does not exist"));
        }
        Ok(())
    }

    /// Render in the line-oriented interchange format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (q, (i, j)) in self.qubit_coords.iter().enumerate() {
            let _ = writeln!(out, "QUBIT_COORDS({i}, {j}) {q}");
        }
        let join = |qs: &mut dyn Iterator<Item = usize>| qs.map(|q| q.to_string()).collect::<Vec<_>>().join(" ");

        // Detectors are written as soon as all their records exist, keeping
        // their order.
        let mut next_det = 0;
        let mut recorded = 0;
        let emit_ready = |out: &mut String, next_det: &mut usize, recorded: usize| {
            while let Some(d) = self.detectors.get(*next_det) {
                if d.measurements.iter().any(|&m| m >= recorded) {
                    break;
                }
                let coords = d.coords.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(", ");
                let recs = d.measurements.iter().map(|&m| format!(" rec[-{}]", recorded - m)).collect::<String>();
                let _ = writeln!(out, "DETECTOR({coords}){recs}");
                *next_det += 1;
            }
        };
        for ins in &self.instructions {
            match ins {
                Instruction::Tick => out.push_str("TICK\n"),
                Instruction::Reset { basis, qubits } => {
                    let m = if *basis == Basis::Z { "R" } else { "RX" };
                    let _ = writeln!(out, "{m} {}", join(&mut qubits.iter().copied()));
                }
                Instruction::Measure { basis, qubits } => {
                    let m = if *basis == Basis::Z { "M" } else { "MX" };
                    let _ = writeln!(out, "{m} {}", join(&mut qubits.iter().copied()));
                    recorded += qubits.len();
                    emit_ready(&mut out, &mut next_det, recorded);
                }
                Instruction::Gate { kind, pairs } => {
                    let m = if *kind == GateKind::CX { "CX" } else { "CY" };
                    let _ = writeln!(out, "{m} {}", join(&mut pairs.iter().flat_map(|&(a, b)| [a, b])));
                }
                Instruction::Noise { channel, qubits } => {
                    let _ = writeln!(
                        out,
                        "{}({}) {}",
                        channel.mnemonic(),
                        channel.probability(),
                        join(&mut qubits.iter().copied())
                    );
                }
            }
        }
        emit_ready(&mut out, &mut next_det, recorded);
        if !self.observable.is_empty() {
            let recs = self
                .observable
                .iter()
                .map(|&m| format!(" rec[-{}]", recorded - m))
                .collect::<String>();
            let _ = writeln!(out, "OBSERVABLE_INCLUDE(0){recs}");
        }
        out
    }

    /// Parse the output of [`Circuit::to_text`].
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut coords: Vec<Option<(i32, i32)>> = Vec::new();
        let mut instructions = Vec::new();
        let mut detectors = Vec::new();
        let mut observable = Vec::new();
        let mut recorded = 0usize;
        let mut max_qubit = 0usize;

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: ln + 1, msg };
            let name_end = line.find(|c: char| c == '(' || c.is_whitespace()).unwrap_or(line.len());
            let name = &line[..name_end];
            let (arg, rest) = if line[name_end..].starts_with('(') {
                let close = line.find(')').ok_or_else(|| err("unclosed argument".into()))?;
                (Some(&line[name_end + 1..close]), line[close + 1..].trim())
            } else {
                (None, line[name_end..].trim())
            };
            let nums = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad target '{t}'"))))
                    .collect()
            };
            let recs = |s: &str, recorded: usize| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| {
                        let k: usize = t
                            .strip_prefix("rec[-")
                            .and_then(|t| t.strip_suffix(']'))
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| err(format!("bad record '{t}'")))?;
                        if k == 0 || k > recorded {
                            return Err(err(format!("record rec[-{k}] out of range")));
                        }
                        Ok(recorded - k)
                    })
                    .collect()
            };
            let floats = |a: Option<&str>| -> Result<Vec<f64>> {
                a.map_or(Ok(Vec::new()), |a| {
                    a.split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<f64>().map_err(|_| err(format!("bad number '{s}'"))))
                        .collect()
                })
            };
            let prob = |a: Option<&str>| -> Result<f64> {
                let v = floats(a)?;
                match v.as_slice() {
                    [p] if (0.0..=1.0).contains(p) => Ok(*p),
                    _ => Err(err(format!("'{name}' needs one probability"))),
                }
            };

            let mut touch = |qs: &[usize]| {
                if let Some(&m) = qs.iter().max() {
                    max_qubit = max_qubit.max(m + 1);
                }
            };
            match name {
                "QUBIT_COORDS" => {
                    let c = floats(arg)?;
                    let q = nums(rest)?;
                    if c.len() != 2 || q.len() != 1 {
                        return Err(err("QUBIT_COORDS takes two coordinates and one qubit".into()));
                    }
                    let q = q[0];
                    if coords.len() <= q {
                        coords.resize(q + 1, None);
                    }
                    coords[q] = Some((c[0] as i32, c[1] as i32));
                    touch(&[q]);
                }
                "TICK" => instructions.push(Instruction::Tick),
                "R" | "RX" | "M" | "MX" => {
                    let qubits = nums(rest)?;
                    touch(&qubits);
                    let basis = if name.ends_with('X') { Basis::X } else { Basis::Z };
                    if name.starts_with('M') {
                        recorded += qubits.len();
                        instructions.push(Instruction::Measure { basis, qubits });
                    } else {
                        instructions.push(Instruction::Reset { basis, qubits });
                    }
                }
                "CX" | "CY" => {
                    let qs = nums(rest)?;
                    if qs.len() % 2 == 1 {
                        return Err(err(format!("{name} needs an even number of targets")));
                    }
                    touch(&qs);
                    let kind = if name == "CX" { GateKind::CX } else { GateKind::CY };
                    let pairs = qs.chunks(2).map(|c| (c[0], c[1])).collect();
                    instructions.push(Instruction::Gate { kind, pairs });
                }
                "DEPOLARIZE1" | "DEPOLARIZE2" | "X_ERROR" | "Z_ERROR" => {
                    let p = prob(arg)?;
                    let qubits = nums(rest)?;
                    touch(&qubits);
                    let channel = match name {
                        "DEPOLARIZE1" => Channel::Depolarize1(p),
                        "DEPOLARIZE2" => Channel::Depolarize2(p),
                        "X_ERROR" => Channel::XError(p),
                        _ => Channel::ZError(p),
                    };
                    instructions.push(Instruction::Noise { channel, qubits });
                }
                "DETECTOR" => detectors.push(Detector {
                    measurements: recs(rest, recorded)?,
                    coords: floats(arg)?,
                }),
                "OBSERVABLE_INCLUDE" => {
                    if floats(arg)? != [0.0] {
                        return Err(err("only observable 0 is supported".into()));
                    }
                    observable.extend(recs(rest, recorded)?);
                }
                other => return Err(err(format!("unsupported instruction '{other}'"))),
            }
        }

        let num_qubits = max_qubit.max(coords.len());
        let qubit_coords = (0..num_qubits)
            .map(|q| coords.get(q).copied().flatten().unwrap_or((0, 0)))
            .collect();
        let c = Circuit {
            num_qubits,
            qubit_coords,
            instructions,
            detectors,
            observable,
        };
        c.validate()?;
        Ok(c)
    }
}
