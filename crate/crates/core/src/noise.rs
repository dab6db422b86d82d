//! Circuit-level noise models, inserted as explicit channels.
//!
//! A *layer* is everything between two `TICK`s. Qubits a layer does not act
//! on are idle in it.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Basis, Channel, Circuit, Instruction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Superconducting-inspired: cheap idles, expensive measurement.
    SI1000,
    /// Probability `p` at every circuit location.
    UniformDepolarizing,
    /// Two-qubit depolarization after every entangling gate, nothing else.
    NoisyCnot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
}

pub const MAX_P: f64 = 0.1;

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<NoiseModel> {
        if !(0.0..=MAX_P).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(NoiseModel { kind, p })
    }

    pub fn si1000(p: f64) -> Result<NoiseModel> {
        NoiseModel::new(NoiseKind::SI1000, p)
    }

    pub fn uniform(p: f64) -> Result<NoiseModel> {
        NoiseModel::new(NoiseKind::UniformDepolarizing, p)
    }

    pub fn noisy_cnot(p: f64) -> Result<NoiseModel> {
        NoiseModel::new(NoiseKind::NoisyCnot, p)
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    /// `si1000:0.001`, `uniform:0.001` or `cnot:0.001`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, p) = s
            .split_once(':')
            .ok_or_else(|| Error::Unsupported(format!("noise '{s}' (expected model:p)")))?;
        let p: f64 = p.parse().map_err(|_| Error::Unsupported(format!("noise probability '{p}'")))?;
        let kind = match name.to_ascii_lowercase().as_str() {
            "si1000" => NoiseKind::SI1000,
            "uniform" | "depolarizing" => NoiseKind::UniformDepolarizing,
            "cnot" | "noisy-cnot" | "noisycnot" => NoiseKind::NoisyCnot,
            other => return Err(Error::Unsupported(format!("noise model '{other}'"))),
        };
        NoiseModel::new(kind, p)
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            NoiseKind::SI1000 => "si1000",
            NoiseKind::UniformDepolarizing => "uniform",
            NoiseKind::NoisyCnot => "cnot",
        };
        write!(f, "{name}:{}", self.p)
    }
}

/// Per-location probabilities of a model.
#[derive(Debug, Clone, Copy)]
struct Rates {
    gate2: f64,
    idle: f64,
    /// Extra idle depolarization during measurement and reset layers.
    idle_readout: f64,
    measure_flip: f64,
    reset_flip: f64,
}

impl Rates {
    fn of(m: &NoiseModel) -> Rates {
        let p = m.p;
        match m.kind {
            NoiseKind::SI1000 => Rates {
                gate2: p,
                idle: p / 10.0,
                idle_readout: 2.0 * p,
                measure_flip: 5.0 * p,
                reset_flip: 2.0 * p,
            },
            NoiseKind::UniformDepolarizing => Rates {
                gate2: p,
                idle: p,
                idle_readout: 0.0,
                measure_flip: p,
                reset_flip: p,
            },
            NoiseKind::NoisyCnot => Rates {
                gate2: p,
                idle: 0.0,
                idle_readout: 0.0,
                measure_flip: 0.0,
                reset_flip: 0.0,
            },
        }
    }
}

fn flip_channel(basis: Basis, p: f64) -> Channel {
    match basis {
        Basis::Z => Channel::XError(p),
        Basis::X => Channel::ZError(p),
    }
}

fn push_noise(out: &mut Vec<Instruction>, channel: Channel, qubits: Vec<usize>) {
    if channel.probability() > 0.0 && !qubits.is_empty() {
        out.push(Instruction::Noise { channel, qubits });
    }
}

/// Insert the channels of `model` into a clean circuit.
pub fn annotate(circuit: &Circuit, model: &NoiseModel) -> Result<Circuit> {
    if circuit.is_noisy() {
        return Err(Error::AlreadyNoisy);
    }
    let rates = Rates::of(model);
    let mut out = Vec::with_capacity(circuit.instructions.len() * 2);
    let mut layer: Vec<&Instruction> = Vec::new();

    let flush = |layer: &mut Vec<&Instruction>, out: &mut Vec<Instruction>| {
        let mut active = vec![false; circuit.num_qubits];
        let mut readout = false;
        for ins in layer.iter() {
            match ins {
                Instruction::Reset { basis, qubits } => {
                    readout = true;
                    out.push((*ins).clone());
                    push_noise(out, flip_channel(*basis, rates.reset_flip), qubits.clone());
                    qubits.iter().for_each(|&q| active[q] = true);
                }
                Instruction::Measure { basis, qubits } => {
                    readout = true;
                    push_noise(out, flip_channel(*basis, rates.measure_flip), qubits.clone());
                    out.push((*ins).clone());
                    qubits.iter().for_each(|&q| active[q] = true);
                }
                Instruction::Gate { pairs, .. } => {
                    out.push((*ins).clone());
                    let qs: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
                    qs.iter().for_each(|&q| active[q] = true);
                    push_noise(out, Channel::Depolarize2(rates.gate2), qs);
                }
                _ => out.push((*ins).clone()),
            }
        }
        if !layer.is_empty() {
            let idle: Vec<usize> = (0..circuit.num_qubits).filter(|&q| !active[q]).collect();
            push_noise(out, Channel::Depolarize1(rates.idle), idle.clone());
            if readout {
                push_noise(out, Channel::Depolarize1(rates.idle_readout), idle);
            }
        }
        layer.clear();
    };

    for ins in &circuit.instructions {
        if matches!(ins, Instruction::Tick) {
            flush(&mut layer, &mut out);
            out.push(Instruction::Tick);
        } else {
            layer.push(ins);
        }
    }
    flush(&mut layer, &mut out);

    Ok(Circuit {
        instructions: out,
        ..circuit.clone()
    })
}
