//! Which faults make up minimal circuit-level logical errors.
//!
//! A *fractional* hook error is a boundary combination of several hooks and
//! data errors that shortcuts a logical although no single hook does.

use super::distance::{circuit_distance, Completer, MAX_WEIGHT};
use crate::circuit::{build_memory_circuit, Channel, Circuit, Instruction, Variant};
use crate::dem::{compile_dem, DetectorErrorModel, Fault, FaultClass};
use crate::error::{Error, Result};
use crate::lattice::{FaceKind, Patch};
use crate::noise::{annotate, NoiseModel};
use crate::schedule::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    /// Some source acts on data qubits only.
    Data,
    /// A two-qubit gate fault on the auxiliary of `face`, spreading to data.
    Hook { face: usize },
    /// Equivalent to a measurement, reset or idle fault on an auxiliary.
    Other,
}

fn is_data_source(f: &Fault, num_data: usize) -> bool {
    f.components().all(|(q, _)| q < num_data)
}

fn hook_face(circuit: &Circuit, patch: &Patch, f: &Fault) -> Option<usize> {
    let Instruction::Noise {
        channel: Channel::Depolarize2(_),
        ..
    } = circuit.instructions[f.instruction]
    else {
        return None;
    };
    let aux = f.components().map(|(q, _)| q).find(|&q| q >= patch.num_data())?;
    patch.faces().iter().find(|face| face.aux_qubit == aux).map(|face| face.id)
}

pub fn classify(circuit: &Circuit, patch: &Patch, class: &FaultClass) -> FaultKind {
    if class.sources.iter().any(|f| is_data_source(f, patch.num_data())) {
        return FaultKind::Data;
    }
    // A gate fault equivalent to a measurement or reset flip is not a hook.
    let gate_only = class.sources.iter().all(|f| {
        matches!(
            circuit.instructions[f.instruction],
            Instruction::Noise { channel: Channel::Depolarize2(_), .. }
        )
    });
    if !gate_only {
        return FaultKind::Other;
    }
    class
        .sources
        .iter()
        .find_map(|f| hook_face(circuit, patch, f))
        .map_or(FaultKind::Other, |face| FaultKind::Hook { face })
}

/// The memory circuit used for distance questions: `d` rounds, XZ, every
/// location noisy.
pub fn distance_model(patch: &Patch, schedule: &Schedule) -> Result<(Circuit, DetectorErrorModel)> {
    let d = patch.distance();
    let clean = build_memory_circuit(patch, schedule, d, Variant::XZ)?;
    let noisy = annotate(&clean, &NoiseModel::uniform(0.001)?)?;
    let dem = compile_dem(&noisy);
    Ok((noisy, dem))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedWitness {
    pub classes: Vec<usize>,
    pub kinds: Vec<FaultKind>,
}

impl ClassifiedWitness {
    pub fn weight(&self) -> usize {
        self.classes.len()
    }

    pub fn hooks(&self) -> usize {
        self.kinds.iter().filter(|k| matches!(k, FaultKind::Hook { .. })).count()
    }

    pub fn data(&self) -> usize {
        self.kinds.iter().filter(|k| **k == FaultKind::Data).count()
    }

    pub fn mixes_hooks_and_data(&self) -> bool {
        self.hooks() > 0 && self.data() > 0
    }

    /// Faces hosting the hooks.
    pub fn hook_faces(&self) -> Vec<usize> {
        self.kinds
            .iter()
            .filter_map(|k| match k {
                FaultKind::Hook { face } => Some(*face),
                _ => None,
            })
            .collect()
    }
}

/// A minimum-weight circuit-level logical of the distance model, classified.
pub fn find_fractional_hook_witness(patch: &Patch, schedule: &Schedule) -> Result<ClassifiedWitness> {
    let d = patch.distance();
    if !(5..=7).contains(&d) {
        return Err(Error::Unsupported(format!("fractional witness search needs d in 5..=7, got {d}")));
    }
    let (circuit, dem) = distance_model(patch, schedule)?;
    let found = circuit_distance(&dem, d.min(MAX_WEIGHT))?
        .ok_or_else(|| Error::Unsupported(format!("no logical of weight <= {}", d.min(MAX_WEIGHT))))?;
    let kinds = found
        .witness
        .iter()
        .map(|&k| classify(&circuit, patch, &dem.classes[k]))
        .collect();
    Ok(ClassifiedWitness {
        classes: found.witness,
        kinds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleHookShortcut {
    pub hook_class: usize,
    pub face: usize,
    pub corner: bool,
    /// Classes of the logical, hook included.
    pub witness: Vec<usize>,
}

/// For every hook class, search logicals built from that class and data
/// classes only, of total weight `<= max_weight`. Returns the ones found.
pub fn single_hook_shortcuts(patch: &Patch, schedule: &Schedule, max_weight: usize) -> Result<Vec<SingleHookShortcut>> {
    let (circuit, dem) = distance_model(patch, schedule)?;
    let kinds: Vec<FaultKind> = dem.classes.iter().map(|c| classify(&circuit, patch, c)).collect();
    let data: Vec<usize> = (0..kinds.len()).filter(|&k| kinds[k] == FaultKind::Data).collect();
    let completer = Completer::new(&DetectorErrorModel {
        num_detectors: dem.num_detectors,
        classes: data.iter().map(|&k| without_sources(&dem.classes[k])).collect(),
    });
    let mut out = Vec::new();
    for (h, kind) in kinds.iter().enumerate() {
        let FaultKind::Hook { face } = *kind else { continue };
        let hook = &dem.classes[h];
        // Data must supply the hook's detectors and the missing flip.
        let rest = if hook.detectors.is_empty() {
            hook.observable.then(Vec::new)
        } else {
            completer.complete(&hook.detectors, !hook.observable, max_weight.saturating_sub(1))
        };
        if let Some(rest) = rest {
            let mut witness: Vec<usize> = rest.iter().map(|&i| data[i]).collect();
            witness.push(h);
            witness.sort_unstable();
            out.push(SingleHookShortcut {
                hook_class: h,
                face,
                corner: patch.face(face).kind == FaceKind::Corner,
                witness,
            });
        }
    }
    Ok(out)
}

fn without_sources(c: &FaultClass) -> FaultClass {
    FaultClass {
        sources: Vec::new(),
        ..c.clone()
    }
}
