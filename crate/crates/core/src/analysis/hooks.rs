use std::collections::HashMap;

use rayon::prelude::*;

use super::DistanceResult;
use crate::error::{Error, Result};
use crate::lattice::{syndrome_bfs, Patch, MAX_BFS_FACES};
use crate::schedule::Schedule;

/// Pauli type of the stabilizer being measured when the hook occurs. An X
/// round spreads X faults from the auxiliary onto data, a Z round Z faults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HookPauli {
    X,
    Z,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookError {
    pub face: usize,
    pub pauli: HookPauli,
    /// The fault sits after this many of the face's gates.
    pub offset: usize,
    /// Minimal-weight data support, modulo the face stabilizer.
    pub induced_error: Vec<usize>,
}

/// Generator used in a hook-augmented witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Data(usize),
    /// Index into the hook list passed in.
    Hook(usize),
}

/// Every non-trivial hook of every face, for both Pauli types.
///
/// A fault after gate `k` spreads onto the data touched after it; that is
/// stabilizer-equivalent to the data touched before it, and the lighter of
/// the two is kept (the later part on ties). Hexagons give offsets 2, 3, 4
/// with weights 2, 3, 2; four-qubit plaquettes only offset 2.
pub fn propagate_hooks(patch: &Patch, schedule: &Schedule) -> Vec<HookError> {
    let mut out = Vec::new();
    for pauli in [HookPauli::X, HookPauli::Z] {
        for face in patch.faces() {
            let order: Vec<usize> = schedule.face_gates(face).iter().map(|g| g.data).collect();
            let w = order.len();
            for k in 2..=w - 2 {
                let (prefix, suffix) = order.split_at(k);
                let induced = if prefix.len() < suffix.len() { prefix } else { suffix };
                out.push(HookError {
                    face: face.id,
                    pauli,
                    offset: k,
                    induced_error: induced.to_vec(),
                });
            }
        }
    }
    out
}

fn check_size(patch: &Patch) -> Result<()> {
    if patch.distance() > 7 || patch.num_faces() > MAX_BFS_FACES {
        return Err(Error::DistanceTooLarge {
            distance: patch.distance(),
            max: 7,
            what: "hook-augmented distance",
        });
    }
    Ok(())
}

/// Minimum number of generators (single data errors and whole hooks, each
/// of unit cost) forming an X logical. Hooks of either Pauli type are used
/// by support only; the code is self-dual.
pub fn hook_augmented_distance(patch: &Patch, hooks: &[HookError]) -> Result<DistanceResult<Generator>> {
    check_size(patch)?;
    let n = patch.num_data();
    let mut gens: Vec<u64> = (0..n).map(|q| patch.syndrome_word(q)).collect();
    gens.extend(hooks.iter().map(|h| patch.support_word(&h.induced_error)));
    let (value, witness) = syndrome_bfs(patch.num_faces(), &gens).unwrap_or((usize::MAX, Vec::new()));
    let witness = witness
        .into_iter()
        .map(|g| if g < n { Generator::Data(g) } else { Generator::Hook(g - n) })
        .collect();
    Ok(DistanceResult { value, witness })
}

/// Indices of hooks that lower the distance when added alone.
pub fn malign_hooks(patch: &Patch, hooks: &[HookError]) -> Result<Vec<usize>> {
    let oracle = SingleHookOracle::new(patch)?;
    Ok(hooks
        .iter()
        .enumerate()
        .filter(|(_, h)| oracle.is_malign(&h.induced_error))
        .map(|(i, _)| i)
        .collect())
}

/// Answers "does this single correlated error shorten a logical?" in one
/// table scan.
///
/// Holds BFS distances from the trivial state under data generators only.
/// The syndrome graph is a Cayley graph, so the distance between states `s`
/// and `t` is `dist[s ^ t]`; a correlated error with word `g` is malign iff
/// `dist[s] + 1 + dist[s ^ g ^ logical] < d` for some state `s`.
pub struct SingleHookOracle {
    dist: Vec<u8>,
    logical: u64,
    distance: usize,
    cache: HashMap<u64, bool>,
    words: Vec<u64>,
}

impl SingleHookOracle {
    pub fn new(patch: &Patch) -> Result<Self> {
        check_size(patch)?;
        let states = 1usize << (patch.num_faces() + 1);
        let gens: Vec<u64> = (0..patch.num_data()).map(|q| patch.syndrome_word(q)).collect();
        let mut dist = vec![u8::MAX; states];
        dist[0] = 0;
        let mut frontier = vec![0u64];
        let mut level = 0u8;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for s in frontier {
                for g in &gens {
                    let t = (s ^ g) as usize;
                    if dist[t] == u8::MAX {
                        dist[t] = level;
                        next.push(t as u64);
                    }
                }
            }
            frontier = next;
        }
        let words: Vec<u64> = gens;
        let mut oracle = SingleHookOracle {
            dist,
            logical: 1 << patch.num_faces(),
            distance: patch.distance(),
            cache: HashMap::new(),
            words,
        };
        // every pair and triple inside a hexagon
        let mut subsets = Vec::new();
        for f in patch.faces().iter().filter(|f| patch.is_interior(f.id)) {
            let q = f.data_slots();
            for a in 0..6 {
                for b in a + 1..6 {
                    subsets.push(oracle.word(&[q[a], q[b]]));
                    for c in b + 1..6 {
                        subsets.push(oracle.word(&[q[a], q[b], q[c]]));
                    }
                }
            }
        }
        subsets.sort_unstable();
        subsets.dedup();
        let results: Vec<(u64, bool)> = subsets.par_iter().map(|&w| (w, oracle.scan(w))).collect();
        oracle.cache.extend(results);
        Ok(oracle)
    }

    fn word(&self, qubits: &[usize]) -> u64 {
        qubits.iter().fold(0, |acc, &q| acc ^ self.words[q])
    }

    fn scan(&self, g: u64) -> bool {
        let shift = g ^ self.logical;
        let bound = self.distance as u32;
        self.dist
            .iter()
            .enumerate()
            .any(|(s, &a)| a as u32 + 1 + self.dist[s ^ shift as usize] as u32 <= bound - 1)
    }

    pub fn is_malign(&self, qubits: &[usize]) -> bool {
        let w = self.word(qubits);
        match self.cache.get(&w) {
            Some(&m) => m,
            None => self.scan(w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_patch, FaceKind};
    use crate::schedule::{all_orders, default_schedule, Schedule};

    #[test]
    fn hexagon_hook_weights() {
        let p = build_patch(5).unwrap();
        let s = default_schedule();
        let hooks = propagate_hooks(&p, &s);
        for h in &hooks {
            let f = p.face(h.face);
            let gates: Vec<usize> = s.face_gates(f).iter().map(|g| g.data).collect();
            match (f.weight(), h.offset) {
                (6, 2) => assert_eq!(h.induced_error, gates[..2]),
                (6, 3) => assert_eq!(h.induced_error, gates[3..]),
                (6, 4) => assert_eq!(h.induced_error, gates[4..]),
                (4, 2) => assert_eq!(h.induced_error, gates[2..]),
                other => panic!("unexpected hook {other:?}"),
            }
        }
        let bulk = p.faces().iter().filter(|f| f.weight() == 6).count();
        let boundary = p.num_faces() - bulk;
        assert_eq!(hooks.len(), 2 * (3 * bulk + boundary));
    }

    #[test]
    fn trapezoid_hooks_lie_on_diagonals() {
        let p = build_patch(7).unwrap();
        for h in propagate_hooks(&p, &default_schedule()) {
            let f = p.face(h.face);
            if f.kind == FaceKind::Trapezoid {
                let (a, b) = (h.induced_error[0], h.induced_error[1]);
                assert!(!p.is_edge(a, b), "hook on a side of face {}", f.id);
            }
        }
    }

    #[test]
    fn no_hooks_reduces_to_code_distance() {
        for d in [3, 5, 7] {
            let p = build_patch(d).unwrap();
            assert_eq!(hook_augmented_distance(&p, &[]).unwrap().value, d);
        }
    }

    #[test]
    fn rejects_large_patches() {
        let p = build_patch(9).unwrap();
        assert!(hook_augmented_distance(&p, &[]).is_err());
    }

    #[test]
    fn witness_is_a_logical() {
        let p = build_patch(5).unwrap();
        let hooks = propagate_hooks(&p, &Schedule::uniform([0, 1, 2, 3, 4, 5]).unwrap());
        let r = hook_augmented_distance(&p, &hooks).unwrap();
        let word = r.witness.iter().fold(0u64, |acc, g| {
            acc ^ match *g {
                Generator::Data(q) => p.syndrome_word(q),
                Generator::Hook(i) => p.support_word(&hooks[i].induced_error),
            }
        });
        assert_eq!(word, 1 << p.num_faces());
        assert_eq!(r.witness.len(), r.value);
    }

    #[test]
    fn oracle_matches_bfs_for_single_hooks() {
        let p = build_patch(5).unwrap();
        let oracle = SingleHookOracle::new(&p).unwrap();
        for o in all_orders().into_iter().step_by(37) {
            let hooks = propagate_hooks(&p, &Schedule::uniform(o).unwrap());
            for h in &hooks {
                let bfs = hook_augmented_distance(&p, std::slice::from_ref(h)).unwrap().value;
                assert_eq!(oracle.is_malign(&h.induced_error), bfs < 5, "{h:?}");
            }
        }
    }

    #[test]
    fn adding_hooks_never_raises_distance() {
        let p = build_patch(5).unwrap();
        let hooks = propagate_hooks(&p, &Schedule::uniform([3, 1, 4, 0, 5, 2]).unwrap());
        let mut last = usize::MAX;
        for k in 0..=hooks.len() {
            let v = hook_augmented_distance(&p, &hooks[..k]).unwrap().value;
            assert!(v <= last);
            last = v;
        }
    }
}
