//! Exact circuit-level distance of a detector error model.
//!
//! We look for the smallest set of fault classes whose signatures XOR to
//! "no detector, observable flipped". Iterative deepening over the weight:
//!
//! 1. the set contains an observable-flipping class, so branch on those;
//! 2. while detectors remain unmatched, some unchosen class must touch the
//!    lowest one, so branch on its incident classes;
//! 3. the last one or two classes are not searched but looked up: residual
//!    signatures are probed against hash tables of all single classes and all
//!    detector-sharing class pairs (the meet-in-the-middle step).
//!
//! A disjoint final pair is still found by branching, restricted to classes
//! whose detectors lie inside the residual.

use std::collections::HashMap;

use rayon::prelude::*;

use super::DistanceResult;
use crate::dem::DetectorErrorModel;
use crate::error::{Error, Result};

/// Largest weight [`circuit_distance`] accepts.
pub const MAX_WEIGHT: usize = 6;

type Sig = (Vec<u32>, bool);

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

struct Index {
    sigs: Vec<Sig>,
    incident: Vec<Vec<usize>>,
    singles: HashMap<Sig, usize>,
    pairs: HashMap<Sig, (usize, usize)>,
    max_deg: usize,
}

impl Index {
    fn new(dem: &DetectorErrorModel, with_pairs: bool) -> Index {
        let sigs: Vec<Sig> = dem
            .classes
            .iter()
            .map(|c| {
                let mut d: Vec<u32> = c.detectors.iter().map(|&d| d as u32).collect();
                d.sort_unstable();
                // repeated detectors cancel
                let d = d.chunk_by(|a, b| a == b).filter(|g| g.len() % 2 == 1).map(|g| g[0]).collect();
                (d, c.observable)
            })
            .collect();
        let mut incident = vec![Vec::new(); dem.num_detectors];
        for (k, (ds, _)) in sigs.iter().enumerate() {
            for &d in ds {
                incident[d as usize].push(k);
            }
        }
        let mut singles = HashMap::new();
        for (k, s) in sigs.iter().enumerate() {
            singles.entry(s.clone()).or_insert(k);
        }
        let mut pairs = HashMap::new();
        if with_pairs {
            let found: Vec<Vec<(Sig, (usize, usize))>> = incident
                .par_iter()
                .map(|cs| {
                    let mut v = Vec::new();
                    for (x, &a) in cs.iter().enumerate() {
                        for &b in &cs[x + 1..] {
                            let s = (sym_diff(&sigs[a].0, &sigs[b].0), sigs[a].1 ^ sigs[b].1);
                            v.push((s, (a, b)));
                        }
                    }
                    v
                })
                .collect();
            for (s, ab) in found.into_iter().flatten() {
                pairs.entry(s).or_insert(ab);
            }
        }
        let max_deg = sigs.iter().map(|s| s.0.len()).max().unwrap_or(0);
        Index {
            sigs,
            incident,
            singles,
            pairs,
            max_deg,
        }
    }

    /// Complete `chosen` with at most `budget` more classes so that the
    /// residual `(dets, obs)` becomes empty.
    fn search(&self, dets: &[u32], obs: bool, budget: usize, chosen: &mut Vec<usize>) -> bool {
        if dets.is_empty() && !obs {
            return true;
        }
        // An observable-only residual would be a lighter witness on its own,
        // already excluded by the deepening.
        if budget == 0 || dets.is_empty() || dets.len() > budget * self.max_deg {
            return false;
        }
        let key = (dets.to_vec(), obs);
        if let Some(&c) = self.singles.get(&key) {
            if !chosen.contains(&c) {
                chosen.push(c);
                return true;
            }
        }
        if budget == 1 {
            return false;
        }
        if let Some(&(a, b)) = self.pairs.get(&key) {
            if !chosen.contains(&a) && !chosen.contains(&b) {
                chosen.extend([a, b]);
                return true;
            }
        }
        for &c in &self.incident[dets[0] as usize] {
            if chosen.contains(&c) || (budget == 2 && !is_subset(&self.sigs[c].0, dets)) {
                continue;
            }
            chosen.push(c);
            let next = sym_diff(dets, &self.sigs[c].0);
            if self.search(&next, obs ^ self.sigs[c].1, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Minimum number of fault classes producing an undetected observable flip,
/// or `None` when every such set is heavier than `max_weight`.
pub fn circuit_distance(dem: &DetectorErrorModel, max_weight: usize) -> Result<Option<DistanceResult<usize>>> {
    if max_weight > MAX_WEIGHT {
        return Err(Error::Unsupported(format!(
            "max weight {max_weight} exceeds {MAX_WEIGHT}"
        )));
    }
    Ok(min_logical_set(dem, max_weight))
}

/// [`circuit_distance`] without the weight cap. Cheap on sparse models
/// such as code-capacity ones, where a class touches at most three
/// detectors.
pub fn min_logical_set(dem: &DetectorErrorModel, max_weight: usize) -> Option<DistanceResult<usize>> {
    let idx = Index::new(dem, max_weight >= 2);
    let starts: Vec<usize> = (0..idx.sigs.len()).filter(|&k| idx.sigs[k].1).collect();
    for w in 1..=max_weight {
        let hit = starts.par_iter().find_map_first(|&c| {
            let mut chosen = vec![c];
            idx.search(&idx.sigs[c].0, false, w - 1, &mut chosen).then_some(chosen)
        });
        if let Some(mut witness) = hit {
            witness.sort_unstable();
            return Some(DistanceResult {
                value: witness.len(),
                witness,
            });
        }
    }
    None
}

/// Reusable index for completing a partial fault set into a logical.
pub struct Completer {
    idx: Index,
}

impl Completer {
    pub fn new(dem: &DetectorErrorModel) -> Completer {
        Completer { idx: Index::new(dem, true) }
    }

    /// Fewest classes (at most `budget`) whose signatures XOR to exactly
    /// `(detectors, observable)`, by iterative deepening.
    pub fn complete(&self, detectors: &[usize], observable: bool, budget: usize) -> Option<Vec<usize>> {
        let mut dets: Vec<u32> = detectors.iter().map(|&d| d as u32).collect();
        dets.sort_unstable();
        let dets: Vec<u32> = dets.chunk_by(|a, b| a == b).filter(|g| g.len() % 2 == 1).map(|g| g[0]).collect();
        if dets.is_empty() {
            // An observable-only target needs a logical of its own; not our job.
            return (!observable).then(Vec::new);
        }
        (1..=budget).find_map(|w| {
            let mut chosen = Vec::new();
            self.idx.search(&dets, observable, w, &mut chosen).then(|| {
                chosen.sort_unstable();
                chosen
            })
        })
    }
}

/// Whether the classes `set` XOR to zero detectors with the observable
/// flipped.
pub fn is_logical_witness(dem: &DetectorErrorModel, set: &[usize]) -> bool {
    let mut acc = crate::dem::Signature::zero(dem.num_detectors + 1);
    for &k in set {
        acc.xor(&dem.signature(k));
    }
    acc.ones().eq([dem.num_detectors])
}
