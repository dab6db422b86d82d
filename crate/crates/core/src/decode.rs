//! Most-likely-error-set decoding over a detector error model.
//!
//! [`Decoder`] runs a best-first search over fault-class sets. Each step
//! takes the unmatched detector with the fewest usable classes and branches
//! on those; the classes skipped by earlier siblings are blocked below, so each
//! set is generated at most once. The heuristic charges every unmatched
//! detector the cheapest share `cost / |detectors ∩ residual|` of an
//! unblocked class touching it. A completion must touch every unmatched
//! detector and pays each class at most once across the detectors it
//! covers, so this never overestimates.
//!
//! `beam` caps both the open states and the states evaluated. Past the
//! evaluation cap the search dives: states are taken by fewest unmatched detectors and
//! the first complete set is returned, flagged inexact.
//!
//! [`oracle_decode`] is the exhaustive reference for small models.

use std::collections::{BTreeSet, HashMap};

use crate::dem::DetectorErrorModel;
use crate::error::{Error, Result};

pub const DEFAULT_BEAM: usize = 10_000;

/// Classes with probability at or above 1/2 would have non-positive cost.
const MIN_COST: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub predicted_flip: bool,
    /// Chosen class ids, ascending.
    pub fault_set: Vec<usize>,
    pub cost: f64,
    /// The search finished within the beam: no state dropped, no dive.
    pub exact: bool,
}

/// Log-likelihood cost of a class firing.
pub fn class_cost(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::INFINITY;
    }
    (-(p / (1.0 - p)).ln()).max(MIN_COST)
}

/// Costs closer than this are ties; sums in a different order may differ in
/// the last bits.
fn tie_tolerance(c: f64) -> f64 {
    1e-9 * c.abs().max(1.0)
}

/// Lower cost wins; ties go to the lexicographically smaller sorted id list.
fn is_better(c: f64, set: &[usize], best: &Option<(f64, Vec<usize>)>) -> bool {
    match best {
        None => true,
        Some((bc, bs)) => c < bc - tie_tolerance(*bc) || (c <= bc + tie_tolerance(*bc) && set < bs.as_slice()),
    }
}

fn check_syndrome(dem: &DetectorErrorModel, syndrome: &[bool]) -> Result<()> {
    if syndrome.len() != dem.num_detectors {
        return Err(Error::SyndromeLength {
            got: syndrome.len(),
            expected: dem.num_detectors,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Decoder {
    num_detectors: usize,
    dets: Vec<Vec<usize>>,
    obs: Vec<bool>,
    cost: Vec<f64>,
    /// Per detector, incident classes by ascending (cost, id).
    incident: Vec<Vec<usize>>,
    /// Per detector, incident classes by ascending cost per detector.
    by_share: Vec<Vec<usize>>,
    /// Per detector, the cheapest cost per detector; the quick bound.
    floor: Vec<f64>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    /// 0 while searching exactly; the residual size once diving.
    rank: usize,
    f: OrdF64,
    chosen: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct Node {
    g: f64,
    residual: Vec<usize>,
    /// Classes forbidden in this subtree, one bit per class.
    blocked: Vec<u64>,
    /// The key already includes the full heuristic.
    evaluated: bool,
}

fn is_set(bits: &[u64], k: usize) -> bool {
    bits[k / 64] >> (k % 64) & 1 == 1
}

fn set(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

impl Decoder {
    pub fn new(dem: &DetectorErrorModel) -> Decoder {
        let nd = dem.num_detectors;
        let mut dets = Vec::with_capacity(dem.classes.len());
        for c in &dem.classes {
            let mut d = c.detectors.clone();
            d.sort_unstable();
            let d: Vec<usize> = d.chunk_by(|a, b| a == b).filter(|g| g.len() % 2 == 1).map(|g| g[0]).collect();
            dets.push(d);
        }
        let cost: Vec<f64> = dem.classes.iter().map(|c| class_cost(c.probability)).collect();
        let mut incident = vec![Vec::new(); nd];
        for (k, ds) in dets.iter().enumerate() {
            if cost[k].is_finite() {
                for &d in ds {
                    incident[d].push(k);
                }
            }
        }
        for inc in &mut incident {
            inc.sort_by(|&a, &b| cost[a].total_cmp(&cost[b]).then(a.cmp(&b)));
        }
        let share = |k: usize| cost[k] / dets[k].len() as f64;
        let by_share: Vec<Vec<usize>> = incident
            .iter()
            .map(|inc| {
                let mut v = inc.clone();
                v.sort_by(|&a, &b| share(a).total_cmp(&share(b)).then(a.cmp(&b)));
                v
            })
            .collect();
        let floor = by_share
            .iter()
            .map(|v: &Vec<usize>| v.first().map_or(f64::INFINITY, |&k| share(k)))
            .collect();
        Decoder {
            num_detectors: nd,
            dets,
            obs: dem.classes.iter().map(|c| c.observable).collect(),
            cost,
            incident,
            by_share,
            floor,
        }
    }

    pub fn num_detectors(&self) -> usize {
        self.num_detectors
    }

    /// `mark` is all false on entry and on return.
    fn heuristic(&self, residual: &[usize], blocked: &[u64], mark: &mut [bool]) -> f64 {
        for &d in residual {
            mark[d] = true;
        }
        let mut h = 0.0;
        for &d in residual {
            let mut best = f64::INFINITY;
            for &k in &self.by_share[d] {
                // a class never covers more residual detectors than it has
                if self.cost[k] / self.dets[k].len() as f64 >= best {
                    break;
                }
                if is_set(blocked, k) {
                    continue;
                }
                let hits = self.dets[k].iter().filter(|&&x| mark[x]).count();
                best = best.min(self.cost[k] / hits as f64);
            }
            h += best;
            if best.is_infinite() {
                break;
            }
        }
        for &d in residual {
            mark[d] = false;
        }
        h
    }

    fn finish(&self, chosen: Vec<usize>, cost: f64, exact: bool) -> DecodeResult {
        DecodeResult {
            predicted_flip: chosen.iter().fold(false, |a, &k| a ^ self.obs[k]),
            fault_set: chosen,
            cost,
            exact,
        }
    }

    /// Minimum-cost class set reproducing the fired detectors `fired`.
    pub fn decode_fired(&self, fired: &[usize], beam: usize) -> Result<DecodeResult> {
        let mut residual: Vec<usize> = fired.to_vec();
        residual.sort_unstable();
        residual.dedup();
        if residual.iter().any(|&d| d >= self.num_detectors) {
            return Err(Error::SyndromeLength {
                got: residual.last().unwrap() + 1,
                expected: self.num_detectors,
            });
        }
        let beam = beam.max(1);
        let mut open: BTreeSet<Key> = BTreeSet::new();
        let mut nodes: HashMap<Vec<usize>, Node> = HashMap::new();
        let words = self.cost.len().div_ceil(64);
        let mut mark = vec![false; self.num_detectors];
        let h0 = self.heuristic(&residual, &vec![0; words], &mut mark);
        if !h0.is_finite() {
            return Err(Error::NoSolution);
        }
        open.insert(Key {
            rank: 0,
            f: OrdF64(h0),
            chosen: Vec::new(),
        });
        nodes.insert(
            Vec::new(),
            Node {
                g: 0.0,
                residual,
                blocked: vec![0; words],
                evaluated: true,
            },
        );
        let mut exact = true;
        let mut diving = false;
        let mut evaluated = 0;
        let mut found: Option<(f64, Vec<usize>)> = None;
        while let Some(key) = open.pop_first() {
            if let Some((c, _)) = &found {
                // Past every tie of the first goal.
                if key.f.0 > c + tie_tolerance(*c) {
                    break;
                }
            }
            let mut node = nodes.remove(&key.chosen).expect("queued state has a node");
            if !node.evaluated {
                // Children are queued on a cheap bound; tighten it on first pop.
                node.evaluated = true;
                evaluated += 1;
                let f = node.g + self.heuristic(&node.residual, &node.blocked, &mut mark);
                if f > key.f.0 {
                    if f.is_finite() {
                        open.insert(Key {
                            rank: key.rank,
                            f: OrdF64(f),
                            chosen: key.chosen.clone(),
                        });
                        nodes.insert(key.chosen, node);
                    }
                    continue;
                }
            }
            if node.residual.is_empty() {
                let mut set = key.chosen;
                set.sort_unstable();
                if is_better(node.g, &set, &found) {
                    found = Some((node.g, set));
                }
                if diving {
                    break;
                }
                continue;
            }
            if evaluated >= beam && !diving {
                exact = false;
                if found.is_some() {
                    break;
                }
                // Out of budget: take the nearest completion instead.
                diving = true;
                open = std::mem::take(&mut open)
                    .into_iter()
                    .map(|k| Key {
                        rank: nodes[&k.chosen].residual.len(),
                        ..k
                    })
                    .collect();
            }
            // Every completion touches every residual detector; branch on
            // the one with the fewest open choices.
            let open_choices = |d: usize| self.incident[d].iter().filter(|&&k| !is_set(&node.blocked, k)).count();
            let d0 = *node.residual.iter().min_by_key(|&&d| open_choices(d)).unwrap();
            // Chosen classes are blocked too: a class is used at most once.
            let mut blocked = node.blocked;
            for &k in &self.incident[d0] {
                if is_set(&blocked, k) {
                    continue;
                }
                let mut residual = node.residual.clone();
                for &d in &self.dets[k] {
                    match residual.binary_search(&d) {
                        Ok(i) => {
                            residual.remove(i);
                        }
                        Err(i) => residual.insert(i, d),
                    }
                }
                // `k` itself is fixed below, and so are the siblings before it.
                set(&mut blocked, k);
                let g = node.g + self.cost[k];
                let quick: f64 = residual.iter().map(|&d| self.floor[d]).sum();
                if quick.is_finite() {
                    let mut chosen = key.chosen.clone();
                    chosen.push(k);
                    open.insert(Key {
                        rank: if diving { residual.len() } else { 0 },
                        f: OrdF64((g + quick).max(key.f.0)),
                        chosen: chosen.clone(),
                    });
                    nodes.insert(
                        chosen,
                        Node {
                            g,
                            residual,
                            blocked: blocked.clone(),
                            evaluated: false,
                        },
                    );
                }
                // Later siblings cover the sets without `k`: it stays set.
            }
            while open.len() > beam {
                let worst = open.pop_last().unwrap();
                nodes.remove(&worst.chosen);
                exact = false;
            }
        }
        found.map(|(c, set)| self.finish(set, c, exact)).ok_or(Error::NoSolution)
    }

    pub fn decode(&self, syndrome: &[bool], beam: usize) -> Result<DecodeResult> {
        if syndrome.len() != self.num_detectors {
            return Err(Error::SyndromeLength {
                got: syndrome.len(),
                expected: self.num_detectors,
            });
        }
        let fired: Vec<usize> = (0..syndrome.len()).filter(|&d| syndrome[d]).collect();
        self.decode_fired(&fired, beam)
    }
}

/// One-shot [`Decoder::decode`].
pub fn decode(dem: &DetectorErrorModel, syndrome: &[bool], beam: usize) -> Result<DecodeResult> {
    check_syndrome(dem, syndrome)?;
    Decoder::new(dem).decode(syndrome, beam)
}

pub const ORACLE_MAX_CLASSES: usize = 2000;
pub const ORACLE_MAX_WEIGHT: usize = 3;

/// Exhaustive minimum-cost search over all class sets of size `<= w_max`.
/// Ties (up to rounding) go to the lexicographically smallest id list, as in
/// [`Decoder`].
pub fn oracle_decode(dem: &DetectorErrorModel, syndrome: &[bool], w_max: usize) -> Result<DecodeResult> {
    check_syndrome(dem, syndrome)?;
    let n = dem.classes.len();
    if n > ORACLE_MAX_CLASSES || w_max > ORACLE_MAX_WEIGHT {
        return Err(Error::Unsupported(format!(
            "oracle limited to {ORACLE_MAX_CLASSES} classes and weight {ORACLE_MAX_WEIGHT}"
        )));
    }
    let words = dem.num_detectors.div_ceil(64).max(1);
    let pack = |ds: &[usize]| {
        let mut w = vec![0u64; words];
        for &d in ds {
            w[d / 64] ^= 1 << (d % 64);
        }
        w
    };
    let target = pack(&(0..syndrome.len()).filter(|&d| syndrome[d]).collect::<Vec<_>>());
    let sigs: Vec<Vec<u64>> = dem.classes.iter().map(|c| pack(&c.detectors)).collect();
    let cost: Vec<f64> = dem.classes.iter().map(|c| class_cost(c.probability)).collect();
    let xor = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x ^ y).collect::<Vec<u64>>();

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut offer = |c: f64, set: Vec<usize>| {
        if is_better(c, &set, &best) {
            best = Some((c, set));
        }
    };
    if target.iter().all(|&w| w == 0) {
        offer(0.0, Vec::new());
    }
    // Index single signatures so the last class of each set is a lookup.
    let mut by_sig: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for (k, s) in sigs.iter().enumerate() {
        if cost[k].is_finite() {
            by_sig.entry(s.as_slice()).or_default().push(k);
        }
    }
    let mut prefix: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        residual: &[u64],
        depth_left: usize,
        g: f64,
        prefix: &mut Vec<usize>,
        sigs: &[Vec<u64>],
        cost: &[f64],
        by_sig: &HashMap<&[u64], Vec<usize>>,
        xor: &dyn Fn(&[u64], &[u64]) -> Vec<u64>,
        offer: &mut dyn FnMut(f64, Vec<usize>),
    ) {
        if let Some(ks) = by_sig.get(residual) {
            for &k in ks.iter().filter(|&&k| k >= start) {
                let mut set = prefix.clone();
                set.push(k);
                offer(g + cost[k], set);
            }
        }
        if depth_left < 2 {
            return;
        }
        for k in start..sigs.len() {
            if !cost[k].is_finite() {
                continue;
            }
            prefix.push(k);
            let r = xor(residual, &sigs[k]);
            rec(k + 1, &r, depth_left - 1, g + cost[k], prefix, sigs, cost, by_sig, xor, offer);
            prefix.pop();
        }
    }
    if w_max >= 1 {
        rec(0, &target, w_max, 0.0, &mut prefix, &sigs, &cost, &by_sig, &xor, &mut offer);
    }
    let (c, set) = best.ok_or(Error::NotFoundWithin(w_max))?;
    Ok(DecodeResult {
        predicted_flip: set.iter().fold(false, |a, &k| a ^ dem.classes[k].observable),
        fault_set: set,
        cost: c,
        exact: true,
    })
}
