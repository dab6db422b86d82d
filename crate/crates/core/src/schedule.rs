//! Per-color two-qubit gate schedules for single-auxiliary syndrome extraction.
//!
//! A schedule assigns each plaquette color a permutation of the six hexagon
//! slots: at gate step `t` a plaquette of color `c` couples its auxiliary to
//! the data qubit in slot `order[c][t]`. Boundary plaquettes use the order of
//! their color with the absent slots dropped, so they idle on those steps.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::analysis::hooks::{hook_augmented_distance, propagate_hooks, HookError, SingleHookOracle};
use crate::error::{Error, Result};
use crate::lattice::{Color, Face, FaceKind, Patch};

pub type Order = [u8; 6];

/// Gate order for each of the three plaquette colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    orders: [Order; 3],
}

/// One two-qubit gate of a plaquette's extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceGate {
    /// Gate step in `0..6`.
    pub step: usize,
    pub slot: usize,
    pub data: usize,
}

fn check_order(order: &Order) -> Result<()> {
    let mut seen = [false; 6];
    for &s in order {
        if s >= 6 || seen[s as usize] {
            return Err(Error::InvalidSchedule(format!("{order:?} is not a permutation of 0..6")));
        }
        seen[s as usize] = true;
    }
    Ok(())
}

/// All 720 slot orders in lexicographic order.
pub fn all_orders() -> Vec<Order> {
    let mut out = Vec::with_capacity(720);
    let mut cur = [0u8; 6];
    fn rec(depth: usize, used: &mut [bool; 6], cur: &mut Order, out: &mut Vec<Order>) {
        if depth == 6 {
            out.push(*cur);
            return;
        }
        for s in 0..6 {
            if !used[s] {
                used[s] = true;
                cur[depth] = s as u8;
                rec(depth + 1, used, cur, out);
                used[s] = false;
            }
        }
    }
    rec(0, &mut [false; 6], &mut cur, &mut out);
    out
}

impl Schedule {
    pub fn new(red: Order, green: Order, blue: Order) -> Result<Schedule> {
        for o in [&red, &green, &blue] {
            check_order(o)?;
        }
        Ok(Schedule {
            orders: [red, green, blue],
        })
    }

    /// The same order on every color.
    pub fn uniform(order: Order) -> Result<Schedule> {
        Schedule::new(order, order, order)
    }

    pub fn order(&self, color: Color) -> Order {
        self.orders[color.index()]
    }

    pub fn is_uniform(&self) -> bool {
        self.orders[0] == self.orders[1] && self.orders[1] == self.orders[2]
    }

    /// Gates of `face` in time order, skipping absent slots.
    pub fn face_gates(&self, face: &Face) -> Vec<FaceGate> {
        self.order(face.color)
            .iter()
            .enumerate()
            .filter_map(|(step, &slot)| {
                face.slots[slot as usize].map(|data| FaceGate {
                    step,
                    slot: slot as usize,
                    data,
                })
            })
            .collect()
    }

    /// Step at which a color visits `slot`.
    pub fn step_of(&self, color: Color, slot: usize) -> usize {
        self.order(color).iter().position(|&s| s as usize == slot).unwrap()
    }

    /// `S <color> <p0> ... <p5>` per color.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in Color::ALL {
            let _ = write!(out, "S {c}");
            for s in self.order(c) {
                let _ = write!(out, " {s}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Schedule> {
        let mut orders: [Option<Order>; 3] = [None; 3];
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 8 || toks[0] != "S" {
                return Err(perr(format!("expected 'S <color> p0..p5', got '{line}'")));
            }
            let color: Color = toks[1].parse().map_err(|_| perr(format!("bad color '{}'", toks[1])))?;
            let mut order = [0u8; 6];
            for (k, t) in toks[2..].iter().enumerate() {
                order[k] = t.parse().map_err(|_| perr(format!("bad slot '{t}'")))?;
            }
            check_order(&order)?;
            orders[color.index()] = Some(order);
        }
        match orders {
            [Some(r), Some(g), Some(b)] => Schedule::new(r, g, b),
            _ => Err(Error::Parse {
                line: 0,
                msg: "schedule must list all three colors".into(),
            }),
        }
    }

    /// Resolve a schedule source: `default`, `uniform:<six digits>`, or a
    /// path to a schedule text file.
    pub fn from_source(source: &str) -> Result<Schedule> {
        if source == "default" {
            return Ok(default_schedule());
        }
        if let Some(perm) = source.strip_prefix("uniform:") {
            let digits: Vec<u8> = perm
                .chars()
                .filter(|c| !matches!(c, ',' | ' '))
                .map(|c| c.to_digit(10).map(|d| d as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidSchedule(format!("bad uniform order '{perm}'")))?;
            let order: Order = digits
                .try_into()
                .map_err(|_| Error::InvalidSchedule(format!("uniform order needs six slots: '{perm}'")))?;
            return Schedule::uniform(order);
        }
        let text = std::fs::read_to_string(source)?;
        Schedule::from_text(&text)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |o: &Order| o.iter().map(|s| s.to_string()).collect::<String>();
        write!(
            f,
            "red {} / green {} / blue {}",
            show(&self.orders[0]),
            show(&self.orders[1]),
            show(&self.orders[2])
        )
    }
}

/// The repository's pinned color-dependent schedule: the first lexicographic
/// (red, green, blue) result of [`search_schedules`] with every constraint on
/// the distance-7 patch.
pub fn default_schedule() -> Schedule {
    Schedule {
        orders: DEFAULT_ORDERS,
    }
}

const DEFAULT_ORDERS: [Order; 3] = [[0, 4, 2, 1, 3, 5], [1, 3, 5, 0, 2, 4], [2, 0, 4, 1, 3, 5]];

/// Which schedule properties to require.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraints {
    pub conflict_free: bool,
    pub bulk_benign: bool,
    pub boundary_diagonal: bool,
}

impl Constraints {
    pub const ALL: Constraints = Constraints {
        conflict_free: true,
        bulk_benign: true,
        boundary_diagonal: true,
    };
    pub const CONFLICT_ONLY: Constraints = Constraints {
        conflict_free: true,
        bulk_benign: false,
        boundary_diagonal: false,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Two plaquettes touch `qubit` at the same gate step.
    Conflict { step: usize, qubit: usize, faces: (usize, usize) },
    /// A bulk hook that lowers the hook-augmented distance on its own.
    MalignHook { face: usize, offset: usize, qubits: Vec<usize>, distance: usize },
    /// Bulk hooks that only lower the distance in combination.
    MalignHookSet { distance: usize },
    /// The weight-2 hook of a trapezoid lies on one of its sides.
    BoundaryEdgeHook { face: usize, qubits: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Conflict { step, qubit, faces } => {
                write!(f, "step {step}: qubit {qubit} touched by faces {} and {}", faces.0, faces.1)
            }
            Violation::MalignHook {
                face,
                offset,
                qubits,
                distance,
            } => write!(f, "face {face} hook after gate {offset} on {qubits:?} gives distance {distance}"),
            Violation::MalignHookSet { distance } => {
                write!(f, "bulk hooks jointly give distance {distance}")
            }
            Violation::BoundaryEdgeHook { face, qubits } => {
                write!(f, "face {face} weight-2 hook on side ({}, {})", qubits.0, qubits.1)
            }
        }
    }
}

/// Outcome of checking a schedule against a patch. Properties that were not
/// checked are reported as satisfied.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleReport {
    pub conflict_free: bool,
    pub bulk_benign: bool,
    pub boundary_diagonal: bool,
    pub witnesses: Vec<Violation>,
}

impl ScheduleReport {
    pub fn ok(&self) -> bool {
        self.conflict_free && self.bulk_benign && self.boundary_diagonal
    }
}

/// Scan every gate step for data qubits touched by two plaquettes.
pub fn check_conflicts(patch: &Patch, schedule: &Schedule) -> ScheduleReport {
    let witnesses = conflict_witnesses(patch, schedule);
    ScheduleReport {
        conflict_free: witnesses.is_empty(),
        bulk_benign: true,
        boundary_diagonal: true,
        witnesses,
    }
}

fn conflict_witnesses(patch: &Patch, schedule: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    for step in 0..6 {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for face in patch.faces() {
            let slot = schedule.order(face.color)[step] as usize;
            if let Some(q) = face.slots[slot] {
                if let Some(&other) = owner.get(&q) {
                    out.push(Violation::Conflict {
                        step,
                        qubit: q,
                        faces: (other, face.id),
                    });
                } else {
                    owner.insert(q, face.id);
                }
            }
        }
    }
    out
}

/// The pair of slots at which a trapezoid's weight-2 hook acts.
fn trapezoid_hook_slots(schedule: &Schedule, face: &Face) -> (usize, usize) {
    let gates = schedule.face_gates(face);
    debug_assert_eq!(gates.len(), 4);
    (gates[2].slot, gates[3].slot)
}

/// The diagonals of a trapezoid join slots two apart. Adjacent slots share a
/// honeycomb edge, and opposite slots span the base along the boundary; the
/// hook pair is stabilizer-equivalent to the complementary pair, which is an
/// edge in that case.
fn is_diagonal(a: usize, b: usize) -> bool {
    let d = (a + 6 - b) % 6;
    d == 2 || d == 4
}

fn diagonal_witnesses(patch: &Patch, schedule: &Schedule) -> Vec<Violation> {
    patch
        .faces()
        .iter()
        .filter(|f| f.kind == FaceKind::Trapezoid)
        .filter_map(|f| {
            let (a, b) = trapezoid_hook_slots(schedule, f);
            (!is_diagonal(a, b)).then(|| Violation::BoundaryEdgeHook {
                face: f.id,
                qubits: (f.slots[a].unwrap(), f.slots[b].unwrap()),
            })
        })
        .collect()
}

/// Weight-2 X hooks of the interior hexagons. The mid-schedule weight-3
/// hook is excluded: it never shortens a logical on its own.
pub fn bulk_hooks(patch: &Patch, schedule: &Schedule) -> Vec<HookError> {
    propagate_hooks(patch, schedule)
        .into_iter()
        .filter(|h| h.pauli == crate::analysis::hooks::HookPauli::X)
        .filter(|h| patch.is_interior(h.face) && h.induced_error.len() == 2)
        .collect()
}

fn benign_witnesses(patch: &Patch, schedule: &Schedule) -> Result<Vec<Violation>> {
    let hooks = bulk_hooks(patch, schedule);
    let all = hook_augmented_distance(patch, &hooks)?;
    if all.value >= patch.distance() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for h in &hooks {
        let single = hook_augmented_distance(patch, std::slice::from_ref(h))?;
        if single.value < patch.distance() {
            out.push(Violation::MalignHook {
                face: h.face,
                offset: h.offset,
                qubits: h.induced_error.clone(),
                distance: single.value,
            });
        }
    }
    if out.is_empty() {
        out.push(Violation::MalignHookSet { distance: all.value });
    }
    Ok(out)
}

/// Check every constraint; fails only when the patch is too large for the
/// hook-augmented distance search.
pub fn check_schedule(patch: &Patch, schedule: &Schedule, constraints: Constraints) -> Result<ScheduleReport> {
    let mut report = ScheduleReport {
        conflict_free: true,
        bulk_benign: true,
        boundary_diagonal: true,
        witnesses: Vec::new(),
    };
    if constraints.conflict_free {
        let w = conflict_witnesses(patch, schedule);
        report.conflict_free = w.is_empty();
        report.witnesses.extend(w);
    }
    if constraints.boundary_diagonal {
        let w = diagonal_witnesses(patch, schedule);
        report.boundary_diagonal = w.is_empty();
        report.witnesses.extend(w);
    }
    if constraints.bulk_benign {
        let w = benign_witnesses(patch, schedule)?;
        report.bulk_benign = w.is_empty();
        report.witnesses.extend(w);
    }
    Ok(report)
}

/// Slot pairs `(color a, slot a, color b, slot b)` that land on a shared data
/// qubit somewhere on the patch. Two colors conflict iff some relation has
/// equal steps.
fn shared_slot_relations(patch: &Patch) -> BTreeSet<(usize, usize, usize, usize)> {
    let mut rel = BTreeSet::new();
    for q in 0..patch.num_data() {
        let fs = patch.faces_of(q);
        for (i, &f) in fs.iter().enumerate() {
            for &g in &fs[i + 1..] {
                let (ff, gg) = (patch.face(f), patch.face(g));
                let a = (ff.color.index(), ff.slot_of(q).unwrap());
                let b = (gg.color.index(), gg.slot_of(q).unwrap());
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                rel.insert((a.0, a.1, b.0, b.1));
            }
        }
    }
    rel
}

fn inverse(order: &Order) -> [usize; 6] {
    let mut inv = [0; 6];
    for (t, &s) in order.iter().enumerate() {
        inv[s as usize] = t;
    }
    inv
}

/// Exhaustive search over (red, green, blue) order triples in lexicographic
/// order, returning at most `limit` schedules that satisfy `constraints`.
///
/// Conflicts are pruned pairwise before the third color is chosen; bulk
/// benignity is screened hook by hook with a precomputed distance table
/// before the full hook-augmented search runs.
pub fn search_schedules(patch: &Patch, constraints: Constraints, limit: Option<usize>) -> Result<Vec<Schedule>> {
    let orders = all_orders();
    let relations: Vec<_> = shared_slot_relations(patch).into_iter().collect();
    // Adjacent plaquettes always differ in color, so every relation joins two
    // distinct colors.
    let compatible = |ca: usize, oa: &[usize; 6], cb: usize, ob: &[usize; 6]| {
        relations.iter().all(|&(c1, s1, c2, s2)| {
            if c1 == ca && c2 == cb {
                oa[s1] != ob[s2]
            } else if c1 == cb && c2 == ca {
                ob[s1] != oa[s2]
            } else {
                true
            }
        })
    };

    // Per-color candidates: diagonal rule, and same-color relations.
    let mut cands: [Vec<(Order, [usize; 6])>; 3] = Default::default();
    for c in Color::ALL {
        let trapezoids: Vec<&Face> = patch
            .faces()
            .iter()
            .filter(|f| f.kind == FaceKind::Trapezoid && f.color == c)
            .collect();
        for o in &orders {
            let inv = inverse(o);
            if constraints.boundary_diagonal {
                let probe = Schedule { orders: [*o; 3] };
                if trapezoids.iter().any(|f| {
                    let (a, b) = trapezoid_hook_slots(&probe, f);
                    !is_diagonal(a, b)
                }) {
                    continue;
                }
            }
            cands[c.index()].push((*o, inv));
        }
    }

    let oracle = if constraints.bulk_benign {
        Some(SingleHookOracle::new(patch)?)
    } else {
        None
    };
    let accept = |s: &Schedule| -> Result<bool> {
        if let Some(oracle) = &oracle {
            let hooks = bulk_hooks(patch, s);
            if hooks.iter().any(|h| oracle.is_malign(&h.induced_error)) {
                return Ok(false);
            }
            return Ok(hook_augmented_distance(patch, &hooks)?.value >= patch.distance());
        }
        Ok(true)
    };

    let limit = limit.unwrap_or(usize::MAX);
    let mut found = Vec::new();
    let chunk = rayon::current_num_threads().max(1) * 2;
    for reds in cands[0].chunks(chunk) {
        let batches: Vec<Result<Vec<Schedule>>> = reds
            .par_iter()
            .map(|(ro, rinv)| {
                let mut local = Vec::new();
                for (go, ginv) in &cands[1] {
                    if constraints.conflict_free && !compatible(0, rinv, 1, ginv) {
                        continue;
                    }
                    for (bo, binv) in &cands[2] {
                        if constraints.conflict_free
                            && (!compatible(0, rinv, 2, binv) || !compatible(1, ginv, 2, binv))
                        {
                            continue;
                        }
                        let s = Schedule {
                            orders: [*ro, *go, *bo],
                        };
                        if accept(&s)? {
                            local.push(s);
                            if local.len() >= limit {
                                return Ok(local);
                            }
                        }
                    }
                }
                Ok(local)
            })
            .collect();
        for b in batches {
            for s in b? {
                if found.len() < limit {
                    found.push(s);
                }
            }
        }
        if found.len() >= limit {
            break;
        }
    }
    Ok(found)
}
