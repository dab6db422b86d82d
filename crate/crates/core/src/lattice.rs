//! Triangular color-code patches on the honeycomb lattice.
//!
//! Sites live on a triangular lattice in axial coordinates `(i, j)` with
//! `i, j >= 0` and `i + j <= 3 (d - 1) / 2`. Sites with `(i + 2j) % 3 == 1`
//! are plaquette centers, every other site is a data qubit (a honeycomb
//! vertex). A plaquette's support is the set of in-bounds neighbouring sites.
//!
//! The three sides of the triangle are the three colored boundaries:
//!
//! * `j = 0`        -> blue boundary (no blue plaquettes touch it)
//! * `i = 0`        -> green boundary
//! * `i + j = 3(d-1)/2` -> red boundary
//!
//! Slots of a hexagon are numbered clockwise starting from the top-left
//! vertex, using the cartesian embedding `x = i + j/2`, `y = j * sqrt(3)/2`:
//!
//! ```text
//!        0 ---- 1
//!       /        \
//!      5    f     2
//!       \        /
//!        4 ---- 3
//! ```

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Axial offsets of the six hexagon slots, in slot order.
pub const SLOT_OFFSETS: [(i32, i32); 6] = [(-1, 1), (0, 1), (1, 0), (1, -1), (0, -1), (-1, 0)];

/// Largest number of plaquettes for which the syndrome-space BFS is run.
pub const MAX_BFS_FACES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Green => 1,
            Color::Blue => 2,
        }
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i % 3]
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "red" | "r" => Ok(Color::Red),
            "green" | "g" => Ok(Color::Green),
            "blue" | "b" => Ok(Color::Blue),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown color '{other}'"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceKind {
    /// Full hexagon, six data qubits.
    Bulk,
    /// Half hexagon cut by a boundary, four data qubits.
    Trapezoid,
    /// Boundary plaquette holding one of the three corner qubits.
    Corner,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: usize,
    pub color: Color,
    pub kind: FaceKind,
    /// Axial coordinate of the plaquette center.
    pub center: (i32, i32),
    /// Data qubit at each geometric slot, `None` where the boundary cut it.
    pub slots: [Option<usize>; 6],
    pub aux_qubit: usize,
}

impl Face {
    /// Present data qubits in slot order.
    pub fn data_slots(&self) -> Vec<usize> {
        self.slots.iter().flatten().copied().collect()
    }

    pub fn weight(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.slots.contains(&Some(q))
    }

    /// Slot index holding `q`, if any.
    pub fn slot_of(&self, q: usize) -> Option<usize> {
        self.slots.iter().position(|s| *s == Some(q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub color: Color,
}

/// An immutable distance-`d` triangular color-code patch.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    distance: usize,
    data_coords: Vec<(i32, i32)>,
    faces: Vec<Face>,
    edges: Vec<Edge>,
    boundaries: BTreeMap<Color, Vec<usize>>,
    corners: [usize; 3],
    logical_z: Vec<usize>,
    logical_x: Vec<usize>,
    qubit_faces: Vec<Vec<usize>>,
}

fn is_face_site(i: i32, j: i32) -> bool {
    (i + 2 * j).rem_euclid(3) == 1
}

fn site_color(i: i32) -> Color {
    Color::from_index((i - 1).rem_euclid(3) as usize)
}

/// Build the distance-`distance` triangular patch.
pub fn build_patch(distance: usize) -> Result<Patch> {
    if distance < 3 || distance % 2 == 0 {
        return Err(Error::InvalidDistance(distance));
    }
    let r = (3 * (distance - 1) / 2) as i32;
    let in_bounds = |i: i32, j: i32| i >= 0 && j >= 0 && i + j <= r;

    let mut data_coords = Vec::new();
    let mut face_sites = Vec::new();
    let mut data_index = BTreeMap::new();
    for j in 0..=r {
        for i in 0..=(r - j) {
            if is_face_site(i, j) {
                face_sites.push((i, j));
            } else {
                data_index.insert((i, j), data_coords.len());
                data_coords.push((i, j));
            }
        }
    }
    let n = data_coords.len();
    let corners = [data_index[&(0, 0)], data_index[&(r, 0)], data_index[&(0, r)]];

    let mut faces = Vec::with_capacity(face_sites.len());
    for (id, &(fi, fj)) in face_sites.iter().enumerate() {
        let mut slots = [None; 6];
        for (s, (di, dj)) in SLOT_OFFSETS.iter().enumerate() {
            let (qi, qj) = (fi + di, fj + dj);
            if in_bounds(qi, qj) {
                slots[s] = Some(data_index[&(qi, qj)]);
            }
        }
        let weight = slots.iter().flatten().count();
        let kind = if weight == 6 {
            FaceKind::Bulk
        } else if slots.iter().flatten().any(|q| corners.contains(q)) {
            FaceKind::Corner
        } else {
            FaceKind::Trapezoid
        };
        faces.push(Face {
            id,
            color: site_color(fi),
            kind,
            center: (fi, fj),
            slots,
            aux_qubit: n + id,
        });
    }

    let mut qubit_faces = vec![Vec::new(); n];
    for f in &faces {
        for q in f.data_slots() {
            qubit_faces[q].push(f.id);
        }
    }

    // Adjacent data sites form the honeycomb edges; an edge takes the color of
    // the plaquettes met at its endpoints, i.e. the one color not held by the
    // two plaquette sites flanking it.
    let mut edges = Vec::new();
    for (a, &(ai, aj)) in data_coords.iter().enumerate() {
        for &(di, dj) in &[(1, 0), (0, 1), (-1, 1)] {
            let (bi, bj) = (ai + di, aj + dj);
            if !in_bounds(bi, bj) || is_face_site(bi, bj) {
                continue;
            }
            let b = data_index[&(bi, bj)];
            let flanks: Vec<(i32, i32)> = SLOT_OFFSETS
                .iter()
                .map(|(oi, oj)| (ai + oi, aj + oj))
                .filter(|&(ci, cj)| {
                    let (ei, ej) = (ci - bi, cj - bj);
                    SLOT_OFFSETS.contains(&(ei, ej))
                })
                .collect();
            debug_assert_eq!(flanks.len(), 2);
            let used = site_color(flanks[0].0).index() + site_color(flanks[1].0).index();
            edges.push(Edge {
                a: a.min(b),
                b: a.max(b),
                color: Color::from_index(3 - used),
            });
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));

    let sides: [Vec<usize>; 3] = [
        (0..=r).filter(|&i| !is_face_site(i, 0)).map(|i| data_index[&(i, 0)]).collect(),
        (0..=r).filter(|&j| !is_face_site(0, j)).map(|j| data_index[&(0, j)]).collect(),
        (0..=r)
            .filter(|&i| !is_face_site(i, r - i))
            .map(|i| data_index[&(i, r - i)])
            .collect(),
    ];
    let mut boundaries = BTreeMap::new();
    for side in sides {
        let mut present = [false; 3];
        for &q in &side {
            for &f in &qubit_faces[q] {
                present[faces[f].color.index()] = true;
            }
        }
        let missing: Vec<usize> = (0..3).filter(|&c| !present[c]).collect();
        assert_eq!(missing.len(), 1, "each side must lack exactly one plaquette color");
        boundaries.insert(Color::from_index(missing[0]), side);
    }

    let logical = boundaries[&Color::Red].clone();
    Ok(Patch {
        distance,
        data_coords,
        faces,
        edges,
        boundaries,
        corners,
        logical_z: logical.clone(),
        logical_x: logical,
        qubit_faces,
    })
}

impl Patch {
    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn num_data(&self) -> usize {
        self.data_coords.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Data qubits plus one auxiliary per plaquette.
    pub fn num_qubits(&self) -> usize {
        self.num_data() + self.num_faces()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn data_coords(&self) -> &[(i32, i32)] {
        &self.data_coords
    }

    /// Axial coordinate of any qubit, data or auxiliary.
    pub fn qubit_coord(&self, q: usize) -> (i32, i32) {
        if q < self.num_data() {
            self.data_coords[q]
        } else {
            self.faces[q - self.num_data()].center
        }
    }

    pub fn boundaries(&self) -> &BTreeMap<Color, Vec<usize>> {
        &self.boundaries
    }

    pub fn boundary(&self, color: Color) -> &[usize] {
        &self.boundaries[&color]
    }

    pub fn corners(&self) -> [usize; 3] {
        self.corners
    }

    pub fn logical_z_support(&self) -> &[usize] {
        &self.logical_z
    }

    pub fn logical_x_support(&self) -> &[usize] {
        &self.logical_x
    }

    /// Plaquettes containing data qubit `q`.
    pub fn faces_of(&self, q: usize) -> &[usize] {
        &self.qubit_faces[q]
    }

    /// Whether `q` lies on any of the three boundaries.
    pub fn on_boundary(&self, q: usize) -> bool {
        self.boundaries.values().any(|b| b.contains(&q))
    }

    /// A hexagon none of whose qubits touches a boundary. Only these see the
    /// translation-invariant bulk hook structure; hexagons next to a boundary
    /// inherit extra boundary shortcuts.
    pub fn is_interior(&self, face: usize) -> bool {
        let f = &self.faces[face];
        f.kind == FaceKind::Bulk && f.data_slots().iter().all(|&q| !self.on_boundary(q))
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        self.edges.binary_search_by_key(&(a, b), |e| (e.a, e.b)).is_ok()
    }

    /// Syndrome word of an X error on data qubit `q`: bit `f` for every
    /// plaquette holding `q`, plus bit `num_faces` when `q` is on the logical
    /// Z support.
    pub fn syndrome_word(&self, q: usize) -> u64 {
        let mut w = 0u64;
        for &f in &self.qubit_faces[q] {
            w |= 1 << f;
        }
        if self.logical_z.contains(&q) {
            w |= 1 << self.num_faces();
        }
        w
    }

    /// Syndrome word of an X error on a set of data qubits.
    pub fn support_word(&self, qubits: &[usize]) -> u64 {
        qubits.iter().fold(0, |acc, &q| acc ^ self.syndrome_word(q))
    }

    /// Serialize to the line-oriented patch format.
    ///
    /// ```text
    /// # comment
    /// D <distance>
    /// Q <id> <x> <y>
    /// F <id> <color> <aux> <slot0> ... <slot5>      ('-' marks an absent slot)
    /// B <color> <id> <id> ...
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "D {}", self.distance);
        for (q, (x, y)) in self.data_coords.iter().enumerate() {
            let _ = writeln!(out, "Q {q} {x} {y}");
        }
        for f in &self.faces {
            let _ = write!(out, "F {} {} {}", f.id, f.color, f.aux_qubit);
            for s in &f.slots {
                match s {
                    Some(q) => {
                        let _ = write!(out, " {q}");
                    }
                    None => out.push_str(" -"),
                }
            }
            out.push('\n');
        }
        for (c, qs) in &self.boundaries {
            let _ = write!(out, "B {c}");
            for q in qs {
                let _ = write!(out, " {q}");
            }
            out.push('\n');
        }
        out
    }

    /// Parse the patch format. The distance line is authoritative; the patch
    /// is rebuilt and checked against every `Q`, `F` and `B` line.
    pub fn from_text(text: &str) -> Result<Patch> {
        let mut distance = None;
        let mut qs = Vec::new();
        let mut fs = Vec::new();
        let mut bs = BTreeMap::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<i64>().map_err(|_| perr(&format!("bad number '{s}'")));
            match toks[0] {
                "D" if toks.len() == 2 => distance = Some(num(toks[1])? as usize),
                "Q" if toks.len() == 4 => {
                    qs.push((num(toks[1])? as usize, (num(toks[2])? as i32, num(toks[3])? as i32)))
                }
                "F" if toks.len() == 10 => {
                    let mut slots = [None; 6];
                    for (s, t) in toks[4..].iter().enumerate() {
                        if *t != "-" {
                            slots[s] = Some(num(t)? as usize);
                        }
                    }
                    let color: Color = toks[2].parse().map_err(|_| perr("bad color"))?;
                    fs.push((num(toks[1])? as usize, color, num(toks[3])? as usize, slots));
                }
                "B" if toks.len() >= 2 => {
                    let color: Color = toks[1].parse().map_err(|_| perr("bad color"))?;
                    let ids = toks[2..]
                        .iter()
                        .map(|t| num(t).map(|v| v as usize))
                        .collect::<Result<Vec<_>>>()?;
                    bs.insert(color, ids);
                }
                _ => return Err(perr("unrecognized line")),
            }
        }
        let distance = distance.ok_or(Error::Parse {
            line: 0,
            msg: "missing distance line".into(),
        })?;
        let patch = build_patch(distance)?;
        let mismatch = |what: &str| Error::Parse {
            line: 0,
            msg: format!("{what} does not match the distance-{distance} construction"),
        };
        if qs.len() != patch.num_data() || qs.iter().any(|&(q, c)| patch.data_coords.get(q) != Some(&c)) {
            return Err(mismatch("qubit list"));
        }
        if fs.len() != patch.num_faces()
            || fs.iter().any(|&(id, color, aux, slots)| {
                patch.faces.get(id).is_none_or(|f| f.color != color || f.aux_qubit != aux || f.slots != slots)
            })
        {
            return Err(mismatch("face list"));
        }
        if bs != patch.boundaries {
            return Err(mismatch("boundary list"));
        }
        Ok(patch)
    }
}

/// Breadth-first search over the (syndrome, logical parity) space.
///
/// Each generator is a syndrome word as produced by [`Patch::syndrome_word`].
/// Returns the minimum number of generators whose XOR equals the pure
/// logical word `1 << num_faces`, together with one witness (generator
/// indices).
pub fn syndrome_bfs(num_faces: usize, generators: &[u64]) -> Option<(usize, Vec<usize>)> {
    assert!(num_faces <= MAX_BFS_FACES);
    let states = 1usize << (num_faces + 1);
    let target = 1u64 << num_faces;
    const UNSEEN: u32 = u32::MAX;
    let mut via = vec![UNSEEN; states];
    via[0] = u32::MAX - 1;
    let mut queue = VecDeque::from([0u64]);
    while let Some(s) = queue.pop_front() {
        for (g, &word) in generators.iter().enumerate() {
            let t = s ^ word;
            if via[t as usize] != UNSEEN {
                continue;
            }
            via[t as usize] = g as u32;
            if t == target {
                let mut witness = Vec::new();
                let mut cur = t;
                while cur != 0 {
                    let g = via[cur as usize] as usize;
                    witness.push(g);
                    cur ^= generators[g];
                }
                witness.reverse();
                return Some((witness.len(), witness));
            }
            queue.push_back(t);
        }
    }
    None
}

fn check_bfs_size(patch: &Patch) -> Result<()> {
    if patch.num_faces() > MAX_BFS_FACES {
        return Err(Error::DistanceTooLarge {
            distance: patch.distance(),
            max: 7,
            what: "syndrome-space search",
        });
    }
    Ok(())
}

/// Minimum weight of an X-type logical operator.
pub fn min_logical_weight(patch: &Patch) -> Result<usize> {
    min_logical_weight_excluding(patch, &[])
}

/// Like [`min_logical_weight`] with some data qubits removed from the
/// generator set. Returns `usize::MAX` if no logical remains reachable.
pub fn min_logical_weight_excluding(patch: &Patch, excluded: &[usize]) -> Result<usize> {
    check_bfs_size(patch)?;
    let gens: Vec<u64> = (0..patch.num_data())
        .filter(|q| !excluded.contains(q))
        .map(|q| patch.syndrome_word(q))
        .collect();
    Ok(syndrome_bfs(patch.num_faces(), &gens).map_or(usize::MAX, |(w, _)| w))
}
