//! Lattice invariants and hook analysis through the public API.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use proptest::prelude::*;

use colorcode::analysis::hooks::{hook_augmented_distance, malign_hooks, propagate_hooks, HookPauli};
use colorcode::harness::worst_uniform_schedule;
use colorcode::lattice::{build_patch, min_logical_weight, FaceKind, Patch};
use colorcode::schedule::{all_orders, bulk_hooks, default_schedule, Schedule};

fn support(p: &Patch, f: usize) -> BTreeSet<usize> {
    p.face(f).data_slots().into_iter().collect()
}

#[test]
fn stabilizers_commute_and_logicals_anticommute() {
    for d in [3, 5, 7] {
        let p = build_patch(d).unwrap();
        for f in 0..p.num_faces() {
            for g in 0..p.num_faces() {
                assert_eq!(support(&p, f).intersection(&support(&p, g)).count() % 2, 0);
            }
            let z: BTreeSet<usize> = p.logical_z_support().iter().copied().collect();
            assert_eq!(support(&p, f).intersection(&z).count() % 2, 0, "logical Z vs face {f}");
        }
        let z: HashSet<_> = p.logical_z_support().iter().collect();
        let overlap = p.logical_x_support().iter().filter(|q| z.contains(q)).count();
        assert_eq!(overlap % 2, 1);
        assert_eq!(p.logical_z_support().len(), d);
    }
}

#[test]
fn adjacent_faces_differ_in_color() {
    for d in [3, 5, 7] {
        let p = build_patch(d).unwrap();
        for f in p.faces() {
            for g in p.faces().iter().filter(|g| g.id > f.id) {
                let shared = support(&p, f.id).intersection(&support(&p, g.id)).count();
                if shared >= 2 {
                    assert_ne!(f.color, g.color, "faces {} and {}", f.id, g.id);
                }
            }
        }
    }
}

#[test]
fn bulk_qubits_sit_on_three_colors() {
    let p = build_patch(7).unwrap();
    for q in 0..p.num_data() {
        let colors: BTreeSet<_> = p.faces_of(q).iter().map(|&f| p.face(f).color).collect();
        assert_eq!(colors.len(), p.faces_of(q).len(), "qubit {q}");
        if !p.on_boundary(q) {
            assert_eq!(colors.len(), 3);
        }
    }
}

#[test]
fn face_weights() {
    for d in [3, 5, 7] {
        let p = build_patch(d).unwrap();
        for f in p.faces() {
            let w = f.weight();
            match f.kind {
                FaceKind::Bulk => assert_eq!(w, 6),
                FaceKind::Trapezoid | FaceKind::Corner => assert_eq!(w, 4),
            }
        }
        assert_eq!(p.faces().iter().filter(|f| f.kind == FaceKind::Corner).count(), 3);
        assert_eq!(min_logical_weight(&p).unwrap(), d);
    }
}

#[test]
fn weight_three_hooks_are_individually_benign() {
    for d in [5, 7] {
        let p = build_patch(d).unwrap();
        for s in [default_schedule(), Schedule::uniform([0, 1, 2, 3, 4, 5]).unwrap()] {
            let threes: Vec<_> = propagate_hooks(&p, &s).into_iter().filter(|h| h.induced_error.len() == 3).collect();
            assert!(!threes.is_empty());
            assert!(malign_hooks(&p, &threes).unwrap().is_empty(), "d={d} {s}");
        }
    }
}

#[test]
fn malign_offsets_depend_only_on_color() {
    let p = build_patch(7).unwrap();
    let uniform = all_orders().into_iter().step_by(97).map(|o| Schedule::uniform(o).unwrap());
    for s in std::iter::once(default_schedule()).chain(uniform) {
        let hooks: Vec<_> = propagate_hooks(&p, &s)
            .into_iter()
            .filter(|h| h.pauli == HookPauli::X && p.is_interior(h.face))
            .collect();
        let malign: HashSet<usize> = malign_hooks(&p, &hooks).unwrap().into_iter().collect();
        let mut per_color: BTreeMap<_, BTreeSet<(usize, bool)>> = BTreeMap::new();
        let mut per_face: BTreeMap<usize, BTreeSet<(usize, bool)>> = BTreeMap::new();
        for (i, h) in hooks.iter().enumerate() {
            per_face.entry(h.face).or_default().insert((h.offset, malign.contains(&i)));
        }
        for (f, set) in per_face {
            let prev = per_color.entry(p.face(f).color).or_insert_with(|| set.clone());
            assert_eq!(*prev, set, "face {f} under {s}");
        }
    }
}

#[test]
fn default_keeps_bulk_distance_and_worst_uniform_does_not() {
    for d in [5, 7] {
        let p = build_patch(d).unwrap();
        let s = default_schedule();
        assert_eq!(hook_augmented_distance(&p, &bulk_hooks(&p, &s)).unwrap().value, d);
        let worst = worst_uniform_schedule(&p).unwrap();
        assert!(worst.is_uniform());
        assert!(hook_augmented_distance(&p, &propagate_hooks(&p, &worst)).unwrap().value < d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hook_sets_only_lower_the_distance(order in Just(()).prop_perturb(|_, mut rng| {
        let orders = all_orders();
        [0, 1, 2].map(|_| orders[rng.random_range(0..orders.len())])
    }), cut in 0usize..40) {
        let p = build_patch(5).unwrap();
        let s = Schedule::new(order[0], order[1], order[2]).unwrap();
        let hooks = propagate_hooks(&p, &s);
        let cut = cut.min(hooks.len());
        let part = hook_augmented_distance(&p, &hooks[..cut]).unwrap().value;
        let all = hook_augmented_distance(&p, &hooks).unwrap().value;
        prop_assert!(all <= part);
        prop_assert!(part <= 5);
    }
}
