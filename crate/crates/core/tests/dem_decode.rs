//! Detector error models and the decoder on generated circuits.

use std::collections::HashSet;

use proptest::prelude::*;

use colorcode::analysis::distance::circuit_distance;
use colorcode::circuit::{build_memory_circuit, Circuit, Instruction, Variant};
use colorcode::decode::{oracle_decode, Decoder, DEFAULT_BEAM};
use colorcode::dem::{compile_dem, DetectorErrorModel};
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::default_schedule;

fn circuit(d: usize, rounds: usize, model: NoiseModel) -> Circuit {
    let c = build_memory_circuit(&build_patch(d).unwrap(), &default_schedule(), rounds, Variant::XZ).unwrap();
    annotate(&c, &model).unwrap()
}

fn syndrome(dem: &DetectorErrorModel, classes: &[usize]) -> Vec<bool> {
    let mut s = vec![false; dem.num_detectors];
    for &k in classes {
        for &d in &dem.classes[k].detectors {
            s[d] ^= true;
        }
    }
    s
}

#[test]
fn class_probabilities_are_bounded_by_their_sources() {
    for model in [NoiseModel::si1000(0.002).unwrap(), NoiseModel::uniform(0.003).unwrap()] {
        let c = circuit(3, 3, model);
        let max = c
            .instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Noise { channel, .. } => Some(channel.probability()),
                _ => None,
            })
            .fold(0.0, f64::max);
        let dem = compile_dem(&c);
        for class in &dem.classes {
            let total: f64 = class.sources.iter().map(|f| f.probability).sum();
            let biggest = class.sources.iter().map(|f| f.probability).fold(0.0, f64::max);
            assert!(class.probability >= biggest * (1.0 - 1e-12) && class.probability <= total * (1.0 + 1e-12));
            assert!(biggest <= max);
            assert!(!class.detectors.is_empty() || class.observable);
        }
    }
}

#[test]
fn noisy_cnot_reproduces_every_uniform_signature() {
    // Every uniform-model class is a sum of at most two noisy-CNOT classes.
    let uniform = compile_dem(&circuit(3, 3, NoiseModel::uniform(0.001).unwrap()));
    let cnot = compile_dem(&circuit(3, 3, NoiseModel::noisy_cnot(0.001).unwrap()));
    let key = |dem: &DetectorErrorModel, ks: &[usize]| {
        let mut s = syndrome(dem, ks);
        s.push(ks.iter().fold(false, |a, &k| a ^ dem.classes[k].observable));
        s
    };
    let mut reach: HashSet<Vec<bool>> = HashSet::new();
    for a in 0..cnot.num_classes() {
        reach.insert(key(&cnot, &[a]));
        for b in a + 1..cnot.num_classes() {
            reach.insert(key(&cnot, &[a, b]));
        }
    }
    for k in 0..uniform.num_classes() {
        assert!(reach.contains(&key(&uniform, &[k])), "class {k} {:?}", uniform.classes[k]);
    }
}

#[test]
fn dem_text_survives_a_round_trip() {
    let dem = compile_dem(&circuit(3, 2, NoiseModel::si1000(0.001).unwrap()));
    let back = DetectorErrorModel::from_text(&dem.to_text()).unwrap();
    assert_eq!(back.num_detectors, dem.num_detectors);
    assert_eq!(back.num_classes(), dem.num_classes());
    for (a, b) in back.classes.iter().zip(&dem.classes) {
        assert_eq!((&a.detectors, a.observable), (&b.detectors, b.observable));
        assert!((a.probability - b.probability).abs() <= 1e-12 * b.probability);
    }
}

#[test]
fn noiseless_model_has_no_distance() {
    let dem = compile_dem(&circuit(3, 3, NoiseModel::uniform(0.0).unwrap()));
    assert_eq!(dem.num_classes(), 0);
    assert_eq!(circuit_distance(&dem, 4).unwrap(), None);
}

/// At d=3 the circuit distance is 2: some single faults share their
/// syndrome with a fault of opposite observable. Every other single fault
/// must be corrected, and an ambiguous one only lost to a likelier twin.
#[test]
fn single_faults_are_corrected_unless_ambiguous() {
    let c = circuit(3, 3, NoiseModel::noisy_cnot(1e-4).unwrap());
    let dem = compile_dem(&c);
    let decoder = Decoder::new(&dem);
    let (mut lost, mut ambiguous) = (0, 0);
    for k in 0..dem.num_classes() {
        let r = decoder.decode(&syndrome(&dem, &[k]), DEFAULT_BEAM).unwrap();
        assert!(r.exact);
        assert!(r.cost <= colorcode::decode::class_cost(dem.classes[k].probability) + 1e-9);
        let twins: Vec<usize> = (0..dem.num_classes())
            .filter(|&j| j != k && dem.classes[j].detectors == dem.classes[k].detectors)
            .collect();
        ambiguous += !twins.is_empty() as usize;
        if r.predicted_flip != dem.classes[k].observable {
            lost += 1;
            assert!(
                twins.iter().any(|&j| dem.classes[j].probability >= dem.classes[k].probability),
                "class {k} lost without a likelier twin"
            );
        }
    }
    assert!(ambiguous > 0, "d=3 should have weight-2 logicals");
    assert!(lost * 2 <= ambiguous);
    assert!(!decoder.decode(&vec![false; dem.num_detectors], DEFAULT_BEAM).unwrap().predicted_flip);
}

#[test]
fn sampled_shots_decode_to_consistent_sets() {
    let c = circuit(3, 3, NoiseModel::si1000(0.004).unwrap());
    let dem = compile_dem(&c);
    let decoder = Decoder::new(&dem);
    for shot in colorcode::sim::sample(&c, 400, 17) {
        let r = decoder.decode_fired(&shot.fired(), DEFAULT_BEAM).unwrap();
        let fired: Vec<usize> = (0..dem.num_detectors).filter(|&d| syndrome(&dem, &r.fault_set)[d]).collect();
        assert_eq!(fired, shot.fired());
    }
}

#[test]
fn decoder_rejects_wrong_lengths() {
    let dem = compile_dem(&circuit(3, 1, NoiseModel::uniform(0.001).unwrap()));
    let decoder = Decoder::new(&dem);
    assert!(decoder.decode(&vec![false; dem.num_detectors + 1], 10).is_err());
    assert!(decoder.decode_fired(&[dem.num_detectors], 10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decoder_is_optimal_on_fault_pairs(a in 0usize..10_000, b in 0usize..10_000) {
        let dem = compile_dem(&circuit(3, 2, NoiseModel::uniform(0.002).unwrap()));
        let n = dem.num_classes();
        let s = syndrome(&dem, &[a % n, b % n]);
        let got = Decoder::new(&dem).decode(&s, usize::MAX).unwrap();
        let want = oracle_decode(&dem, &s, 2).unwrap();
        prop_assert!(got.exact);
        prop_assert!(got.cost <= want.cost + 1e-9);
        if got.fault_set.len() <= 2 {
            prop_assert_eq!(got.fault_set, want.fault_set);
        }
    }
}

