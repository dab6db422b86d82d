//! Acceptance checks, one line per criterion.
//!
//! `cargo test --release --test acceptance` runs all of them;
//! `cargo test --release --test acceptance -- 6 7` runs a subset.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use colorcode::analysis::distance::circuit_distance;
use colorcode::analysis::fractional::{distance_model, find_fractional_hook_witness, single_hook_shortcuts};
use colorcode::analysis::hooks::{hook_augmented_distance, propagate_hooks, HookPauli};
use colorcode::circuit::{build_memory_circuit, Variant};
use colorcode::decode::{oracle_decode, Decoder};
use colorcode::dem::{compile_dem, enumerate_faults};
use colorcode::harness::{p_round, run_experiment, ExperimentSpec};
use colorcode::lattice::{build_patch, min_logical_weight, FaceKind};
use colorcode::noise::{annotate, NoiseModel};
use colorcode::schedule::{all_orders, bulk_hooks, default_schedule, search_schedules, Constraints, Schedule};
use colorcode::sim::tableau::{detectors_deterministic, tableau_reference};
use colorcode::sim::{sample, FrameSampler};

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, t: Instant, detail: String) -> Check {
    let dt = t.elapsed();
    ensure(dt <= limit, format!("{detail}; {dt:.1?} (limit {limit:?})"))
}

fn lattice_counts() -> colorcode::Result<Check> {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [3, 5, 7] {
        let p = build_patch(d)?;
        let (n, f) = (p.num_data(), p.num_faces());
        ok &= n == (3 * d * d + 1) / 4 && f == (n - 1) / 2 && n == 2 * f + 1;
        parts.push(format!("d={d}: n={n} f={f}"));
    }
    Ok(within(Duration::from_secs(1), t, parts.join(", ")).and_then(|s| ensure(ok, s)))
}

fn code_distance() -> colorcode::Result<Check> {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [3, 5, 7] {
        let w = min_logical_weight(&build_patch(d)?)?;
        ok &= w == d;
        parts.push(format!("d={d}: {w}"));
    }
    Ok(within(Duration::from_secs(10), t, parts.join(", ")).and_then(|s| ensure(ok, s)))
}

fn schedule_existence() -> colorcode::Result<Check> {
    let t = Instant::now();
    let found = search_schedules(&build_patch(5)?, Constraints::ALL, Some(1))?;
    let detail = match found.first() {
        Some(s) => format!("first valid schedule at d=5: {s}"),
        None => "no schedule at d=5".into(),
    };
    Ok(within(Duration::from_secs(600), t, detail).and_then(|s| ensure(!found.is_empty(), s)))
}

/// Weight-2 X hooks of every hexagon (d=5 has no interior hexagons).
fn hexagon_hooks(patch: &colorcode::lattice::Patch, s: &Schedule) -> Vec<colorcode::analysis::hooks::HookError> {
    propagate_hooks(patch, s)
        .into_iter()
        .filter(|h| h.pauli == HookPauli::X && h.induced_error.len() == 2)
        .filter(|h| patch.face(h.face).kind == FaceKind::Bulk)
        .collect()
}

fn uniform_impossibility() -> colorcode::Result<Check> {
    let t = Instant::now();
    let p5 = build_patch(5)?;
    let p7 = build_patch(7)?;
    let (mut conflict_free, mut dropped, mut dropped7) = (0, 0, 0);
    for o in all_orders() {
        let s = Schedule::uniform(o)?;
        let report = colorcode::schedule::check_schedule(&p5, &s, Constraints::CONFLICT_ONLY)?;
        if !report.conflict_free {
            continue;
        }
        conflict_free += 1;
        dropped += (hook_augmented_distance(&p5, &hexagon_hooks(&p5, &s))?.value < 5) as usize;
        dropped7 += (hook_augmented_distance(&p7, &bulk_hooks(&p7, &s))?.value < 7) as usize;
    }
    let detail = format!(
        "{conflict_free}/720 uniform schedules conflict-free; hexagon hooks drop d=5 below 5 for {dropped}; \
         interior hooks drop d=7 below 7 for {dropped7}"
    );
    Ok(within(Duration::from_secs(1800), t, detail)
        .and_then(|s| ensure(dropped == conflict_free && dropped7 == conflict_free, s)))
}

fn bulk_benignity() -> colorcode::Result<Check> {
    let s = default_schedule();
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [5, 7] {
        let p = build_patch(d)?;
        let v = hook_augmented_distance(&p, &bulk_hooks(&p, &s))?.value;
        let with3: Vec<_> = propagate_hooks(&p, &s)
            .into_iter()
            .filter(|h| h.pauli == HookPauli::X && p.is_interior(h.face))
            .collect();
        let v3 = hook_augmented_distance(&p, &with3)?.value;
        ok &= v == d;
        parts.push(format!("d={d}: {v} (with weight-3 hooks {v3})"));
    }
    Ok(ensure(ok, parts.join(", ")))
}

fn circuit_distance_formula() -> colorcode::Result<Check> {
    let t = Instant::now();
    let s = default_schedule();
    let mut parts = Vec::new();
    let mut ok = true;
    for (d, want) in [(3, 2), (5, 4)] {
        let (_, dem) = distance_model(&build_patch(d)?, &s)?;
        let got = circuit_distance(&dem, want)?.map(|r| r.value);
        ok &= got == Some(want);
        let shown = got.map_or(format!("> {want}"), |v| v.to_string());
        parts.push(format!("d={d}: {shown} (want {want})"));
    }
    let w = find_fractional_hook_witness(&build_patch(5)?, &s)?;
    ok &= w.mixes_hooks_and_data();
    parts.push(format!(
        "d=5 witness: {} hooks on faces {:?} + {} data",
        w.hooks(),
        w.hook_faces(),
        w.data()
    ));
    Ok(within(Duration::from_secs(3600), t, parts.join(", ")).and_then(|s| ensure(ok, s)))
}

fn no_single_hook() -> colorcode::Result<Check> {
    let p = build_patch(5)?;
    let s = default_schedule();
    let three = single_hook_shortcuts(&p, &s, 3)?;
    let bad = three.iter().filter(|w| !w.corner).count();
    let four = single_hook_shortcuts(&p, &s, 4)?;
    let corner4 = four.iter().filter(|w| w.corner).count();
    let detail = format!(
        "single hook + data, weight <= 3: {} ({bad} away from corners); weight 4: {} ({corner4} at corners)",
        three.len(),
        four.len()
    );
    Ok(ensure(bad == 0, detail))
}

fn determinism() -> colorcode::Result<Check> {
    let mut ok = true;
    let mut runs = 0;
    for variant in [Variant::XZ, Variant::XYZ] {
        for d in [3, 5] {
            for rounds in [1, d] {
                let c = build_memory_circuit(&build_patch(d)?, &default_schedule(), rounds, variant)?;
                ok &= sample(&c, 10_000, 11).iter().all(|r| r.is_trivial());
                ok &= detectors_deterministic(&c, 8, 5)?;
                runs += 1;
            }
        }
    }
    Ok(ensure(ok, format!("{runs} noiseless circuits x 10^4 shots, tableau-checked")))
}

fn oracle_equivalence() -> colorcode::Result<Check> {
    // Frame sampler against the tableau on random single faults.
    let p = build_patch(3)?;
    let clean = build_memory_circuit(&p, &default_schedule(), 3, Variant::XZ)?;
    let noisy = annotate(&clean, &NoiseModel::uniform(0.001)?)?;
    let faults = enumerate_faults(&noisy);
    let sampler = FrameSampler::new(&noisy);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut frame_mismatch = 0;
    for _ in 0..1000 {
        let f = faults[rng.random_range(0..faults.len())];
        frame_mismatch += (sampler.propagate_faults(&[f]) != tableau_reference(&noisy, &[f])?) as usize;
    }

    // Decoder against the exhaustive oracle on every <=2-class syndrome.
    let clean = build_memory_circuit(&p, &default_schedule(), 2, Variant::XZ)?;
    let dem = compile_dem(&annotate(&clean, &NoiseModel::uniform(0.001)?)?);
    let n = dem.num_classes();
    let sig = |k: usize| -> Vec<usize> { dem.signature(k).ones().filter(|&d| d < dem.num_detectors).collect() };
    let sigs: Vec<Vec<usize>> = (0..n).map(sig).collect();
    let mut syndromes: HashSet<Vec<bool>> = HashSet::new();
    for a in 0..n {
        for b in a..n {
            let mut s = vec![false; dem.num_detectors];
            for &d in sigs[a].iter().chain(if a == b { &[][..] } else { &sigs[b][..] }) {
                s[d] ^= true;
            }
            syndromes.insert(s);
        }
    }
    let decoder = Decoder::new(&dem);
    let mut decode_mismatch = 0;
    for s in &syndromes {
        let got = decoder.decode(s, usize::MAX)?;
        let want = oracle_decode(&dem, s, got.fault_set.len().clamp(2, 3))?;
        if !got.exact || got.fault_set != want.fault_set || got.predicted_flip != want.predicted_flip {
            decode_mismatch += 1;
        }
    }
    let detail = format!(
        "frame vs tableau: {frame_mismatch}/1000 mismatches; decoder vs oracle: {decode_mismatch}/{} syndromes differ ({n} classes)",
        syndromes.len()
    );
    Ok(ensure(frame_mismatch == 0 && decode_mismatch == 0, detail))
}

fn statistical_ordering() -> colorcode::Result<Check> {
    let t = Instant::now();
    let noise = NoiseModel::noisy_cnot(0.001)?;
    let shots = 1_000_000;
    let d3 = run_experiment(&ExperimentSpec::new(3, noise, shots, 101))?;
    let d5 = run_experiment(&ExperimentSpec::new(5, noise, shots, 102))?;
    let worst = run_experiment(&ExperimentSpec::new(5, noise, shots, 103).with_schedule("worst-uniform"))?;
    // Intervals per round: d=3 and d=5 run different round counts.
    let per_round = |r: &colorcode::harness::ExperimentResult, rounds: usize| {
        (p_round(r.likelihood_interval.0, rounds), p_round(r.likelihood_interval.1, rounds))
    };
    let (i3, i5, iw) = (per_round(&d3, 3), per_round(&d5, 5), per_round(&worst, 5));
    let ok = d5.p_round < d3.p_round && i5.1 < i3.0 && d5.p_round <= worst.p_round && i5.1 < iw.0;
    let detail = format!(
        "p_round d=3 {:.3e} [{:.2e}, {:.2e}] ({} fails); d=5 {:.3e} [{:.2e}, {:.2e}] ({}); \
         d=5 worst uniform {:.3e} [{:.2e}, {:.2e}] ({})",
        d3.p_round, i3.0, i3.1, d3.logical_failures, d5.p_round, i5.0, i5.1, d5.logical_failures, worst.p_round, iw.0,
        iw.1, worst.logical_failures
    );
    Ok(within(Duration::from_secs(7200), t, detail).and_then(|s| ensure(ok, s)))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> colorcode::Result<Check>); 10] = [
        ("lattice counts", lattice_counts),
        ("code distance", code_distance),
        ("schedule existence", schedule_existence),
        ("uniform impossibility", uniform_impossibility),
        ("bulk benignity", bulk_benignity),
        ("circuit-level distance formula", circuit_distance_formula),
        ("no single-hook shortcut", no_single_hook),
        ("determinism", determinism),
        ("oracle equivalence", oracle_equivalence),
        ("statistical ordering", statistical_ordering),
    ];
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        for (i, (name, _)) in criteria.iter().enumerate() {
            println!("criterion {} {name}: test", i + 1);
        }
        return ExitCode::SUCCESS;
    }
    let wanted: Vec<usize> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let (verdict, detail) = match check() {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        failed += (verdict == "FAIL") as usize;
        println!("criterion {n:>2} {verdict} {name} [{:.1?}]: {detail}", t.elapsed());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
