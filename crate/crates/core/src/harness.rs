//! End-to-end memory experiments and their statistics.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::hooks::{hook_augmented_distance, propagate_hooks, HookPauli};
use crate::circuit::{build_memory_circuit, Circuit, Variant};
use crate::decode::{Decoder, DEFAULT_BEAM};
use crate::dem::compile_dem;
use crate::error::{Error, Result};
use crate::lattice::{build_patch, Patch};
use crate::noise::{annotate, NoiseModel};
use crate::schedule::{all_orders, Schedule};
use crate::sim::FrameSampler;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "COLORCODE_WORKERS";

/// Size the global thread pool from [`WORKERS_ENV`], if set. Call once,
/// before any parallel work.
pub fn init_workers() -> Result<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Error::Unsupported(format!("{WORKERS_ENV}={v} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Unsupported(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub distance: usize,
    /// Defaults to the distance.
    #[serde(default)]
    pub rounds: Option<usize>,
    #[serde(default = "default_variant")]
    pub variant: String,
    /// `default`, `worst-uniform`, `uniform:<order>` or a schedule file.
    #[serde(default = "default_source")]
    pub schedule: String,
    /// `si1000:p`, `uniform:p` or `cnot:p`.
    pub noise: String,
    pub shots: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_beam")]
    pub beam: usize,
}

fn default_variant() -> String {
    "xz".into()
}

fn default_source() -> String {
    "default".into()
}

fn default_beam() -> usize {
    DEFAULT_BEAM
}

/// A config file: one `[[experiment]]` table per spec.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: Vec<ExperimentSpec>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<SweepConfig> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }
}

impl ExperimentSpec {
    pub fn new(distance: usize, noise: NoiseModel, shots: usize, seed: u64) -> ExperimentSpec {
        ExperimentSpec {
            distance,
            rounds: None,
            variant: default_variant(),
            schedule: default_source(),
            noise: noise.to_string(),
            shots,
            seed,
            beam: DEFAULT_BEAM,
        }
    }

    pub fn rounds(&self) -> usize {
        self.rounds.unwrap_or(self.distance)
    }

    pub fn with_schedule(mut self, source: &str) -> ExperimentSpec {
        self.schedule = source.into();
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> ExperimentSpec {
        self.variant = variant.to_string();
        self
    }

    pub fn resolve_schedule(&self, patch: &Patch) -> Result<Schedule> {
        resolve_schedule(&self.schedule, patch)
    }

    /// The noisy circuit this spec samples.
    pub fn circuit(&self) -> Result<Circuit> {
        if self.shots == 0 {
            return Err(Error::Unsupported("shots must be >= 1".into()));
        }
        let patch = build_patch(self.distance)?;
        let schedule = self.resolve_schedule(&patch)?;
        let variant: Variant = self.variant.parse()?;
        let noise: NoiseModel = self.noise.parse()?;
        let clean = build_memory_circuit(&patch, &schedule, self.rounds(), variant)?;
        annotate(&clean, &noise)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub shots: usize,
    pub logical_failures: usize,
    pub p_shot: f64,
    pub p_round: f64,
    pub likelihood_interval: (f64, f64),
    /// Data plus auxiliary qubits.
    pub total_qubits: usize,
}

/// Per-round rate of a two-outcome channel applied `rounds` times.
pub fn p_round(p_shot: f64, rounds: usize) -> f64 {
    if p_shot >= 0.5 {
        return p_shot.min(0.5).max(0.5);
    }
    (1.0 - (1.0 - 2.0 * p_shot).powf(1.0 / rounds as f64)) / 2.0
}

fn log_lik(k: usize, n: usize, q: f64) -> f64 {
    let (k, m) = (k as f64, (n - 0) as f64 - k as f64);
    let a = if k == 0.0 { 0.0 } else { k * q.ln() };
    let b = if m == 0.0 { 0.0 } else { m * (1.0 - q).ln() };
    a + b
}

/// Hypotheses `q` whose binomial likelihood is within `factor` of the
/// maximum-likelihood one, as `(low, high)`.
pub fn likelihood_interval(failures: usize, shots: usize, factor: f64) -> (f64, f64) {
    assert!(failures <= shots && shots > 0 && factor >= 1.0);
    let mle = failures as f64 / shots as f64;
    let floor = log_lik(failures, shots, mle) - factor.ln();
    let inside = |q: f64| log_lik(failures, shots, q) >= floor;
    // Bisect between a point inside (`a`) and one outside (`b`).
    let bisect = |mut a: f64, mut b: f64| {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if inside(m) {
                a = m;
            } else {
                b = m;
            }
            if (b - a).abs() <= 1e-6 * a.abs().max(b.abs()) * 1e-3 {
                break;
            }
        }
        a
    };
    let low = if failures == 0 { 0.0 } else { bisect(mle, 0.0) };
    let high = if failures == shots { 1.0 } else { bisect(mle, 1.0) };
    (low, high)
}

/// Sample, decode and count logical failures.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let circuit = spec.circuit()?;
    let dem = compile_dem(&circuit);
    let decoder = Decoder::new(&dem);
    let sampler = FrameSampler::new(&circuit);
    let batches = spec.shots.div_ceil(64);
    // Chunks of batches share a syndrome cache; most syndromes repeat.
    const CHUNK: usize = 256;
    let failures: Result<Vec<usize>> = (0..batches.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut cache: HashMap<Vec<usize>, bool> = HashMap::new();
            let mut fails = 0;
            for b in chunk * CHUNK..((chunk + 1) * CHUNK).min(batches) {
                let lanes = (spec.shots - b * 64).min(64);
                let batch = sampler.sample_batch(spec.seed, b as u64, lanes);
                for k in 0..lanes {
                    let shot = batch.shot(k);
                    let fired = shot.fired();
                    let flip = match cache.get(&fired) {
                        Some(&f) => f,
                        None => {
                            let f = decoder.decode_fired(&fired, spec.beam)?.predicted_flip;
                            cache.insert(fired, f);
                            f
                        }
                    };
                    fails += (flip != shot.observable) as usize;
                }
            }
            Ok(fails)
        })
        .collect();
    let logical_failures: usize = failures?.iter().sum();
    let p_shot = logical_failures as f64 / spec.shots as f64;
    Ok(ExperimentResult {
        shots: spec.shots,
        logical_failures,
        p_shot,
        p_round: p_round(p_shot, spec.rounds()),
        likelihood_interval: likelihood_interval(logical_failures, spec.shots, 1000.0),
        total_qubits: circuit.num_qubits,
    })
}

pub const CSV_HEADER: &str =
    "n_tot,p_round,p_round_low,p_round_high,p_shot,failures,shots,distance,rounds,variant,schedule,noise,seed";

/// One CSV row per spec, in input order, under [`CSV_HEADER`]. The interval
/// columns are the shot-level likelihood bounds converted per round.
pub fn compare_sweep(specs: &[ExperimentSpec]) -> Result<String> {
    if specs.is_empty() {
        return Err(Error::Unsupported("empty sweep".into()));
    }
    let results: Result<Vec<ExperimentResult>> = specs.par_iter().map(run_experiment).collect();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (s, r) in specs.iter().zip(results?) {
        let rounds = s.rounds();
        let _ = writeln!(
            out,
            "{},{:e},{:e},{:e},{:e},{},{},{},{},{},{},{},{}",
            r.total_qubits,
            r.p_round,
            p_round(r.likelihood_interval.0, rounds),
            p_round(r.likelihood_interval.1, rounds),
            r.p_shot,
            r.logical_failures,
            r.shots,
            s.distance,
            rounds,
            s.variant,
            s.schedule,
            s.noise,
            s.seed
        );
    }
    Ok(out)
}

/// [`Schedule::from_source`] plus `worst-uniform`, which depends on the patch.
pub fn resolve_schedule(source: &str, patch: &Patch) -> Result<Schedule> {
    match source {
        "worst-uniform" => worst_uniform_schedule(patch),
        s => Schedule::from_source(s),
    }
}

/// The uniform schedule whose X hooks (every face, every offset) give the
/// lowest hook-augmented distance; ties go to the first order in
/// lexicographic order.
pub fn worst_uniform_schedule(patch: &Patch) -> Result<Schedule> {
    let mut worst: Option<(usize, Schedule)> = None;
    for o in all_orders() {
        let s = Schedule::uniform(o)?;
        let hooks: Vec<_> = propagate_hooks(patch, &s)
            .into_iter()
            .filter(|h| h.pauli == HookPauli::X)
            .collect();
        let v = hook_augmented_distance(patch, &hooks)?.value;
        if worst.as_ref().is_none_or(|(w, _)| v < *w) {
            worst = Some((v, s));
        }
    }
    Ok(worst.expect("720 orders").1)
}
