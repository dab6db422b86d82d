use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use colorcode::analysis::distance::circuit_distance;
use colorcode::analysis::fractional::distance_model;
use colorcode::analysis::hooks::{hook_augmented_distance, malign_hooks, propagate_hooks, HookPauli};
use colorcode::circuit::{build_memory_circuit, Circuit, Variant};
use colorcode::decode::{Decoder, DEFAULT_BEAM};
use colorcode::dem::DetectorErrorModel;
use colorcode::harness::{compare_sweep, init_workers, resolve_schedule, SweepConfig};
use colorcode::lattice::build_patch;
use colorcode::noise::{annotate, NoiseModel};
use colorcode::sim::{read_shots, sample, write_shots};
use colorcode::{Error, Result};

#[derive(Parser)]
#[command(name = "colorcode", version, about = "Color-code memory circuits, hook analysis and decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a memory circuit and write it in the text interchange format.
    Gen {
        #[arg(long)]
        d: usize,
        /// Defaults to d.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, default_value = "xz")]
        variant: Variant,
        /// `si1000:p`, `uniform:p`, `cnot:p`; omitted for a noiseless circuit.
        #[arg(long)]
        noise: Option<NoiseModel>,
        /// `default`, `worst-uniform`, `uniform:<perm>` or a schedule file.
        #[arg(long, default_value = "default")]
        schedule: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the patch layout and the resolved schedule as text.
    Export {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "default")]
        schedule: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a noisy circuit into its detector error model.
    Dem {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample detector records into a packed binary dump.
    Sample {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a binary shot dump; one line per shot: `<index> <flip> <observed> <exact>`.
    Decode {
        #[arg(long)]
        dem: PathBuf,
        #[arg(long)]
        shots: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BEAM)]
        beam: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-face hook table with malignancy and the hook-augmented distance.
    Hooks {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "default")]
        schedule: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact circuit-level distance (rounds = d, uniform depolarizing).
    Distance {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "default")]
        schedule: String,
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
    },
    /// Run every experiment of a TOML sweep file and print CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_circuit(path: &PathBuf) -> Result<Circuit> {
    Circuit::from_text(&fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            d,
            rounds,
            variant,
            noise,
            schedule,
            out,
        } => {
            let patch = build_patch(d)?;
            let schedule = resolve_schedule(&schedule, &patch)?;
            let mut circuit = build_memory_circuit(&patch, &schedule, rounds.unwrap_or(d), variant)?;
            if let Some(model) = noise {
                circuit = annotate(&circuit, &model)?;
            }
            emit(&out, &circuit.to_text())
        }
        Command::Export { d, schedule, out } => {
            let patch = build_patch(d)?;
            let schedule = resolve_schedule(&schedule, &patch)?;
            emit(&out, &format!("{}{}", patch.to_text(), schedule.to_text()))
        }
        Command::Dem { input, out } => {
            let circuit = read_circuit(&input)?;
            emit(&out, &colorcode::dem::compile_dem(&circuit).to_text())
        }
        Command::Sample {
            input,
            shots,
            seed,
            out,
        } => {
            let circuit = read_circuit(&input)?;
            let records = sample(&circuit, shots, seed);
            let mut w = sink(&out)?;
            write_shots(&mut w, &records)?;
            w.flush()?;
            Ok(())
        }
        Command::Decode { dem, shots, beam, out } => {
            let dem = DetectorErrorModel::from_text(&fs::read_to_string(dem)?)?;
            let records = read_shots(&mut io::BufReader::new(fs::File::open(shots)?), dem.num_detectors)?;
            let decoder = Decoder::new(&dem);
            let mut w = sink(&out)?;
            let mut failures = 0;
            for (k, r) in records.iter().enumerate() {
                let res = decoder.decode_fired(&r.fired(), beam)?;
                failures += (res.predicted_flip != r.observable) as usize;
                writeln!(w, "{k} {} {} {}", res.predicted_flip as u8, r.observable as u8, res.exact as u8)?;
            }
            w.flush()?;
            eprintln!("{failures} logical failures in {} shots", records.len());
            Ok(())
        }
        Command::Hooks { d, schedule, report } => {
            let patch = build_patch(d)?;
            let schedule = resolve_schedule(&schedule, &patch)?;
            let hooks = propagate_hooks(&patch, &schedule);
            let malign = malign_hooks(&patch, &hooks)?;
            let dist = hook_augmented_distance(&patch, &hooks)?;
            let mut text = String::from("face color kind pauli offset support malign\n");
            for (i, h) in hooks.iter().enumerate() {
                let f = patch.face(h.face);
                let support: Vec<String> = h.induced_error.iter().map(|q| q.to_string()).collect();
                text.push_str(&format!(
                    "{} {} {:?} {} {} {} {}\n",
                    f.id,
                    f.color.name(),
                    f.kind,
                    if h.pauli == HookPauli::X { "X" } else { "Z" },
                    h.offset,
                    support.join(","),
                    malign.binary_search(&i).is_ok() as u8
                ));
            }
            let bulk: Vec<_> = hooks.iter().filter(|h| patch.is_interior(h.face) && h.induced_error.len() == 2)
                .cloned().collect();
            let bulk_dist = hook_augmented_distance(&patch, &bulk)?;
            text.push_str(&format!(
                "# hook-augmented distance {} all hooks, {} bulk weight-2 hooks (code distance {d})\n",
                dist.value, bulk_dist.value
            ));
            emit(&report, &text)
        }
        Command::Distance {
            d,
            schedule,
            max_weight,
        } => {
            let patch = build_patch(d)?;
            let schedule = resolve_schedule(&schedule, &patch)?;
            let (_, dem) = distance_model(&patch, &schedule)?;
            match circuit_distance(&dem, max_weight)? {
                Some(r) => println!("circuit distance {} witness {:?}", r.value, r.witness),
                None => println!("circuit distance > {max_weight}"),
            }
            Ok(())
        }
        Command::Sweep { config, out } => {
            let cfg = SweepConfig::from_toml(&fs::read_to_string(config)?)?;
            emit(&out, &compare_sweep(&cfg.experiment)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_workers().and_then(|_| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Parse { .. } | Error::Io(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
