//! `mgh`: classify fermionic gates, run the teleportation protocol,
//! reconstruct unitaries from CAR tuples and parse circuit files.

mod source;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use mgh_core::hierarchy::{two_qubit_min_level, DEFAULT_K_MAX};
use mgh_core::majorana::parity_of;
use mgh_core::random::random_state;
use mgh_core::selftest::{run_criterion, CRITERIA, DEFAULT_SEED};
use mgh_core::svn::conjugated_tuple;
use mgh_core::{
    circuit_to_operator, circuit_to_rotation, classify, parse_circuit, simulate_protocol,
    svn_reconstruct, verify_protocol, CarSet, Error, Operator, Tolerances,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use source::{read, GateSource};

const EXIT_INPUT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "mgh", version, about = "Matchgate hierarchy toolkit")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Seed for every randomised step
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Highest hierarchy level searched
    #[arg(long = "k-max", global = true)]
    k_max: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Canonical,
    Matrix,
    Rotation,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parity, Gaussianity, hierarchy level and two-qubit class of a gate
    Classify(GateSource),
    /// Run the gate-teleportation protocol over every outcome
    Teleport {
        #[command(flatten)]
        source: GateSource,
        /// Number of random input states
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Keep states and matrices in the JSON transcript
        #[arg(long)]
        full: bool,
    },
    /// Reconstruct the unitary behind a CAR tuple file
    Svn {
        /// JSON file `{"n": n, "ops": [matrix, ..]}`
        tuple: PathBuf,
    },
    /// Write the tuple `U^dagger c_mu U` of a gate as JSON
    Tuple(GateSource),
    /// Parse and validate a circuit file
    Parse {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value = "canonical")]
        emit: Emit,
    },
    /// Two-qubit class phases realised at each level
    Classes,
    /// Run the acceptance corpus
    Selftest {
        /// Run a single criterion
        #[arg(long)]
        only: Option<u32>,
    },
}

/// Failure that ends the command with an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure {
            code: EXIT_INPUT,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VanishingBranch { .. } => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn tolerances() -> Result<Tolerances, String> {
    let tol = Tolerances::default();
    match std::env::var("MGH_TOL") {
        Ok(v) => {
            let residual: f64 = v.trim().parse().map_err(|_| format!("MGH_TOL: bad number `{v}`"))?;
            tol.with_residual(residual).map_err(|e| format!("MGH_TOL: {e}"))
        }
        Err(_) => Ok(tol),
    }
}

fn emit_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn cmd_classify(cli: &Cli, source: &GateSource, tol: &Tolerances) -> CmdResult {
    let gate = source.resolve()?;
    let k_max = cli.k_max.unwrap_or(DEFAULT_K_MAX);
    let report = classify(&gate.op, k_max, tol)?;
    let fermionic = report.parity.is_fermionic();
    match cli.format {
        Format::Json => emit_json(&report),
        Format::Text => {
            println!("gate: {}", gate.label);
            println!("qubits: {}", report.n_qubits);
            println!("parity: {}", report.parity);
            println!("gaussian: {}", if report.is_gaussian { "yes" } else { "no" });
            if let Some(det) = report.rotation_det {
                println!("rotation det: {det:+}");
            }
            match report.min_level {
                Some(k) => println!("min level: {k}"),
                None if !fermionic => println!("min level: none (not fermionic)"),
                None => println!("min level: above {} (searched to {})", report.k_max, report.searched_to),
            }
            if let Some(t) = &report.two_qubit {
                println!("det A: {}", fmt_complex(t.det_a));
                println!("det B: {}", fmt_complex(t.det_b));
                println!("phi: {}", t.phi);
                println!("generalised phi: {}", t.generalised_phi);
                match t.level_closed_form {
                    Some(k) => println!("closed-form level: {k}"),
                    None => println!("closed-form level: none (generic phase)"),
                }
                println!("class: {}", t.class_representative);
            }
        }
    }
    Ok(if report.min_level.is_none() && fermionic { EXIT_INCONCLUSIVE } else { 0 })
}

fn cmd_teleport(cli: &Cli, source: &GateSource, trials: usize, full: bool, tol: &Tolerances) -> CmdResult {
    let gate = source.resolve()?;
    let seed = cli.seed.unwrap_or(0);
    let k_max = cli.k_max.unwrap_or(4);
    let report = verify_protocol(&gate.op, trials, seed, k_max, tol)?;
    let psi = random_state(gate.op.n_qubits(), &mut ChaCha8Rng::seed_from_u64(seed));
    let transcript = simulate_protocol(&gate.op, &psi, tol)?;
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    match cli.format {
        Format::Json => emit_json(&json!({
            "gate": gate.label,
            "verdict": verdict,
            "seed": seed,
            "report": report,
            "transcript": transcript.to_json(full),
        })),
        Format::Text => {
            println!(
                "{verdict}: {} branches, {} trials, max residual {:.3e}, max probability deviation {:.3e}",
                report.branches, report.trials, report.max_residual, report.max_probability_deviation
            );
            let levels: Vec<String> = report
                .correction_levels
                .iter()
                .map(|l| match l.level {
                    Some(k) => format!("level {k} x {}", l.count),
                    None => format!("above {} x {}", report.k_max, l.count),
                })
                .collect();
            println!("distinct corrections: {} ({})", report.distinct_corrections, levels.join(", "));
        }
    }
    Ok(if report.passed { 0 } else { EXIT_VERIFY })
}

#[derive(Serialize, Deserialize)]
struct TupleFile {
    n: usize,
    ops: Vec<Operator>,
}

fn cmd_svn(cli: &Cli, path: &PathBuf, tol: &Tolerances) -> CmdResult {
    let file: TupleFile =
        serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let set = CarSet::new(file.n, file.ops)?;
    let result = svn_reconstruct(&set, tol)?;
    let passed = result.max_residual() < tol.residual && result.u.unitarity_residual() < tol.unitary;
    match cli.format {
        Format::Json => emit_json(&json!({
            "u": result.u,
            "residuals": result.residuals,
            "max_residual": result.max_residual(),
            "phase_fixed": result.phase_fixed,
            "probe": result.probe,
            "parity": parity_of(&result.u, tol),
        })),
        Format::Text => {
            println!(
                "{}: max conjugation residual {:.3e}, probe |{}>, parity {}",
                if passed { "PASS" } else { "FAIL" },
                result.max_residual(),
                result.probe,
                parity_of(&result.u, tol)
            );
            for row in result.u.rows() {
                let cells: Vec<String> = row.iter().map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
                println!("  {}", cells.join("  "));
            }
        }
    }
    Ok(if passed { 0 } else { EXIT_VERIFY })
}

fn cmd_tuple(source: &GateSource) -> CmdResult {
    let gate = source.resolve()?;
    let set = conjugated_tuple(&gate.op)?;
    emit_json(&TupleFile {
        n: set.n_modes(),
        ops: set.ops().to_vec(),
    });
    Ok(0)
}

fn cmd_parse(path: &PathBuf, emit: Emit) -> CmdResult {
    let c = parse_circuit(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    match emit {
        Emit::Canonical => print!("{}", c.to_text()),
        Emit::Matrix => emit_json(&circuit_to_operator(&c)),
        Emit::Rotation => {
            let r = circuit_to_rotation(&c)?;
            let rows: Vec<Vec<f64>> = r.row_iter().map(|row| row.iter().copied().collect()).collect();
            emit_json(&json!({ "n": c.n_qubits(), "rotation": rows }));
        }
    }
    Ok(0)
}

fn cmd_classes(cli: &Cli, tol: &Tolerances) -> CmdResult {
    let k_max = cli.k_max.unwrap_or(6).max(2);
    let mut levels = Vec::new();
    for k in 2..=k_max {
        let m = k - 2;
        let mut even = Vec::new();
        for j in 0..(1u64 << m) {
            let phi = 2.0 * PI * j as f64 / (1u64 << m) as f64;
            let g = mgh_core::circuits::gates::cphase(phi);
            if two_qubit_min_level(&g, tol)? <= k {
                even.push(phi);
            }
        }
        let mut generalised: Vec<f64> = even.iter().map(|&p| p.min(2.0 * PI - p)).collect();
        generalised.sort_by(f64::total_cmp);
        generalised.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        levels.push(json!({ "k": k, "even": even, "generalised": generalised }));
    }
    match cli.format {
        Format::Json => emit_json(&json!({ "levels": levels })),
        Format::Text => {
            for l in &levels {
                println!(
                    "level {}: {} even classes, {} generalised classes {}",
                    l["k"],
                    l["even"].as_array().map_or(0, Vec::len),
                    l["generalised"].as_array().map_or(0, Vec::len),
                    l["generalised"]
                );
            }
        }
    }
    Ok(0)
}

fn cmd_selftest(cli: &Cli, only: Option<u32>) -> CmdResult {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let ids: Vec<u32> = match only {
        Some(id) if (1..=CRITERIA).contains(&id) => vec![id],
        Some(id) => return Err(format!("no criterion {id}; choose 1..={CRITERIA}").into()),
        None => (1..=CRITERIA).collect(),
    };
    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&id| s.spawn(move || run_criterion(id, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    match cli.format {
        Format::Json => emit_json(&results),
        Format::Text => results.iter().for_each(|r| println!("{r}")),
    }
    Ok(if results.iter().all(|r| r.passed) { 0 } else { EXIT_VERIFY })
}

fn run(cli: &Cli) -> CmdResult {
    let tol = tolerances()?;
    match &cli.command {
        Command::Classify(source) => cmd_classify(cli, source, &tol),
        Command::Teleport { source, trials, full } => cmd_teleport(cli, source, *trials, *full, &tol),
        Command::Svn { tuple } => cmd_svn(cli, tuple, &tol),
        Command::Tuple(source) => cmd_tuple(source),
        Command::Parse { circuit, emit } => cmd_parse(circuit, *emit),
        Command::Classes => cmd_classes(cli, &tol),
        Command::Selftest { only } => cmd_selftest(cli, *only),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use mgh_core::majorana::jw_majorana;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn majorana_source_matches_core() {
        let op = source::gate_from_spec("MAJORANA(1)", Some(2)).unwrap();
        assert_eq!(op, jw_majorana(2, 1).unwrap());
    }
}
