use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use progcirc::banded::{detect_band, synth_banded, synth_banded_within, Permutation};
use progcirc::circuit::{count_gates, deserialize, predicted_counts, serialize, to_qasm};
use progcirc::h2::{load_h2, nontrivial_entries, reconstruct_h2};
use progcirc::numerics::{Entry, ROUNDED_DATA_TOL};
use progcirc::sample::{random_banded, random_nonunitary, random_orthogonal};
use progcirc::scheme1::synth_scheme1;
use progcirc::scheme2::synth_scheme2;
use progcirc::simulator::verify;
use progcirc::ucr::decompose_circuit;
use progcirc::{Circuit, DenseMatrix, GateCounts, StateVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "progcirc", version, about = "Synthesize and check matrix-programmed quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit for the matrix in MATRIX and write it as JSON.
    Synth {
        matrix: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum, default_value = "1")]
        scheme: Scheme,
        /// Formation block size for scheme 2.
        #[arg(long, default_value_t = 1)]
        block: usize,
    },
    /// Simulate CIRCUIT and compare against direct application of MATRIX.
    Verify {
        matrix: PathBuf,
        circuit: PathBuf,
        /// Input state as a JSON array of amplitudes; uniform when omitted.
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Replace multiplexed rotations by rotations and CNOTs.
    Decompose {
        circuit: PathBuf,
        out: PathBuf,
        /// Write a QASM-like listing instead of JSON.
        #[arg(long)]
        qasm: bool,
    },
    /// Print gate counts next to the closed-form predictions.
    Count {
        circuit: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build and check the 6-qubit hydrogen propagator circuit.
    H2demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded random 2^n x 2^n test matrix.
    Gen {
        n: usize,
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Banded,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Orthogonal,
    Nonunitary,
    Banded,
}

enum Failure {
    Verification(String),
    Input(String),
}

impl From<progcirc::Error> for Failure {
    fn from(e: progcirc::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<DenseMatrix, Failure> {
    DenseMatrix::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    deserialize(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_state(path: &Path) -> Result<StateVector, Failure> {
    let entries: Vec<Entry> =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let psi = StateVector::new(entries.into_iter().map(C64::from).collect())?;
    if (psi.norm() - 1.0).abs() > 1e-8 {
        return Err(progcirc::Error::NotUnit(psi.norm()).into());
    }
    Ok(psi)
}

fn cmd_synth(matrix: &Path, out: &Path, scheme: Scheme, block: usize) -> CmdResult {
    let u = read_matrix(matrix)?;
    let circ = match scheme {
        Scheme::One => synth_scheme1(&u)?,
        Scheme::Two => synth_scheme2(&u, block)?,
        Scheme::Banded => {
            let id = Permutation::identity(u.dim());
            synth_banded(&detect_band(&u, id.clone(), id)?)?.circuit
        }
    };
    write(out, &serialize(&circ))?;
    let chosen = circ.chosen_states();
    let shown: Vec<String> = chosen.iter().take(8).map(|s| s.to_string()).collect();
    println!(
        "{} qubits, {} gates, {} chosen states [{}{}], scale {}",
        circ.num_qubits(),
        circ.gates().len(),
        chosen.len(),
        shown.join(", "),
        if chosen.len() > 8 { ", ..." } else { "" },
        circ.scale_factor()
    );
    Ok(())
}

fn cmd_verify(matrix: &Path, circuit: &Path, psi: Option<&Path>, tol: f64, json: bool) -> CmdResult {
    let u = read_matrix(matrix)?;
    let circ = read_circuit(circuit)?;
    let psi = match psi {
        Some(p) => read_state(p)?,
        None => StateVector::uniform(circ.main().len()),
    };
    let report = verify(&u, &circ, &psi)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("fidelity {:.15}", report.fidelity);
        println!("success probability {:.12}", report.success_probability);
        println!("max amplitude error {:.3e}", report.max_amplitude_error);
        print_counts(&report.decomposed_counts, report.predicted_counts.as_ref());
    }
    if report.passes(tol) {
        Ok(())
    } else {
        Err(Failure::Verification(format!("fidelity {} below 1 - {tol}", report.fidelity)))
    }
}

fn cmd_decompose(circuit: &Path, out: &Path, qasm: bool) -> CmdResult {
    let flat = decompose_circuit(&read_circuit(circuit)?)?;
    write(out, &if qasm { to_qasm(&flat) } else { serialize(&flat) })?;
    println!("{} gates, {}", flat.gates().len(), count_gates(&flat));
    Ok(())
}

fn print_counts(got: &GateCounts, predicted: Option<&GateCounts>) {
    let rows = [
        ("cnot", got.cnot, predicted.map(|p| p.cnot)),
        ("rotation", got.single_rotation, predicted.map(|p| p.single_rotation)),
        ("h", got.hadamard, predicted.map(|p| p.hadamard)),
        ("swap", got.swap, predicted.map(|p| p.swap)),
    ];
    for (name, n, p) in rows {
        match p {
            Some(p) => println!("{name} {n}/{p} predicted"),
            None => println!("{name} {n}"),
        }
    }
    for (name, n) in [("x", got.pauli_x), ("mcx", got.multi_controlled_x), ("crot", got.controlled_rotation)] {
        if n > 0 {
            println!("{name} {n}");
        }
    }
}

fn cmd_count(circuit: &Path, json: bool) -> CmdResult {
    let circ = read_circuit(circuit)?;
    let got = if circ.has_uniform_rotations() {
        count_gates(&decompose_circuit(&circ)?)
    } else {
        count_gates(&circ)
    };
    let predicted = circ.design().and_then(predicted_counts);
    if json {
        let doc = serde_json::json!({ "counts": got, "predicted": predicted });
        println!("{}", serde_json::to_string_pretty(&doc).expect("counts serialize"));
    } else {
        print_counts(&got, predicted.as_ref());
    }
    Ok(())
}

fn cmd_h2demo(seed: u64, json: bool) -> CmdResult {
    let table = load_h2()?;
    let u = reconstruct_h2(&table);
    let bc = synth_banded_within(&table.banded()?, ROUNDED_DATA_TOL)?;
    let (nonzero, diagonal) = nontrivial_entries(&u, ROUNDED_DATA_TOL);
    let defect = u.unitarity_defect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_fidelity = 1.0f64;
    for _ in 0..20 {
        let amps = (0..u.dim())
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let psi = StateVector::normalized(amps)?;
        min_fidelity = min_fidelity.min(verify(&u, &bc.circuit, &psi)?.fidelity);
    }
    let qubits = bc.circuit.num_qubits();
    let controls = table.rotation_bearing();
    if json {
        let doc = serde_json::json!({
            "qubits": qubits,
            "rotation_bearing_controls": controls,
            "nontrivial_entries": nonzero,
            "nontrivial_diagonal": diagonal,
            "unitarity_defect": defect,
            "min_fidelity": min_fidelity,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("summary serializes"));
    } else {
        let within = if defect <= ROUNDED_DATA_TOL { "within" } else { "NOT within" };
        println!("{qubits} qubits, {controls} rotation-bearing controls");
        println!("{nonzero} nontrivial entries, {diagonal} on the diagonal");
        println!("unitarity defect {defect:.4} ({within} {ROUNDED_DATA_TOL:e})");
        println!("min fidelity over 20 inputs 1 - {:.1e}", 1.0 - min_fidelity);
    }
    if min_fidelity >= 1.0 - 1e-6 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("fidelity {min_fidelity} below 1 - 1e-6")))
    }
}

fn cmd_gen(n: usize, kind: Kind, seed: u64, out: Option<&Path>) -> CmdResult {
    if n == 0 || n > 12 {
        return Err(Failure::Input(format!("n = {n} is outside 1..=12")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1 << n;
    let m = match kind {
        Kind::Orthogonal => random_orthogonal(dim, &mut rng),
        Kind::Nonunitary => random_nonunitary(dim, &mut rng),
        Kind::Banded => random_banded(dim, &mut rng),
    };
    let text = m.to_json();
    match out {
        Some(p) => write(p, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth { matrix, out, scheme, block } => cmd_synth(matrix, out, *scheme, *block),
        Command::Verify { matrix, circuit, psi, tol, json } => cmd_verify(matrix, circuit, psi.as_deref(), *tol, *json),
        Command::Decompose { circuit, out, qasm } => cmd_decompose(circuit, out, *qasm),
        Command::Count { circuit, json } => cmd_count(circuit, *json),
        Command::H2demo { seed, json } => cmd_h2demo(*seed, *json),
        Command::Gen { n, kind, seed, out } => cmd_gen(*n, *kind, *seed, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
