mod common;

use progcirc::banded::{detect_band, synth_banded, synth_banded_within, BandedMatrix, Permutation};
use progcirc::circuit::count_gates;
use progcirc::h2::{load_h2, reconstruct_h2};
use progcirc::numerics::{c, DenseMatrix, C64, ROUNDED_DATA_TOL};
use progcirc::sample::random_banded;
use progcirc::scheme1::synth_scheme1;
use progcirc::simulator::{apply, extract, reconstruct_output, verify};
use progcirc::Error;
use rand::seq::SliceRandom;

use common::{apply_matrix, max_diff, random_state, rng};

fn shuffled(len: usize, seed: u64) -> Permutation {
    let mut v: Vec<usize> = (0..len).collect();
    v.shuffle(&mut rng(seed));
    Permutation::new(v).unwrap()
}

/// `U[row[i]][col[j]] = B[i][j]`, so the permutations turn `U` back into `B`.
fn hide(b: &DenseMatrix, row: &Permutation, col: &Permutation) -> DenseMatrix {
    let mut u = DenseMatrix::zeros(b.dim());
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            u.set(row.as_slice()[i], col.as_slice()[j], b.get(i, j));
        }
    }
    u
}

#[test]
fn identity_passes_through() {
    let bm = detect_band(&DenseMatrix::identity(16), Permutation::identity(16), Permutation::identity(16)).unwrap();
    let bc = synth_banded(&bm).unwrap();
    assert_eq!(bc.circuit.num_qubits(), 6);
    assert_eq!(bc.circuit.chosen_states(), (0..16).map(|i| 4 * i).collect::<Vec<_>>().as_slice());
    let psi = random_state(4, &mut rng(1));
    let ex = extract(&bc.circuit, &apply(&bc.circuit, &psi).unwrap()).unwrap();
    let out = bc.unpermute_output(&reconstruct_output(&bc.circuit, &ex));
    assert!(max_diff(&out, psi.amplitudes()) < 1e-12);
}

#[test]
fn random_banded_with_hidden_permutations() {
    for n in 1..=4 {
        for seed in 0..5 {
            let b = random_banded(1 << n, &mut rng(100 + seed));
            let (rp, cp) = (shuffled(1 << n, 200 + seed), shuffled(1 << n, 300 + seed));
            let u = hide(&b, &rp, &cp);
            let bm = detect_band(&u, rp, cp).unwrap();
            assert_eq!(bm.permuted(), &b);
            let bc = synth_banded(&bm).unwrap();
            assert_eq!(bc.circuit.num_qubits(), n + 2);
            let psi = random_state(n, &mut rng(400 + seed));
            let ex = extract(&bc.circuit, &apply(&bc.circuit, &bc.permute_input(&psi).unwrap()).unwrap()).unwrap();
            let out = bc.unpermute_output(&reconstruct_output(&bc.circuit, &ex));
            assert!(max_diff(&out, &apply_matrix(&u, psi.amplitudes())) < 1e-10, "n={n} seed={seed}");
        }
    }
}

#[test]
fn agrees_with_generic_scheme1() {
    for seed in 0..5 {
        let b = random_banded(8, &mut rng(500 + seed));
        let bm = detect_band(&b, Permutation::identity(8), Permutation::identity(8)).unwrap();
        let bc = synth_banded(&bm).unwrap();
        let generic = synth_scheme1(&b).unwrap();
        assert!(bc.circuit.num_qubits() < generic.num_qubits());
        let psi = random_state(3, &mut rng(600 + seed));
        let read = |circ: &progcirc::Circuit| {
            let ex = extract(circ, &apply(circ, &psi).unwrap()).unwrap();
            reconstruct_output(circ, &ex)
        };
        assert!(max_diff(&read(&bc.circuit), &read(&generic)) < 1e-10);
    }
}

#[test]
fn complex_banded_uses_two_networks() {
    let mut u = DenseMatrix::zeros(4);
    let (a, b) = (C64::from_polar(0.6, 0.3), C64::from_polar(0.8, -1.1));
    u.set(0, 0, a);
    u.set(0, 1, b);
    u.set(1, 0, -b.conj());
    u.set(1, 1, a.conj());
    u.set(2, 2, c(0.0, 1.0));
    u.set(3, 3, c(-1.0, 0.0));
    let bm = detect_band(&u, Permutation::identity(4), Permutation::identity(4)).unwrap();
    let bc = synth_banded(&bm).unwrap();
    assert_eq!(count_gates(&bc.circuit).uniform_rotation, 2);
    let psi = random_state(2, &mut rng(7));
    assert!(verify(&u, &bc.circuit, &psi).unwrap().max_amplitude_error < 1e-12);
}

#[test]
fn three_demands_on_one_column_are_refused() {
    // column 1 is needed by rows 0, 1 and 2
    let u = DenseMatrix::from_real_rows(&[
        vec![0.6, 0.8, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.5, 0.5, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let bm = detect_band(&u, Permutation::identity(4), Permutation::identity(4)).unwrap();
    assert!(matches!(synth_banded(&bm), Err(Error::NotBanded { .. })));
}

#[test]
fn explicit_windows_are_checked() {
    let u = DenseMatrix::identity(4);
    let id = Permutation::identity(4);
    assert!(BandedMatrix::with_windows(&u, id.clone(), id.clone(), vec![1, 0, 1, 2]).is_err());
    assert!(BandedMatrix::with_windows(&u, id.clone(), id.clone(), vec![0, 1, 2, 3]).is_err());
    assert!(BandedMatrix::with_windows(&u, id.clone(), id, vec![0, 0, 2, 2]).is_ok());
}

#[test]
fn h2_table_structure() {
    let table = load_h2().unwrap();
    let u = reconstruct_h2(&table);
    // accepted with identity permutations
    detect_band(&u, Permutation::identity(16), Permutation::identity(16)).unwrap();
    let bc = synth_banded_within(&table.banded().unwrap(), ROUNDED_DATA_TOL).unwrap();
    assert_eq!(bc.circuit.num_qubits(), 6);
    let psi = random_state(4, &mut rng(9));
    assert!(verify(&u, &bc.circuit, &psi).unwrap().fidelity > 1.0 - 1e-6);
    // some four-decimal moduli exceed one
    assert!(synth_banded(&table.banded().unwrap()).is_err());
}

#[test]
fn h2_angles_match_elements_except_one_record() {
    let table = load_h2().unwrap();
    let bad: Vec<&str> = table
        .records
        .iter()
        .filter(|r| r.consistency_error() > 5e-4)
        .map(|r| r.control.as_str())
        .collect();
    assert_eq!(bad, vec!["11001"]);
}
