mod common;

use common::{random_hermitian, random_matrix, rng};
use proptest::prelude::*;
use thermocoll::hamiltonians::{conditional_lowering, ising_transition_frequencies};
use thermocoll::linalg::{eig_hermitian, kron_all, EigenDecomposition};
use thermocoll::spin::{basis_vector, on_site, pauli_x, projector, sigma_minus, sigma_plus, Spin};
use thermocoll::transitions::{
    decompose, jump_set, m_matrix, transition_operators, uniqueness_check, zero_frequency_transitions,
};
use thermocoll::{Complex64 as C64, ComplexMatrix, HamiltonianSpec};

fn xy() -> ComplexMatrix {
    HamiltonianSpec::XyDm { j: 1.0 }.build().unwrap()
}

fn ising_jumps(spec: &HamiltonianSpec) -> Vec<ComplexMatrix> {
    let n = spec.qubits();
    let mut out = Vec::new();
    for site in 0..n {
        for tr in ising_transition_frequencies(spec, site).unwrap() {
            let lower = conditional_lowering(site, tr.neighbors, n);
            out.push(lower.adjoint());
            out.push(lower);
        }
    }
    out
}

fn xy_nonzero_jumps() -> Vec<ComplexMatrix> {
    jump_set(&xy(), &[on_site(&pauli_x(), 0, 2)], false, 1e-6).unwrap().into_iter().map(|g| g.operator).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transition_operators_resolve_identity(seed in any::<u64>(), dim in 1usize..9) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, dim);
        let ops = transition_operators(&h).unwrap();
        prop_assert_eq!(ops.len(), dim * dim);
        let mut sum = ComplexMatrix::zeros(dim);
        for o in ops.iter().filter(|o| o.k == o.l) {
            sum += &o.operator;
        }
        prop_assert!(sum.distance(&ComplexMatrix::identity(dim)) < 1e-12);
        for o in &ops {
            let partner = &ops[o.l * dim + o.k];
            prop_assert!(o.operator.adjoint().distance(&partner.operator) < 1e-12);
        }
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), dim in 1usize..9) {
        let mut r = rng(seed);
        let eig = eig_hermitian(&random_hermitian(&mut r, dim)).unwrap();
        let o = random_matrix(&mut r, dim);
        let table = decompose(&o, &eig).unwrap();
        prop_assert!(table.reconstruct().distance(&o) < 1e-12);
        for e in &table.entries {
            prop_assert!((e.omega - (eig.eigenvalues[e.l] - eig.eigenvalues[e.k])).abs() < 1e-10);
        }
    }

    #[test]
    fn m_matrix_is_unitary_and_round_trips(seed in any::<u64>(), dim in 1usize..7) {
        let mut r = rng(seed);
        let eig = eig_hermitian(&random_hermitian(&mut r, dim)).unwrap();
        let m = m_matrix(&eig);
        let id = ComplexMatrix::identity(dim * dim);
        prop_assert!(m.matrix.matmul(&m.matrix.adjoint()).distance(&id) < 1e-12);
        let x = random_matrix(&mut r, dim);
        prop_assert!(m.forward(&m.inverse(&x)).distance(&x) < 1e-12);
        let c = eig.to_eigenbasis(&x);
        prop_assert!(m.forward(&c).distance(&x) < 1e-12);
        prop_assert!(m.min_singular_value() >= 1e-10);
    }

    #[test]
    fn uniqueness_is_permutation_and_scale_invariant(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let mut r = rng(seed);
        let spec = HamiltonianSpec::ising(vec![0.5, 0.5], vec![1.0]).unwrap();
        let mut jumps = ising_jumps(&spec);
        jumps.truncate(4 + (seed % 5) as usize);
        let base = uniqueness_check(&jumps).unwrap();
        let phase = C64::from_polar(scale, rand::Rng::gen_range(&mut r, 0.0..std::f64::consts::TAU));
        let mut shuffled: Vec<ComplexMatrix> = jumps.iter().rev().map(|j| j.scale(phase)).collect();
        shuffled.rotate_left((seed % 3) as usize);
        prop_assert_eq!(uniqueness_check(&shuffled).unwrap(), base);
    }
}

#[test]
fn diagonal_hamiltonian_gives_permutation_phase_m() {
    let h = ComplexMatrix::from_real_diagonal(&[0.3, -1.0, 2.0]);
    let m = m_matrix(&eig_hermitian(&h).unwrap());
    for i in 0..9 {
        let row = m.matrix.row(i);
        let nonzero: Vec<f64> = row.iter().map(|z| z.norm()).filter(|&a| a > 1e-12).collect();
        assert_eq!(nonzero.len(), 1);
        assert!((nonzero[0] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn xy_lowering_operator_expansion() {
    // Eigenbasis ψ₁,₂ = (↓↓ ± ↑↑)/√2 at ±2 and ψ₃,₄ = (↓↑ ± i ↑↓)/√2 at ±2.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |bits: &str| basis_vector(bits).unwrap();
    let combo = |a: &[C64], b: &[C64], c: C64| -> Vec<C64> { a.iter().zip(b).map(|(x, y)| (x + y * c) * s).collect() };
    let psi = [
        combo(&v("11"), &v("00"), C64::new(1.0, 0.0)),
        combo(&v("11"), &v("00"), C64::new(-1.0, 0.0)),
        combo(&v("10"), &v("01"), C64::new(0.0, 1.0)),
        combo(&v("10"), &v("01"), C64::new(0.0, -1.0)),
    ];
    let u = ComplexMatrix::from_fn(4, |i, k| psi[k][i]);
    let basis = EigenDecomposition { eigenvalues: vec![2.0, -2.0, 2.0, -2.0], eigenvectors: u };
    assert!(basis.reconstruct().distance(&xy()) < 1e-12);

    let lower = on_site(&sigma_minus(), 0, 2);
    let table = decompose(&lower, &basis).unwrap();
    let nonzero: Vec<_> = table.nonzero(1e-12).collect();
    assert_eq!(nonzero.len(), 8);
    assert!(nonzero.iter().all(|e| (e.coefficient.norm() - 0.5).abs() < 1e-12));
    let moving: Vec<(usize, usize)> =
        nonzero.iter().filter(|e| e.omega.abs() > 1e-9).map(|e| (e.k + 1, e.l + 1)).collect();
    assert_eq!(moving, vec![(1, 4), (2, 3), (3, 2), (4, 1)]);
    for e in nonzero.iter().filter(|e| e.omega.abs() > 1e-9) {
        assert!((e.omega.abs() - 4.0).abs() < 1e-12);
    }

    // The same structure is visible in the solver's own (degenerate-rotated) basis.
    let own = decompose(&lower, &eig_hermitian(&xy()).unwrap()).unwrap();
    let weight: f64 = own.entries.iter().filter(|e| e.omega.abs() > 1e-9).map(|e| e.coefficient.norm_sqr()).sum();
    assert!((weight - 1.0).abs() < 1e-12);
}

#[test]
fn ising_jump_set_matches_projector_construction() {
    let spec = HamiltonianSpec::ising(vec![0.5, 0.5], vec![1.0]).unwrap();
    let h = spec.build().unwrap();
    let couplings = [on_site(&pauli_x(), 0, 2), on_site(&pauli_x(), 1, 2)];
    let groups = jump_set(&h, &couplings, false, 1e-6).unwrap();
    assert_eq!(groups.len(), 8);
    let explicit = |site: usize, neighbor: Spin| {
        let factors = if site == 0 {
            vec![sigma_minus(), projector(neighbor)]
        } else {
            vec![projector(neighbor), sigma_minus()]
        };
        kron_all(&factors)
    };
    for site in 0..2 {
        for neighbor in [Spin::Up, Spin::Down] {
            let lower = explicit(site, neighbor);
            let raise = lower.adjoint();
            for target in [lower, raise] {
                let hits = groups.iter().filter(|g| g.source == site && g.operator.distance(&target) < 1e-12).count();
                assert_eq!(hits, 1, "site {site}, neighbour {neighbor:?}");
            }
        }
    }
}

#[test]
fn commutant_dimensions() {
    assert_eq!(uniqueness_check(&[sigma_minus(), sigma_plus()]).unwrap().commutant_dim, 1);

    let nonzero = uniqueness_check(&xy_nonzero_jumps()).unwrap();
    assert!(nonzero.commutant_dim >= 2);
    assert!(nonzero.adjoint_closed && !nonzero.unique);

    // Lumping each level's zero-frequency block into one operator keeps a symmetry.
    let lumped: Vec<ComplexMatrix> =
        jump_set(&xy(), &[on_site(&pauli_x(), 0, 2)], true, 1e-6).unwrap().into_iter().map(|g| g.operator).collect();
    assert_eq!(uniqueness_check(&lumped).unwrap().commutant_dim, 2);

    let mut with_zero = xy_nonzero_jumps();
    let degenerate = zero_frequency_transitions(&xy(), &[on_site(&pauli_x(), 0, 2)]).unwrap();
    assert_eq!(degenerate.len(), 4);
    with_zero.extend(degenerate.into_iter().map(|t| t.operator));
    let flipped = uniqueness_check(&with_zero).unwrap();
    assert_eq!(flipped.commutant_dim, 1);
    assert!(flipped.unique);

    let n2 = HamiltonianSpec::ising(vec![0.5, 0.5], vec![1.0]).unwrap();
    let j2 = ising_jumps(&n2);
    assert_eq!(j2.len(), 8);
    assert!(uniqueness_check(&j2).unwrap().unique);

    let n3 = HamiltonianSpec::ising(vec![0.5, 0.3, 0.5], vec![1.0, 0.8]).unwrap();
    let j3 = ising_jumps(&n3);
    assert_eq!(j3.len(), 16);
    assert_eq!(uniqueness_check(&j3).unwrap(), thermocoll::transitions::UniquenessReport {
        commutant_dim: 1,
        adjoint_closed: true,
        unique: true
    });
}
