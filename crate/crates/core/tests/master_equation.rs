mod common;

use common::{random_matrix, random_state, rng};
use proptest::prelude::*;
use thermocoll::hamiltonians::conditional_lowering;
use thermocoll::lindblad::{dissipator, integrate, ising_rhs, IntegrationOptions, MasterEquation, RateOptions};
use thermocoll::spin::{pauli_z, Spin};
use thermocoll::states::{thermal_state, trace_distance};
use thermocoll::{
    AncillaSpec, CollisionMode, CollisionSchedule, ComplexMatrix, DensityMatrix, HamiltonianSpec, Observer, Temperature,
};

fn t10() -> Temperature {
    Temperature::from_millikelvin(10.0).unwrap()
}

fn tls_schedule(h_b: f64, count: usize) -> CollisionSchedule {
    CollisionSchedule::new(200.0, count, CollisionMode::Sequential, vec![AncillaSpec::new(h_b, t10(), 1e-3, 0)]).unwrap()
}

fn ising2() -> HamiltonianSpec {
    HamiltonianSpec::ising(vec![0.5, 0.5], vec![1.0]).unwrap()
}

fn ising2_ancillae() -> Vec<AncillaSpec> {
    [(0, 1.5), (0, 0.5), (1, 1.5), (1, 0.5)].into_iter().map(|(s, h)| AncillaSpec::new(h, t10(), 1e-3, s)).collect()
}

fn excited() -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0, 0.0])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dissipator_is_traceless_and_hermitian(seed in any::<u64>(), dim in 2usize..9) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, dim);
        let o = random_matrix(&mut r, dim);
        let d = dissipator(rho.matrix(), &o).unwrap();
        prop_assert!(d.trace().norm() <= 1e-12 * (1.0 + o.frobenius_norm().powi(2)));
        prop_assert!(d.hermiticity_deviation() <= 1e-12 * (1.0 + o.frobenius_norm().powi(2)));
    }
}

#[test]
fn gibbs_state_is_stationary_for_every_model() {
    let tls = MasterEquation::tls(1.0, &tls_schedule(1.0, 2), RateOptions::default()).unwrap();
    let h = pauli_z();
    let gibbs = thermal_state(&h, t10()).unwrap();
    for t in [0.0, 37.0, 200.0, 311.0] {
        assert!(tls.residual(gibbs.matrix(), t).unwrap() <= 1e-10 * tls.max_rate());
    }

    for mode in [CollisionMode::Sequential, CollisionMode::Simultaneous] {
        let s = CollisionSchedule::new(400.0, 2, mode, ising2_ancillae()).unwrap();
        let me = MasterEquation::ising(&ising2(), &s, RateOptions::default()).unwrap();
        let gibbs = thermal_state(&ising2().build().unwrap(), t10()).unwrap();
        for t in [10.0, 390.0, 900.0, 2500.0] {
            assert!(me.residual(gibbs.matrix(), t).unwrap() <= 1e-10 * me.max_rate(), "{mode:?} t = {t}");
        }
    }

    let hxy = HamiltonianSpec::XyDm { j: 1.0 }.build().unwrap();
    let s = CollisionSchedule::new(400.0, 2, CollisionMode::Sequential, vec![AncillaSpec::new(2.0, t10(), 1e-3, 0)])
        .unwrap();
    let me = MasterEquation::secular(&hxy, &s, RateOptions::default()).unwrap();
    let gibbs = thermal_state(&hxy, t10()).unwrap();
    assert!(me.residual(gibbs.matrix(), 300.0).unwrap() <= 1e-10 * me.max_rate());
}

#[test]
fn zero_rates_vanish() {
    let s = CollisionSchedule::new(
        400.0,
        1,
        CollisionMode::Sequential,
        ising2_ancillae().into_iter().map(|a| AncillaSpec { g: 0.0, ..a }).collect(),
    )
    .unwrap();
    let mut r = rng(5);
    let rho = random_state(&mut r, 4);
    assert_eq!(ising_rhs(rho.matrix(), 100.0, &s, &ising2()).unwrap().frobenius_norm(), 0.0);
}

#[test]
fn down_neighbour_sector_is_frozen_by_up_neighbour_ancilla() {
    // Site 0 flips with ω = 3 only when site 1 is ↑.
    let s = CollisionSchedule::new(400.0, 1, CollisionMode::Sequential, vec![AncillaSpec::new(1.5, t10(), 1e-3, 0)])
        .unwrap();
    let me = MasterEquation::ising(&ising2(), &s, RateOptions::default()).unwrap();
    assert_eq!(me.jumps.len(), 2);
    let up = thermocoll::hamiltonians::NeighborConfig { left: None, right: Some(Spin::Up) };
    assert!(me.jumps[0].operator.distance(&conditional_lowering(0, up, 2)) == 0.0);
    let mut r = rng(8);
    for _ in 0..10 {
        let rho = random_state(&mut r, 4);
        let d = me.rhs(rho.matrix(), 250.0).unwrap();
        // Basis order ↑↑, ↑↓, ↓↑, ↓↓; site 1 is ↓ in entries 1 and 3.
        assert_eq!(d[(1, 1)].norm(), 0.0);
        assert_eq!(d[(3, 3)].norm(), 0.0);
        assert!(d[(0, 0)].norm() > 0.0);
    }
}

#[test]
fn resonant_decay_is_monotone_and_thermalizes() {
    let s = tls_schedule(1.0, 100);
    let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
    let target = thermal_state(&pauli_z(), t10()).unwrap();
    let obs = Observer::new(&pauli_z(), target).unwrap();
    let traj = integrate(&me, &excited(), &obs, IntegrationOptions::default()).unwrap();
    let f = traj.fidelities();
    assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(*f.last().unwrap() >= 0.99);
    for sample in &traj.samples {
        assert!((sample.trace - 1.0).abs() <= 1e-10);
        assert!(sample.state.matrix().hermiticity_deviation() <= 1e-10);
    }
}

#[test]
fn long_time_populations_obey_detailed_balance() {
    let s = tls_schedule(1.0, 400);
    let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
    let obs = Observer::new(&pauli_z(), DensityMatrix::maximally_mixed(2)).unwrap();
    let traj = integrate(&me, &excited(), &obs, IntegrationOptions::default()).unwrap();
    let p = traj.last().state.populations();
    let expected = (2.0 * t10().beta()).exp();
    assert!(((p[1] / p[0]) / expected - 1.0).abs() <= 1e-3, "{} vs {expected}", p[1] / p[0]);
}

#[test]
fn step_halving_converges() {
    let s = tls_schedule(1.0, 5);
    let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
    let obs = Observer::new(&pauli_z(), DensityMatrix::maximally_mixed(2)).unwrap();
    let mut r = rng(2);
    let rho0 = random_state(&mut r, 2);
    let run = |dt: f64| {
        let opts = IntegrationOptions { dt: Some(dt), ..Default::default() };
        integrate(&me, &rho0, &obs, opts).unwrap().last().state.clone()
    };
    let coarse = run(4.0);
    let fine = run(2.0);
    assert!(trace_distance(&coarse, &fine).unwrap() <= 1e-8);
}

#[test]
fn schrodinger_picture_keeps_populations() {
    let s = tls_schedule(1.0, 3);
    let mut r = rng(4);
    let rho0 = random_state(&mut r, 2);
    let target = thermal_state(&pauli_z(), t10()).unwrap();
    let obs = Observer::new(&pauli_z(), target).unwrap();
    let interaction = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
    let schrodinger = interaction.clone().with_hamiltonian(pauli_z()).unwrap();
    let opts = IntegrationOptions { dt: Some(0.01), ..Default::default() };
    let a = integrate(&interaction, &rho0, &obs, IntegrationOptions::default()).unwrap();
    let b = integrate(&schrodinger, &rho0, &obs, opts).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert!((x.populations[0] - y.populations[0]).abs() < 1e-9);
        assert!((x.fidelity - y.fidelity).abs() < 1e-7, "{} vs {}", x.fidelity, y.fidelity);
    }
}
