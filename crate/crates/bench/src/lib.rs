//! Fixtures shared by the criterion benchmarks.

use thermocoll::{AncillaSpec, CollisionMode, CollisionSchedule, HamiltonianSpec, Temperature};

pub fn bath_temperature() -> Temperature {
    Temperature::from_millikelvin(10.0).expect("positive temperature")
}

/// Resonant single-ancilla schedule on a two-level system with gap `2h_s`.
pub fn tls_schedule(h_s: f64, count: usize) -> CollisionSchedule {
    let a = AncillaSpec::new(h_s, bath_temperature(), 1e-3, 0);
    CollisionSchedule::new(200.0, count, CollisionMode::Sequential, vec![a]).expect("valid schedule")
}

/// Two-spin Ising chain `h = (0.5, 0.5)`, `J = 1` with one ancilla per transition.
pub fn ising2(mode: CollisionMode, count: usize) -> (HamiltonianSpec, CollisionSchedule) {
    let spec = HamiltonianSpec::ising(vec![0.5, 0.5], vec![1.0]).expect("valid chain");
    let t = bath_temperature();
    let ancillae = [(0, 1.5), (0, 0.5), (1, 1.5), (1, 0.5)]
        .into_iter()
        .map(|(site, h_b)| AncillaSpec::new(h_b, t, 1e-3, site))
        .collect();
    let schedule = CollisionSchedule::new(400.0, count, mode, ancillae).expect("valid schedule");
    (spec, schedule)
}

/// Random-looking but deterministic Hermitian matrix of dimension `dim`.
pub fn hermitian(dim: usize) -> thermocoll::ComplexMatrix {
    thermocoll::ComplexMatrix::from_fn(dim, |i, j| {
        let (a, b) = (i.min(j) as f64, i.max(j) as f64);
        let re = ((a * 7.3 + b * 3.1).sin() + (i == j) as u8 as f64 * a).cos();
        let im = if i == j { 0.0 } else { (a * 1.7 - b * 0.9).sin() * if i < j { 1.0 } else { -1.0 } };
        thermocoll::Complex64::new(re, im)
    })
}
