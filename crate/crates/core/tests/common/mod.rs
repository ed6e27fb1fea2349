#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermocoll::{Complex64 as C64, ComplexMatrix, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    random_matrix(rng, dim).hermitian_part()
}

/// `G G† / Tr(G G†)` for a random Ginibre matrix.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim);
    let p = g.matmul(&g.adjoint());
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

/// Truncated Taylor series of `exp(−iHt)` with scaling and squaring.
pub fn taylor_propagator(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let norm = h.frobenius_norm() * t.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let step = t / f64::from(2u32.pow(squarings));
    let a = h.scale(C64::new(0.0, -step));
    let mut term = ComplexMatrix::identity(h.dim());
    let mut sum = term.clone();
    for k in 1..30 {
        term = term.matmul(&a).scale_real(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}
