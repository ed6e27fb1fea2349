use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::Tolerances;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `H = U · diag(λ) · U†` of a Hermitian matrix.
///
/// Eigenvalues are ascending; column `k` of `eigenvectors` is the `k`-th
/// eigenstate. Within a degenerate eigenspace the choice of basis is whatever
/// the sweep converged to, so consumers must not depend on it.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `U · diag(f(λ)) · U†`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = self.dim();
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| u[(i, k)] * fl[k] * u[(j, k)].conj()).sum())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }

    /// Expresses `op` in the eigenbasis: entry (k, l) is ⟨ψ_k|op|ψ_l⟩.
    pub fn to_eigenbasis(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let u = &self.eigenvectors;
        u.adjoint().matmul(op).matmul(u)
    }

    pub fn from_eigenbasis(&self, op: &ComplexMatrix) -> ComplexMatrix {
        op.conjugate_by(&self.eigenvectors)
    }

    /// Groups eigenvalue indices into levels whose eigenvalues lie within `tol`
    /// of the previous member (eigenvalues are sorted, so levels are contiguous).
    pub fn levels(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut levels: Vec<Vec<usize>> = Vec::new();
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            match levels.last_mut() {
                Some(level) if (e - self.eigenvalues[*level.last().unwrap()]).abs() <= tol => {
                    level.push(k)
                }
                _ => levels.push(vec![k]),
            }
        }
        levels
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with(h, &Tolerances::default())
}

pub fn eig_hermitian_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    h.ensure_hermitian(tol.hermiticity * h.frobenius_norm().max(1.0))?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 || r <= 1e-18 * scale {
                    continue;
                }
                // Phase-reduce the 2×2 block to real symmetric, then rotate.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Unitary propagator `exp(−i h t)` built from the spectral decomposition.
pub fn propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidSpec(format!("propagation time must be ≥ 0, got {t}")));
    }
    let eig = eig_hermitian(h)?;
    Ok(propagator_from(&eig, t))
}

pub fn propagator_from(eig: &EigenDecomposition, t: f64) -> ComplexMatrix {
    eig.map_spectrum(|l| C64::from_polar(1.0, -l * t))
}
