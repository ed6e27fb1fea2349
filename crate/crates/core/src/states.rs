//! Density matrices, Gibbs states and state-comparison measures.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, EigenDecomposition};
use crate::units::Temperature;

/// Tolerance for Hermiticity, unit trace and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, STATE_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let dev = m.hermiticity_deviation();
        if dev > tol {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {dev:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let m = m.hermitian_part();
        let min = eig_hermitian(&m)?.eigenvalues[0];
        if min < -tol {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix without validation. Callers guarantee the invariants.
    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexMatrix::outer(&unit, &unit)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.0.matmul(&self.0).trace().re
    }

    /// Diagonal of the state, i.e. populations in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.0.real_diagonal()
    }

    /// Populations ⟨ψ_k|ρ|ψ_k⟩ in the eigenbasis of a decomposition.
    pub fn populations_in(&self, basis: &EigenDecomposition) -> Vec<f64> {
        basis.to_eigenbasis(&self.0).real_diagonal()
    }

    pub fn expectation(&self, observable: &ComplexMatrix) -> C64 {
        self.0.matmul(observable).trace()
    }
}

/// Gibbs state `exp(−βH)/Z`, computed with the ground energy shifted out.
pub fn thermal_state(h: &ComplexMatrix, temperature: Temperature) -> Result<DensityMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(thermal_state_from(&eig, temperature.beta()))
}

pub fn thermal_state_from(eig: &EigenDecomposition, beta: f64) -> DensityMatrix {
    let e0 = eig.eigenvalues[0];
    let z: f64 = eig.eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).sum();
    let rho = eig.map_spectrum(|e| C64::new((-beta * (e - e0)).exp() / z, 0.0));
    DensityMatrix(rho.hermitian_part())
}

/// Normalized Boltzmann weights for a list of energies.
pub fn gibbs_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(&m.hermitian_part())?;
    let floor = rounding_floor(&eig.eigenvalues);
    Ok(eig.map_spectrum(|l| C64::new(clamp_psd(l, floor).sqrt(), 0.0)))
}

/// Eigenvalues below this are rounding noise of the largest one. Their square
/// roots would otherwise leak `O(√ε)` errors into the fidelity.
fn rounding_floor(eigenvalues: &[f64]) -> f64 {
    let max = eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    64.0 * f64::EPSILON * max * eigenvalues.len() as f64
}

fn clamp_psd(l: f64, floor: f64) -> f64 {
    if l <= floor {
        0.0
    } else {
        l
    }
}

/// Squared Uhlmann fidelity `(Tr √(√a b √a))²`.
///
/// For a pure `a = |ψ⟩⟨ψ|` this reduces to ⟨ψ|b|ψ⟩.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(root_fidelity(a, b)?.powi(2))
}

/// Unsquared Uhlmann fidelity `Tr √(√a b √a)`.
pub fn root_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between {0}×{0} and {1}×{1} states",
            a.dim(),
            b.dim()
        )));
    }
    let sa = psd_sqrt(a.matrix())?;
    let inner = sa.matmul(b.matrix()).matmul(&sa);
    let eig = eig_hermitian(&inner.hermitian_part())?;
    let floor = rounding_floor(&eig.eigenvalues);
    let f: f64 = eig.eigenvalues.iter().map(|&l| clamp_psd(l, floor).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `½ Σ |λ_k(a − b)|`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {0}×{0} and {1}×{1} states",
            a.dim(),
            b.dim()
        )));
    }
    let diff = (a.matrix() - b.matrix()).hermitian_part();
    let eig = eig_hermitian(&diff)?;
    Ok((0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>()).min(1.0))
}
