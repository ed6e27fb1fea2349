//! Model Hamiltonians, ancilla descriptions and the joint collision Hamiltonian.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{kron_all, ComplexMatrix};
use crate::spin::{self, on_site, pauli_x, pauli_y, pauli_z, projector, sigma_minus, Spin};
use crate::units::Temperature;

/// Declarative model description. Couplings are angular frequencies in rad/ns.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianSpec {
    /// `H = h_s σz`
    Tls { h_s: f64 },
    /// `H = Σ h_i σz_i + Σ J_i σz_i σz_{i+1}`, open boundaries.
    IsingChain { fields: Vec<f64>, couplings: Vec<f64> },
    /// Two-spin anisotropic XY model with a z-axis Dzyaloshinskii–Moriya term:
    /// `H = J (σx₁σx₂ − σy₁σy₂ + σx₁σy₂ − σy₁σx₂)`.
    XyDm { j: f64 },
}

impl HamiltonianSpec {
    pub fn ising(fields: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        let spec = Self::IsingChain { fields, couplings };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Self::Tls { h_s } if !h_s.is_finite() => {
                Err(Error::InvalidSpec(format!("h_s must be finite, got {h_s}")))
            }
            Self::XyDm { j } if !j.is_finite() => {
                Err(Error::InvalidSpec(format!("J must be finite, got {j}")))
            }
            Self::IsingChain { fields, couplings } => {
                if fields.is_empty() {
                    return Err(Error::InvalidSpec("Ising chain needs at least one site".into()));
                }
                if couplings.len() + 1 != fields.len() {
                    return Err(Error::InvalidSpec(format!(
                        "Ising chain of {} sites needs {} couplings, got {}",
                        fields.len(),
                        fields.len() - 1,
                        couplings.len()
                    )));
                }
                if !finite(fields) || !finite(couplings) {
                    return Err(Error::InvalidSpec("Ising couplings must be finite".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn qubits(&self) -> usize {
        match self {
            Self::Tls { .. } => 1,
            Self::IsingChain { fields, .. } => fields.len(),
            Self::XyDm { .. } => 2,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    pub fn build(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        Ok(match self {
            Self::Tls { h_s } => pauli_z().scale_real(*h_s),
            Self::IsingChain { fields, couplings } => {
                let n = fields.len();
                let diag: Vec<f64> =
                    (0..1usize << n).map(|b| ising_energy(fields, couplings, b)).collect();
                ComplexMatrix::from_real_diagonal(&diag)
            }
            Self::XyDm { j } => {
                let (x, y) = (pauli_x(), pauli_y());
                let xx = x.kron(&x);
                let yy = y.kron(&y);
                let xy = x.kron(&y);
                let yx = y.kron(&x);
                let mut h = &(&xx - &yy) + &(&xy - &yx);
                h = h.scale_real(*j);
                h.hermitian_part()
            }
        })
    }
}

/// Classical Ising energy of computational basis state `index`.
fn ising_energy(fields: &[f64], couplings: &[f64], index: usize) -> f64 {
    let n = fields.len();
    let s = |i: usize| Spin::of_basis_state(index, i, n).sign();
    let field: f64 = fields.iter().enumerate().map(|(i, h)| h * s(i)).sum();
    let bond: f64 = couplings.iter().enumerate().map(|(i, j)| j * s(i) * s(i + 1)).sum();
    field + bond
}

/// One environment qubit: gap `2 h_b`, thermal at `temperature`, coupled with
/// strength `g` through `σx(target_site) ⊗ σx(ancilla)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AncillaSpec {
    pub h_b: f64,
    pub temperature: Temperature,
    pub g: f64,
    pub target_site: usize,
}

impl AncillaSpec {
    pub fn new(h_b: f64, temperature: Temperature, g: f64, target_site: usize) -> Self {
        Self { h_b, temperature, g, target_site }
    }

    /// `g = 0` is accepted here so that decoupled checks can be expressed.
    pub fn validate(&self, system_qubits: usize) -> Result<()> {
        if !self.h_b.is_finite() {
            return Err(Error::InvalidSpec(format!("ancilla h_b must be finite, got {}", self.h_b)));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidSpec(format!("ancilla coupling g must be ≥ 0, got {}", self.g)));
        }
        if self.target_site >= system_qubits {
            return Err(Error::InvalidSpec(format!(
                "ancilla targets site {} but the system has {system_qubits} qubits",
                self.target_site
            )));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        pauli_z().scale_real(self.h_b)
    }

    /// Gap of the ancilla, `2 h_b`.
    pub fn gap(&self) -> f64 {
        2.0 * self.h_b
    }
}

/// States of the nearest neighbours of a reference spin; edge sites lack one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NeighborConfig {
    pub left: Option<Spin>,
    pub right: Option<Spin>,
}

impl fmt::Display for NeighborConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: Option<Spin>| s.map_or('·', Spin::arrow);
        write!(f, "{}_{}", side(self.left), side(self.right))
    }
}

/// Frequency released when the reference spin flips ↑ → ↓ in a given
/// neighbour configuration. Negative values mean the flip absorbs energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingTransition {
    pub site: usize,
    pub neighbors: NeighborConfig,
    pub omega: f64,
}

/// One-spin-flip transition frequencies `ω(s_i) = 2(±J_{i−1} + h_i ± J_i)` of `site`.
///
/// Bulk sites yield four entries ordered ↑↑, ↑↓, ↓↑, ↓↓ (left, right); edge sites
/// yield two, and a single-site chain one.
pub fn ising_transition_frequencies(spec: &HamiltonianSpec, site: usize) -> Result<Vec<IsingTransition>> {
    let HamiltonianSpec::IsingChain { fields, couplings } = spec else {
        return Err(Error::InvalidSpec("transition frequencies need an Ising chain".into()));
    };
    spec.validate()?;
    let n = fields.len();
    if site >= n {
        return Err(Error::InvalidSpec(format!("site {site} out of range for {n} spins")));
    }
    let lefts: Vec<Option<Spin>> =
        if site > 0 { vec![Some(Spin::Up), Some(Spin::Down)] } else { vec![None] };
    let rights: Vec<Option<Spin>> =
        if site + 1 < n { vec![Some(Spin::Up), Some(Spin::Down)] } else { vec![None] };
    let mut out = Vec::with_capacity(lefts.len() * rights.len());
    for &left in &lefts {
        for &right in &rights {
            let local = left.map_or(0.0, |s| couplings[site - 1] * s.sign())
                + fields[site]
                + right.map_or(0.0, |s| couplings[site] * s.sign());
            out.push(IsingTransition { site, neighbors: NeighborConfig { left, right }, omega: 2.0 * local });
        }
    }
    Ok(out)
}

/// `σ₋ᵢ^{sᵢ} = |↓⟩ᵢ⟨↑|ᵢ ⊗ |sᵢ⟩⟨sᵢ|` on an `n`-spin chain.
pub fn conditional_lowering(site: usize, neighbors: NeighborConfig, n: usize) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = (0..n)
        .map(|k| {
            if k == site {
                sigma_minus()
            } else if let (Some(s), true) = (neighbors.left, site > 0 && k + 1 == site) {
                projector(s)
            } else if let (Some(s), true) = (neighbors.right, k == site + 1) {
                projector(s)
            } else {
                ComplexMatrix::identity(2)
            }
        })
        .collect();
    kron_all(&factors)
}

/// Joint Hamiltonian on system ⊗ ancilla₁ ⊗ … ⊗ ancilla_m:
/// `H_S ⊗ I + Σ_n h_b σz_n + Σ_n g σx(target) σx_n`.
pub fn collision_hamiltonian(h_sys: &ComplexMatrix, active: &[AncillaSpec]) -> Result<ComplexMatrix> {
    if active.is_empty() {
        return Err(Error::InvalidSpec("collision needs at least one ancilla".into()));
    }
    let ns = spin::qubit_count(h_sys.dim()).ok_or_else(|| {
        Error::DimensionMismatch(format!("system dimension {} is not a qubit register", h_sys.dim()))
    })?;
    for a in active {
        a.validate(ns)?;
    }
    let m = active.len();
    let n = ns + m;
    let mut h = h_sys.kron(&ComplexMatrix::identity(1 << m));
    let x = pauli_x();
    for (k, a) in active.iter().enumerate() {
        let anc_site = ns + k;
        h += &on_site(&pauli_z(), anc_site, n).scale_real(a.h_b);
        if a.g != 0.0 {
            let coupling = on_site(&x, a.target_site, n).matmul(&on_site(&x, anc_site, n));
            h += &coupling.scale_real(a.g);
        }
    }
    Ok(h)
}
