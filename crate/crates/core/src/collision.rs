//! Exact repeated-interaction dynamics: join fresh thermal ancillae, evolve
//! the joint state for `τ_c`, trace the ancillae out.

use crate::error::{Error, Result};
use crate::hamiltonians::{collision_hamiltonian, AncillaSpec};
use crate::linalg::{eig_hermitian, kron_all, partial_trace, propagator, ComplexMatrix, EigenDecomposition};
use crate::schedule::{CollisionMode, CollisionSchedule};
use crate::states::{thermal_state, DensityMatrix};
use crate::trajectory::{Observer, Trajectory};

/// Default bound on the joint system ⊗ ancillae dimension.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 12;

/// Precomputed channel `ρ ↦ Tr_anc[U (ρ ⊗ ρ_anc) U†]` for one ancilla set.
#[derive(Clone, Debug)]
pub struct CollisionStep {
    system_dim: usize,
    ancilla_dim: usize,
    unitary: ComplexMatrix,
    ancilla_state: ComplexMatrix,
}

impl CollisionStep {
    pub fn new(h_sys: &ComplexMatrix, active: &[AncillaSpec], tau_c: f64, cap: usize) -> Result<Self> {
        if active.is_empty() {
            return Err(Error::InvalidSpec("collision needs at least one ancilla".into()));
        }
        let system_dim = h_sys.dim();
        let ancilla_dim = 1usize.checked_shl(active.len() as u32).unwrap_or(usize::MAX);
        let joint = system_dim.saturating_mul(ancilla_dim);
        if active.len() >= usize::BITS as usize || joint > cap {
            return Err(Error::DimensionCap { dim: joint, cap });
        }
        let h = collision_hamiltonian(h_sys, active)?;
        let unitary = propagator(&h, tau_c)?;
        let states = active
            .iter()
            .map(|a| thermal_state(&a.hamiltonian(), a.temperature).map(DensityMatrix::into_matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { system_dim, ancilla_dim, unitary, ancilla_state: kron_all(&states) })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.system_dim {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} in a collision on a {}-dimensional system",
                rho.dim(),
                self.system_dim
            )));
        }
        let joint = rho.matrix().kron(&self.ancilla_state).conjugate_by(&self.unitary);
        let reduced = partial_trace(&joint, &[self.system_dim, self.ancilla_dim], &[0])?;
        DensityMatrix::new(reduced)
    }
}

/// One collision of `rho_s` with the thermal ancillae `active`, returned in the Schrödinger picture.
pub fn collide(rho_s: &DensityMatrix, active: &[AncillaSpec], tau_c: f64, h_sys: &ComplexMatrix) -> Result<DensityMatrix> {
    CollisionStep::new(h_sys, active, tau_c, DEFAULT_DIMENSION_CAP)?.apply(rho_s)
}

/// `e^{iHt} ρ e^{−iHt}`
pub fn to_interaction_picture(rho: &DensityMatrix, h_eig: &EigenDecomposition, t: f64) -> DensityMatrix {
    let u = h_eig.map_spectrum(|e| num_complex::Complex64::from_polar(1.0, e * t));
    DensityMatrix::new_unchecked(rho.matrix().conjugate_by(&u).hermitian_part())
}

pub fn run(
    rho0: &DensityMatrix,
    schedule: &CollisionSchedule,
    h_sys: &ComplexMatrix,
    observer: &Observer,
) -> Result<Trajectory> {
    run_with_cap(rho0, schedule, h_sys, observer, DEFAULT_DIMENSION_CAP)
}

/// Applies the schedule's collisions in order.
///
/// Samples follow every collision in sequential mode and every round in
/// simultaneous mode. Free evolution between collisions is not simulated;
/// sampled states are reported in the interaction picture of `h_sys` at the
/// accumulated collision time.
pub fn run_with_cap(
    rho0: &DensityMatrix,
    schedule: &CollisionSchedule,
    h_sys: &ComplexMatrix,
    observer: &Observer,
    cap: usize,
) -> Result<Trajectory> {
    schedule.validate()?;
    if rho0.dim() != h_sys.dim() {
        return Err(Error::DimensionMismatch("initial state and Hamiltonian dimensions differ".into()));
    }
    let steps: Vec<CollisionStep> = match schedule.mode {
        CollisionMode::Sequential => schedule
            .ancillae
            .iter()
            .map(|a| CollisionStep::new(h_sys, std::slice::from_ref(a), schedule.tau_c, cap))
            .collect::<Result<_>>()?,
        CollisionMode::Simultaneous => vec![CollisionStep::new(h_sys, &schedule.ancillae, schedule.tau_c, cap)?],
    };
    let eig = eig_hermitian(h_sys)?;
    let mut traj = Trajectory::default();
    traj.push(observer.sample(0.0, 0, rho0.clone())?)?;
    let mut rho = rho0.clone();
    let mut elapsed = 0.0;
    for slot in schedule.slots() {
        let step = match schedule.mode {
            CollisionMode::Sequential => &steps[slot.ancillae[0]],
            CollisionMode::Simultaneous => &steps[0],
        };
        rho = step.apply(&rho).map_err(|e| match e {
            Error::InvalidDensityMatrix(reason) => Error::NumericalAbort { t: slot.end, reason },
            other => other,
        })?;
        elapsed += schedule.tau_c;
        let state = to_interaction_picture(&rho, &eig, elapsed);
        traj.push(observer.sample(slot.end, slot.round + 1, state)?)?;
    }
    Ok(traj)
}
