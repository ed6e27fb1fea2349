//! Collision-model thermalization of small spin systems.
//!
//! Two dynamics engines share one set of models and observables:
//!
//! * [`collision`] evolves the system exactly with fresh thermal ancillae,
//!   one unitary collision at a time, tracing each ancilla out afterwards.
//! * [`lindblad`] integrates the secular master equation whose rates are the
//!   finite-time bath spectra of [`spectra`], switched on only inside
//!   collision windows.
//!
//! [`transitions`] decomposes couplings into energy-eigenbasis transitions
//! and decides whether the resulting jump set has a unique fixed point.
//!
//! Units: `ħ = 1`, frequencies in rad/ns, times in ns, temperatures in mK.
//! Basis state `|0⟩` is spin up (σz = +1) and qubit 0 is the leftmost
//! Kronecker factor.

pub mod collision;
pub mod error;
pub mod hamiltonians;
pub mod lindblad;
pub mod linalg;
pub mod schedule;
pub mod spectra;
pub mod spin;
pub mod states;
pub mod trajectory;
pub mod transitions;
pub mod units;

pub use error::{Error, Result};
pub use hamiltonians::{AncillaSpec, HamiltonianSpec};
pub use linalg::{ComplexMatrix, EigenDecomposition};
pub use num_complex::Complex64;
pub use schedule::{CollisionMode, CollisionSchedule, Slot};
pub use states::DensityMatrix;
pub use trajectory::{Observer, Sample, Trajectory};
pub use units::Temperature;
