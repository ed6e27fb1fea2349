//! Physical constants and the temperature type.
//!
//! Natural units with ħ = 1: energies and frequencies are angular
//! frequencies in rad/ns, times are in ns, and a quoted "1 GHz" coupling is
//! taken as 1 rad/ns. Temperatures are quoted in mK.

use crate::error::{Error, Result};

/// Boltzmann constant, J/K (exact, SI 2019).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054571817e-34;
/// k_B/ħ expressed in rad/(ns·mK), ≈ 0.13092.
pub const KB_OVER_HBAR_RAD_PER_NS_MK: f64 = BOLTZMANN / HBAR * 1e-3 * 1e-9;

/// A bath temperature. `beta` is in ns/rad so that `beta · E` is dimensionless
/// for energies `E` in rad/ns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Temperature {
    millikelvin: f64,
}

impl Temperature {
    pub fn from_millikelvin(mk: f64) -> Result<Self> {
        if !(mk > 0.0) {
            return Err(Error::InvalidSpec(format!("temperature must be > 0 mK, got {mk}")));
        }
        Ok(Self { millikelvin: mk })
    }

    /// The T → ∞ limit (β = 0).
    pub fn infinite() -> Self {
        Self { millikelvin: f64::INFINITY }
    }

    pub fn millikelvin(self) -> f64 {
        self.millikelvin
    }

    pub fn is_infinite(self) -> bool {
        self.millikelvin.is_infinite()
    }

    pub fn beta(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / (KB_OVER_HBAR_RAD_PER_NS_MK * self.millikelvin)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_constant() {
        assert!((KB_OVER_HBAR_RAD_PER_NS_MK - 0.13092).abs() < 1e-5);
    }

    #[test]
    fn beta_at_ten_millikelvin() {
        let beta = Temperature::from_millikelvin(10.0).unwrap().beta();
        assert!((beta - 0.7638).abs() < 1e-4);
        assert_eq!(Temperature::infinite().beta(), 0.0);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(Temperature::from_millikelvin(0.0).is_err());
        assert!(Temperature::from_millikelvin(f64::NAN).is_err());
    }
}
