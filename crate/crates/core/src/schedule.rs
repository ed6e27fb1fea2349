//! Collision timing shared by the exact and master-equation engines.

use crate::error::{Error, Result};
use crate::hamiltonians::AncillaSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollisionMode {
    /// One ancilla at a time, each for a full `τ_c`, traced out before the next.
    Sequential,
    /// All ancilla of a round join the system together for `τ_c`.
    Simultaneous,
}

/// Ordered collision protocol: `count` rounds over the same ancilla set.
///
/// Collision slot `k` starts at `k·τ_p` and lasts `τ_c`. In sequential mode
/// each ancilla of a round occupies its own slot; in simultaneous mode a
/// round is a single slot.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionSchedule {
    pub tau_p: f64,
    pub tau_c: f64,
    pub count: usize,
    pub mode: CollisionMode,
    pub ancillae: Vec<AncillaSpec>,
}

/// One collision window.
#[derive(Clone, Debug, PartialEq)]
pub struct Slot {
    pub index: usize,
    pub round: usize,
    pub start: f64,
    pub end: f64,
    /// Indices into `CollisionSchedule::ancillae`.
    pub ancillae: Vec<usize>,
}

impl CollisionSchedule {
    pub fn new(tau_c: f64, count: usize, mode: CollisionMode, ancillae: Vec<AncillaSpec>) -> Result<Self> {
        let s = Self { tau_p: tau_c, tau_c, count, mode, ancillae };
        s.validate()?;
        Ok(s)
    }

    pub fn with_period(mut self, tau_p: f64) -> Result<Self> {
        self.tau_p = tau_p;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_c > 0.0) || !self.tau_c.is_finite() {
            return Err(Error::InvalidSpec(format!("τ_c must be > 0, got {}", self.tau_c)));
        }
        if !(self.tau_p >= self.tau_c) || !self.tau_p.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "τ_p ({}) must be finite and at least τ_c ({})",
                self.tau_p, self.tau_c
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidSpec("collision count must be ≥ 1".into()));
        }
        if self.ancillae.is_empty() {
            return Err(Error::InvalidSpec("schedule needs at least one ancilla".into()));
        }
        Ok(())
    }

    pub fn slots_per_round(&self) -> usize {
        match self.mode {
            CollisionMode::Sequential => self.ancillae.len(),
            CollisionMode::Simultaneous => 1,
        }
    }

    pub fn slots(&self) -> Vec<Slot> {
        let per_round = self.slots_per_round();
        (0..self.count * per_round)
            .map(|index| {
                let round = index / per_round;
                let ancillae = match self.mode {
                    CollisionMode::Sequential => vec![index % per_round],
                    CollisionMode::Simultaneous => (0..self.ancillae.len()).collect(),
                };
                let start = index as f64 * self.tau_p;
                Slot { index, round, start, end: start + self.tau_c, ancillae }
            })
            .collect()
    }

    /// Windows during which ancilla `k` is coupled.
    pub fn windows_of(&self, k: usize) -> Vec<(f64, f64)> {
        self.slots()
            .into_iter()
            .filter(|s| s.ancillae.contains(&k))
            .map(|s| (s.start, s.end))
            .collect()
    }

    pub fn end_time(&self) -> f64 {
        let n = self.count * self.slots_per_round();
        (n - 1) as f64 * self.tau_p + self.tau_c
    }
}
