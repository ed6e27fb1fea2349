//! Time series emitted by both dynamics engines.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, EigenDecomposition};
use crate::states::{fidelity, DensityMatrix};

#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    /// Collision round the sample closes; 0 for the initial sample.
    pub round: usize,
    pub fidelity: f64,
    /// Populations in the energy eigenbasis of the system Hamiltonian, ascending energy.
    pub populations: Vec<f64>,
    pub trace: f64,
    pub purity: f64,
    /// Interaction-picture state.
    pub state: DensityMatrix,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn push(&mut self, sample: Sample) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(sample.t > last.t) {
                return Err(Error::NumericalAbort {
                    t: sample.t,
                    reason: format!("sample time does not increase past {}", last.t),
                });
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn fidelities(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.fidelity).collect()
    }

    /// Last sample of each round, including the initial sample as round 0.
    pub fn round_ends(&self) -> Vec<&Sample> {
        let mut out: Vec<&Sample> = Vec::new();
        for s in &self.samples {
            match out.last() {
                Some(prev) if prev.round == s.round => *out.last_mut().unwrap() = s,
                _ => out.push(s),
            }
        }
        out
    }
}

/// Converts states into trajectory samples against a fixed target.
#[derive(Clone, Debug)]
pub struct Observer {
    pub target: DensityMatrix,
    pub basis: EigenDecomposition,
}

impl Observer {
    pub fn new(h_sys: &ComplexMatrix, target: DensityMatrix) -> Result<Self> {
        if h_sys.dim() != target.dim() {
            return Err(Error::DimensionMismatch("target and Hamiltonian dimensions differ".into()));
        }
        Ok(Self { basis: eig_hermitian(h_sys)?, target })
    }

    pub fn sample(&self, t: f64, round: usize, state: DensityMatrix) -> Result<Sample> {
        Ok(Sample {
            t,
            round,
            fidelity: fidelity(&state, &self.target)?,
            populations: state.populations_in(&self.basis),
            trace: state.trace(),
            purity: state.purity(),
            state,
        })
    }
}
