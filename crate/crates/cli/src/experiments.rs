//! Experiment runners. Each takes a validated [`ExperimentConfig`] and returns
//! plain data; formatting lives in [`crate::output`] and [`crate::svg`].

use rayon::prelude::*;
use thermocoll::collision;
use thermocoll::lindblad::{integrate, IntegrationOptions, MasterEquation, RateOptions};
use thermocoll::linalg::ComplexMatrix;
use thermocoll::states::{thermal_state, trace_distance};
use thermocoll::transitions::commutant_basis;
use thermocoll::{AncillaSpec, CollisionMode, CollisionSchedule, DensityMatrix, Observer, Trajectory};

use crate::config::{ExperimentConfig, InitialState, ModelConfig};
use crate::error::{CliError, Result};

/// Fidelity to the bath Gibbs state after `n = 0..=count` collisions, per ancilla gap.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub h_b: Vec<f64>,
    /// `fidelity[i][n]` for grid point `i`.
    pub fidelity: Vec<Vec<f64>>,
}

impl SweepResult {
    pub fn collisions(&self) -> usize {
        self.fidelity.first().map_or(0, |row| row.len().saturating_sub(1))
    }

    /// Grid index with the highest fidelity after `n` collisions.
    pub fn best_at(&self, n: usize) -> usize {
        (0..self.h_b.len()).max_by(|&a, &b| self.fidelity[a][n].total_cmp(&self.fidelity[b][n])).unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub trajectory: Trajectory,
}

#[derive(Clone, Debug)]
pub struct CrosscheckResult {
    /// `(t, trace distance)` at every common sample time.
    pub rows: Vec<(f64, f64)>,
}

impl CrosscheckResult {
    pub fn max(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Drift of the commutant expectations `Tr(ρX)` along both engines' trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    pub commutant_dim: usize,
    pub master_equation_drift: f64,
    pub collision_drift: f64,
}

fn prepare(cfg: &ExperimentConfig, h: &ComplexMatrix) -> Result<(Vec<(InitialState, DensityMatrix)>, Observer)> {
    let states = cfg
        .initial_states()?
        .into_iter()
        .map(|s| {
            let rho = s.prepare(h)?;
            Ok((s, rho))
        })
        .collect::<Result<Vec<_>>>()?;
    let target = thermal_state(h, cfg.bath_temperature()?)?;
    Ok((states, Observer::new(h, target)?))
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let h = cfg.model.hamiltonian()?;
    let (states, observer) = prepare(cfg, &h)?;
    let rho0 = &states[0].1;
    let grid = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("missing [sweep] table".into()))?.grid();
    let temperature = cfg.bath_temperature()?;
    let site = cfg.schedule.sites.as_ref().map_or(0, |s| s[0]);
    let fidelity = grid
        .par_iter()
        .map(|&h_b| {
            let ancilla = AncillaSpec::new(h_b, temperature, cfg.schedule.g, site);
            let sched = cfg.collision_schedule(vec![ancilla])?;
            let traj = collision::run(rho0, &sched, &h, &observer)?;
            Ok(traj.fidelities())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { h_b: grid, fidelity })
}

/// Collision-engine trajectories of every initial state in both collision modes.
pub fn run_ising2(cfg: &ExperimentConfig) -> Result<Vec<Curve>> {
    let h = cfg.model.hamiltonian()?;
    let (states, observer) = prepare(cfg, &h)?;
    let ancillae = cfg.ancillae()?;
    let jobs: Vec<(CollisionMode, &(InitialState, DensityMatrix))> = states
        .iter()
        .flat_map(|s| [(CollisionMode::Sequential, s), (CollisionMode::Simultaneous, s)])
        .collect();
    let single = states.len() == 1;
    jobs.par_iter()
        .map(|(mode, (desc, rho0))| {
            let mut sched = cfg.collision_schedule(ancillae.clone())?;
            sched.mode = *mode;
            let name = match mode {
                CollisionMode::Sequential => "sequential",
                CollisionMode::Simultaneous => "simultaneous",
            };
            let label = if single { name.to_string() } else { format!("{name}/{desc}") };
            Ok(Curve { label, trajectory: collision::run(rho0, &sched, &h, &observer)? })
        })
        .collect()
}

/// Collision-engine trajectory of every initial state, labelled by its descriptor.
pub fn run_xy(cfg: &ExperimentConfig) -> Result<Vec<Curve>> {
    let h = cfg.model.hamiltonian()?;
    let (states, observer) = prepare(cfg, &h)?;
    let sched = cfg.collision_schedule(cfg.ancillae()?)?;
    states
        .par_iter()
        .map(|(desc, rho0)| {
            Ok(Curve { label: desc.to_string(), trajectory: collision::run(rho0, &sched, &h, &observer)? })
        })
        .collect()
}

/// Master equation matching the configured model and schedule.
pub fn master_equation(cfg: &ExperimentConfig, sched: &CollisionSchedule) -> Result<MasterEquation> {
    let opts = RateOptions { include_rotating: cfg.integrator.include_rotating };
    Ok(match &cfg.model {
        ModelConfig::Tls { h_s } => MasterEquation::tls(*h_s, sched, opts)?,
        ModelConfig::Ising { .. } => MasterEquation::ising(&cfg.model.spec()?, sched, opts)?,
        ModelConfig::Xy { .. } => MasterEquation::secular(&cfg.model.hamiltonian()?, sched, opts)?,
    })
}

fn integration_options(cfg: &ExperimentConfig) -> IntegrationOptions {
    IntegrationOptions { dt: cfg.integrator.dt, sample_stride: cfg.integrator.sample_stride, t_end: None }
}

/// Trace distance between the collision engine and the master equation at
/// every time both sample, for the first initial state.
pub fn run_crosscheck(cfg: &ExperimentConfig) -> Result<CrosscheckResult> {
    let h = cfg.model.hamiltonian()?;
    let (states, observer) = prepare(cfg, &h)?;
    let rho0 = &states[0].1;
    let sched = cfg.collision_schedule(cfg.ancillae()?)?;
    let me = master_equation(cfg, &sched)?;
    let (exact, approx) = rayon::join(
        || collision::run(rho0, &sched, &h, &observer),
        || integrate(&me, rho0, &observer, integration_options(cfg)),
    );
    let (exact, approx) = (exact?, approx?);
    let tol = 1e-9 * sched.end_time().max(1.0);
    let mut rows = Vec::with_capacity(exact.len());
    let mut j = 0;
    for s in &exact.samples {
        while j < approx.samples.len() && approx.samples[j].t < s.t - tol {
            j += 1;
        }
        if let Some(a) = approx.samples.get(j).filter(|a| (a.t - s.t).abs() <= tol) {
            rows.push((s.t, trace_distance(&s.state, &a.state)?));
        }
    }
    Ok(CrosscheckResult { rows })
}

fn drift(traj: &Trajectory, basis: &[ComplexMatrix]) -> f64 {
    let first = &traj.first().state;
    traj.samples
        .iter()
        .flat_map(|s| basis.iter().map(move |x| (s.state.expectation(x) - first.expectation(x)).norm()))
        .fold(0.0, f64::max)
}

/// Conservation of the commutant of the configured jump set, starting from `state`.
pub fn conservation(cfg: &ExperimentConfig, state: &InitialState) -> Result<ConservationReport> {
    let h = cfg.model.hamiltonian()?;
    let rho0 = state.prepare(&h)?;
    let observer = Observer::new(&h, thermal_state(&h, cfg.bath_temperature()?)?)?;
    let sched = cfg.collision_schedule(cfg.ancillae()?)?;
    let me = MasterEquation::secular(&h, &sched, RateOptions { include_rotating: cfg.integrator.include_rotating })?;
    let ops: Vec<ComplexMatrix> = me.jumps.iter().map(|j| j.operator.clone()).collect();
    let basis = commutant_basis(&ops)?;
    let (exact, approx) = rayon::join(
        || collision::run(&rho0, &sched, &h, &observer),
        || integrate(&me, &rho0, &observer, integration_options(cfg)),
    );
    Ok(ConservationReport {
        commutant_dim: basis.len(),
        master_equation_drift: drift(&approx?, &basis),
        collision_drift: drift(&exact?, &basis),
    })
}
