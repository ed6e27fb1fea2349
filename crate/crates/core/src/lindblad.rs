//! Time-dependent Lindblad master equations with windowed collisional rates
//! and a fixed-step RK4 integrator.
//!
//! Equations are written in the interaction picture of the system
//! Hamiltonian; `MasterEquation::with_hamiltonian` re-adds `−i[H, ρ]`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonians::{conditional_lowering, ising_transition_frequencies, AncillaSpec, HamiltonianSpec};
use crate::linalg::{eig_hermitian, ComplexMatrix};
use crate::schedule::CollisionSchedule;
use crate::spectra::{dissipation_rate, SpectrumQuery};
use crate::spin::{on_site, pauli_x, qubit_count, sigma_minus, sigma_plus};
use crate::states::DensityMatrix;
use crate::trajectory::{Observer, Trajectory};
use crate::transitions::jump_set;

/// Largest `|2h_b − |ω||` (rad/ns) for which an ancilla drives a transition.
pub const SECULAR_TOL: f64 = 1e-6;
/// Trace drift that is silently renormalized; anything larger aborts.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;
pub const NEGATIVITY_TOL: f64 = 1e-8;
/// Default number of RK4 steps per collision window.
pub const STEPS_PER_COLLISION: usize = 200;
/// Coarsest admissible step, as a fraction of `τ_c`.
pub const MIN_STEPS_PER_COLLISION: usize = 50;

/// `D(ρ, o) = oρo† − ½{o†o, ρ}`
pub fn dissipator(rho: &ComplexMatrix, o: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dissipator of a {0}×{0} state with a {1}×{1} operator",
            rho.dim(),
            o.dim()
        )));
    }
    let decay = o.adjoint().matmul(o);
    Ok(dissipator_with(rho, o, &decay))
}

fn dissipator_with(rho: &ComplexMatrix, o: &ComplexMatrix, decay: &ComplexMatrix) -> ComplexMatrix {
    let jump = o.matmul(rho).matmul(&o.adjoint());
    jump.plus_scaled(&decay.anticommutator(rho), C64::new(-0.5, 0.0))
}

/// One collision window during which an ancilla feeds a jump term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateWindow {
    pub ancilla: AncillaSpec,
    pub start: f64,
    pub end: f64,
}

impl RateWindow {
    fn covers(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

/// A jump operator with its time-dependent rate `Σ_windows 2 Re Γ(ω, t)`.
#[derive(Clone, Debug)]
pub struct JumpTerm {
    pub operator: ComplexMatrix,
    /// Energy released by the jump, rad/ns; negative for absorption.
    pub omega: f64,
    pub windows: Vec<RateWindow>,
    pub include_rotating: bool,
    decay: ComplexMatrix,
}

impl JumpTerm {
    pub fn new(operator: ComplexMatrix, omega: f64, windows: Vec<RateWindow>, include_rotating: bool) -> Self {
        let decay = operator.adjoint().matmul(&operator);
        Self { operator, omega, windows, include_rotating, decay }
    }

    /// Rate at `t`, summed over every window whose closed interval contains `t`.
    pub fn rate(&self, t: f64) -> f64 {
        self.windows.iter().filter(|w| w.covers(t)).map(|w| self.window_rate(w, t)).sum()
    }

    /// Rate inside the integration segment containing `mid`, with `t` clamped
    /// into each active window. Keeps the step discontinuity at shared
    /// window edges out of the RK4 stages.
    fn segment_rate(&self, t: f64, mid: f64) -> f64 {
        self.windows
            .iter()
            .filter(|w| w.covers(mid))
            .map(|w| self.window_rate(w, t.clamp(w.start, w.end)))
            .sum()
    }

    fn window_rate(&self, w: &RateWindow, t: f64) -> f64 {
        let q = SpectrumQuery { omega: self.omega, t, ancilla: w.ancilla, collision_start: w.start, collision_end: w.end };
        dissipation_rate(&q, self.include_rotating)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RateOptions {
    /// Keep the counter-rotating branch of Γ in addition to the near-resonant one.
    pub include_rotating: bool,
}

#[derive(Clone, Debug)]
pub struct MasterEquation {
    dim: usize,
    pub jumps: Vec<JumpTerm>,
    hamiltonian: Option<ComplexMatrix>,
    schedule: CollisionSchedule,
}

fn windows_for(schedule: &CollisionSchedule, k: usize) -> Vec<RateWindow> {
    let ancilla = schedule.ancillae[k];
    schedule.windows_of(k).into_iter().map(|(start, end)| RateWindow { ancilla, start, end }).collect()
}

impl MasterEquation {
    pub fn new(dim: usize, jumps: Vec<JumpTerm>, schedule: CollisionSchedule) -> Result<Self> {
        schedule.validate()?;
        if let Some(j) = jumps.iter().find(|j| j.operator.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "jump operator of dimension {} in a {dim}-dimensional master equation",
                j.operator.dim()
            )));
        }
        Ok(Self { dim, jumps, hamiltonian: None, schedule })
    }

    /// Single two-level system `h_s σz`, jumps σ₋ (ω = 2h_s) and σ₊ (ω = −2h_s).
    pub fn tls(h_s: f64, schedule: &CollisionSchedule, opts: RateOptions) -> Result<Self> {
        schedule.validate()?;
        for a in &schedule.ancillae {
            a.validate(1)?;
        }
        let windows: Vec<RateWindow> =
            (0..schedule.ancillae.len()).flat_map(|k| windows_for(schedule, k)).collect();
        let jumps = vec![
            JumpTerm::new(sigma_minus(), 2.0 * h_s, windows.clone(), opts.include_rotating),
            JumpTerm::new(sigma_plus(), -2.0 * h_s, windows, opts.include_rotating),
        ];
        Self::new(2, jumps, schedule.clone())
    }

    /// Ising chain with conditional jumps `σ∓ᵢ^{sᵢ}`. Each ancilla drives every
    /// neighbour configuration of its target site whose `|ω(sᵢ)|` matches `2h_b`.
    pub fn ising(spec: &HamiltonianSpec, schedule: &CollisionSchedule, opts: RateOptions) -> Result<Self> {
        schedule.validate()?;
        let n = spec.qubits();
        let mut jumps = Vec::new();
        for (k, a) in schedule.ancillae.iter().enumerate() {
            a.validate(n)?;
            let matched: Vec<_> = ising_transition_frequencies(spec, a.target_site)?
                .into_iter()
                .filter(|tr| (tr.omega.abs() - a.gap()).abs() <= SECULAR_TOL)
                .collect();
            if matched.is_empty() {
                return Err(Error::UnmatchedAncilla { gap: a.gap(), site: a.target_site });
            }
            let windows = windows_for(schedule, k);
            for tr in matched {
                let lower = conditional_lowering(tr.site, tr.neighbors, n);
                let raise = lower.adjoint();
                jumps.push(JumpTerm::new(lower, tr.omega, windows.clone(), opts.include_rotating));
                jumps.push(JumpTerm::new(raise, -tr.omega, windows.clone(), opts.include_rotating));
            }
        }
        Self::new(1 << n, jumps, schedule.clone())
    }

    /// Secular jumps built from the eigenbasis of an arbitrary qubit Hamiltonian.
    ///
    /// For each ancilla, `σx(target)` is split into nonzero-frequency
    /// components `A(ω)`; the ancilla drives the components with `|ω| = 2h_b`.
    pub fn secular(h_sys: &ComplexMatrix, schedule: &CollisionSchedule, opts: RateOptions) -> Result<Self> {
        schedule.validate()?;
        let n = qubit_count(h_sys.dim()).ok_or_else(|| {
            Error::DimensionMismatch(format!("system dimension {} is not a qubit register", h_sys.dim()))
        })?;
        let mut jumps = Vec::new();
        for (k, a) in schedule.ancillae.iter().enumerate() {
            a.validate(n)?;
            let coupling = on_site(&pauli_x(), a.target_site, n);
            let groups = jump_set(h_sys, &[coupling], false, SECULAR_TOL)?;
            let windows = windows_for(schedule, k);
            let before = jumps.len();
            for grp in groups.into_iter().filter(|g| (g.omega.abs() - a.gap()).abs() <= SECULAR_TOL) {
                jumps.push(JumpTerm::new(grp.operator, grp.omega, windows.clone(), opts.include_rotating));
            }
            if jumps.len() == before {
                return Err(Error::UnmatchedAncilla { gap: a.gap(), site: a.target_site });
            }
        }
        Self::new(h_sys.dim(), jumps, schedule.clone())
    }

    /// Adds the coherent term `−i[H, ρ]` (Schrödinger picture).
    pub fn with_hamiltonian(mut self, h: ComplexMatrix) -> Result<Self> {
        if h.dim() != self.dim {
            return Err(Error::DimensionMismatch("Hamiltonian and jump dimensions differ".into()));
        }
        h.ensure_hermitian(1e-10)?;
        self.hamiltonian = Some(h);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn schedule(&self) -> &CollisionSchedule {
        &self.schedule
    }

    /// Right-hand side `dρ/dt` at time `t`.
    pub fn rhs(&self, rho: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} in a {}-dimensional master equation",
                rho.dim(),
                self.dim
            )));
        }
        Ok(self.eval(rho, |j| j.rate(t)))
    }

    fn eval(&self, rho: &ComplexMatrix, rate: impl Fn(&JumpTerm) -> f64) -> ComplexMatrix {
        let mut out = match &self.hamiltonian {
            Some(h) => h.commutator(rho).scale(C64::new(0.0, -1.0)),
            None => ComplexMatrix::zeros(self.dim),
        };
        for j in &self.jumps {
            let r = rate(j);
            if r != 0.0 {
                out.add_scaled(&dissipator_with(rho, &j.operator, &j.decay), C64::new(r, 0.0));
            }
        }
        out
    }

    /// Largest rate over the jump set, scanned across every window.
    pub fn max_rate(&self) -> f64 {
        let mut best = 0.0_f64;
        for j in &self.jumps {
            for w in &j.windows {
                for k in 0..=64 {
                    let t = w.start + (w.end - w.start) * k as f64 / 64.0;
                    best = best.max(j.rate(t));
                }
            }
        }
        best
    }

    /// Frobenius norm of `dρ/dt` at `t`, the steady-state residual.
    pub fn residual(&self, rho: &ComplexMatrix, t: f64) -> Result<f64> {
        Ok(self.rhs(rho, t)?.frobenius_norm())
    }

    fn is_idle(&self, mid: f64) -> bool {
        self.hamiltonian.is_none() && self.jumps.iter().all(|j| !j.windows.iter().any(|w| w.covers(mid)))
    }
}

/// `Re Γ(2h_s,t)·D(ρ,σ₋) + Re Γ(−2h_s,t)·D(ρ,σ₊)` with the doubled-rate convention.
pub fn tls_rhs(rho: &ComplexMatrix, t: f64, schedule: &CollisionSchedule, h_s: f64) -> Result<ComplexMatrix> {
    MasterEquation::tls(h_s, schedule, RateOptions::default())?.rhs(rho, t)
}

pub fn ising_rhs(
    rho: &ComplexMatrix,
    t: f64,
    schedule: &CollisionSchedule,
    spec: &HamiltonianSpec,
) -> Result<ComplexMatrix> {
    MasterEquation::ising(spec, schedule, RateOptions::default())?.rhs(rho, t)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IntegrationOptions {
    /// RK4 step; defaults to `τ_c / 200`.
    pub dt: Option<f64>,
    /// Extra sample every this many steps, on top of collision boundaries.
    pub sample_stride: Option<usize>,
    /// Integration horizon; defaults to the end of the last collision.
    pub t_end: Option<f64>,
}

/// Integrates the master equation from `rho0` at `t = 0`.
///
/// Samples are taken at `t = 0`, at the end of every collision window and
/// optionally every `sample_stride` steps. Each stored state is re-validated.
pub fn integrate(
    me: &MasterEquation,
    rho0: &DensityMatrix,
    observer: &Observer,
    opts: IntegrationOptions,
) -> Result<Trajectory> {
    if rho0.dim() != me.dim() {
        return Err(Error::DimensionMismatch("initial state and master equation dimensions differ".into()));
    }
    let sched = me.schedule();
    let dt = opts.dt.unwrap_or(sched.tau_c / STEPS_PER_COLLISION as f64);
    if !(dt > 0.0) || dt > sched.tau_c / MIN_STEPS_PER_COLLISION as f64 {
        return Err(Error::InvalidSpec(format!(
            "RK4 step {dt} ns must be positive and at most τ_c/{MIN_STEPS_PER_COLLISION}"
        )));
    }
    if opts.sample_stride == Some(0) {
        return Err(Error::InvalidSpec("sample stride must be ≥ 1".into()));
    }
    let t_end = opts.t_end.unwrap_or_else(|| sched.end_time());
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidSpec(format!("integration horizon {t_end} must be finite and ≥ 0")));
    }

    let slots = sched.slots();
    let mut marks: Vec<(f64, Option<usize>)> = vec![(0.0, None)];
    for s in &slots {
        marks.push((s.start, None));
        marks.push((s.end, Some(s.round + 1)));
    }
    marks.push((t_end, None));
    marks.retain(|m| m.0 <= t_end);
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut traj = Trajectory::default();
    traj.push(observer.sample(0.0, 0, rho0.clone())?)?;
    let mut rho = rho0.matrix().clone();
    let mut round = 0;
    let mut steps_since_sample = 0usize;

    for pair in marks.windows(2) {
        let (a, b) = (pair[0].0, pair[1].0);
        if b > a {
            let mid = 0.5 * (a + b);
            if !me.is_idle(mid) {
                let n = ((b - a) / dt).ceil().max(1.0) as usize;
                let h = (b - a) / n as f64;
                for k in 0..n {
                    let t = a + k as f64 * h;
                    rho = rk4_step(me, &rho, t, h, mid);
                    steps_since_sample += 1;
                    let at_end = k + 1 == n;
                    if let Some(stride) = opts.sample_stride {
                        if steps_since_sample >= stride && !at_end {
                            let ts = t + h;
                            let state = validated(&mut rho, ts)?;
                            traj.push(observer.sample(ts, round + 1, state)?)?;
                            steps_since_sample = 0;
                        }
                    }
                }
            }
        }
        if let Some(r) = pair[1].1 {
            round = r;
            let state = validated(&mut rho, b)?;
            if traj.last().t < b {
                traj.push(observer.sample(b, r, state)?)?;
            }
            steps_since_sample = 0;
        }
    }
    let last_t = traj.last().t;
    if t_end > last_t {
        let state = validated(&mut rho, t_end)?;
        traj.push(observer.sample(t_end, round, state)?)?;
    }
    Ok(traj)
}

fn rk4_step(me: &MasterEquation, rho: &ComplexMatrix, t: f64, h: f64, mid: f64) -> ComplexMatrix {
    let f = |r: &ComplexMatrix, s: f64| me.eval(r, |j| j.segment_rate(s, mid));
    let half = C64::new(0.5 * h, 0.0);
    let k1 = f(rho, t);
    let k2 = f(&rho.plus_scaled(&k1, half), t + 0.5 * h);
    let k3 = f(&rho.plus_scaled(&k2, half), t + 0.5 * h);
    let k4 = f(&rho.plus_scaled(&k3, C64::new(h, 0.0)), t + h);
    let mut sum = k1.plus_scaled(&k2, C64::new(2.0, 0.0));
    sum.add_scaled(&k3, C64::new(2.0, 0.0));
    sum += &k4;
    rho.plus_scaled(&sum, C64::new(h / 6.0, 0.0))
}

/// Renormalizes small trace drift in place and checks positivity.
fn validated(rho: &mut ComplexMatrix, t: f64) -> Result<DensityMatrix> {
    if rho.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalAbort { t, reason: "non-finite state entries".into() });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_DRIFT_TOL || tr.im.abs() > TRACE_DRIFT_TOL {
        return Err(Error::NumericalAbort { t, reason: format!("trace drifted to {tr}") });
    }
    let fixed = rho.hermitian_part().scale_real(1.0 / tr.re);
    let min = eig_hermitian(&fixed)?.eigenvalues[0];
    if min < -NEGATIVITY_TOL {
        return Err(Error::NumericalAbort { t, reason: format!("negative eigenvalue {min:.3e}") });
    }
    *rho = fixed.clone();
    Ok(DensityMatrix::new_unchecked(fixed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::CollisionMode;
    use crate::spectra::ancilla_populations;
    use crate::spin::pauli_z;
    use crate::states::thermal_state;
    use crate::units::Temperature;

    fn t10() -> Temperature {
        Temperature::from_millikelvin(10.0).unwrap()
    }

    fn tls_schedule(h_b: f64, count: usize) -> CollisionSchedule {
        CollisionSchedule::new(200.0, count, CollisionMode::Sequential, vec![AncillaSpec::new(h_b, t10(), 1e-3, 0)])
            .unwrap()
    }

    fn excited() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
    }

    #[test]
    fn dissipator_examples() {
        let d = dissipator(&excited(), &sigma_minus()).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]));
        let g = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert_eq!(dissipator(&g, &sigma_minus()).unwrap().frobenius_norm(), 0.0);
        assert!(dissipator(&g, &ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn rhs_vanishes_between_collisions() {
        let s = tls_schedule(1.0, 3).with_period(300.0).unwrap();
        let r = tls_rhs(&excited(), 250.0, &s, 1.0).unwrap();
        assert_eq!(r.frobenius_norm(), 0.0);
    }

    #[test]
    fn maximally_mixed_resonant_rate_equation() {
        let s = tls_schedule(1.0, 1);
        let a = s.ancillae[0];
        let (ee, gg) = ancilla_populations(&a);
        let t = 80.0;
        let r = tls_rhs(&ComplexMatrix::identity(2).scale_real(0.5), t, &s, 1.0).unwrap();
        let expected = 1e-6 * t * (ee - gg);
        assert!((r[(0, 0)].re - expected).abs() < 1e-18);
    }

    #[test]
    fn thermal_state_is_stationary() {
        let s = tls_schedule(1.0, 2);
        let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
        let rho = thermal_state(&pauli_z(), t10()).unwrap();
        for t in [10.0, 150.0, 390.0] {
            assert!(me.residual(rho.matrix(), t).unwrap() <= 1e-10 * me.max_rate());
        }
    }

    #[test]
    fn unmatched_ising_ancilla_is_rejected() {
        let spec = HamiltonianSpec::ising(vec![0.5, 0.5], vec![1.0]).unwrap();
        let s = CollisionSchedule::new(400.0, 1, CollisionMode::Sequential, vec![AncillaSpec::new(0.7, t10(), 1e-3, 0)])
            .unwrap();
        assert!(matches!(
            MasterEquation::ising(&spec, &s, RateOptions::default()),
            Err(Error::UnmatchedAncilla { .. })
        ));
    }

    #[test]
    fn zero_rates_give_constant_trajectory() {
        let s = CollisionSchedule::new(200.0, 3, CollisionMode::Sequential, vec![AncillaSpec::new(1.0, t10(), 0.0, 0)])
            .unwrap();
        let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
        let target = thermal_state(&pauli_z(), t10()).unwrap();
        let obs = Observer::new(&pauli_z(), target).unwrap();
        let rho0 = DensityMatrix::new(excited()).unwrap();
        let traj = integrate(&me, &rho0, &obs, IntegrationOptions::default()).unwrap();
        assert_eq!(traj.len(), 4);
        for s in &traj.samples {
            assert!(s.state.matrix().distance(rho0.matrix()) < 1e-15);
        }
    }

    #[test]
    fn coarse_step_is_rejected() {
        let s = tls_schedule(1.0, 1);
        let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
        let obs = Observer::new(&pauli_z(), DensityMatrix::maximally_mixed(2)).unwrap();
        let opts = IntegrationOptions { dt: Some(5.0), ..Default::default() };
        assert!(integrate(&me, &DensityMatrix::maximally_mixed(2), &obs, opts).is_err());
    }

    #[test]
    fn stride_samples_are_ordered() {
        let s = tls_schedule(1.0, 2);
        let me = MasterEquation::tls(1.0, &s, RateOptions::default()).unwrap();
        let obs = Observer::new(&pauli_z(), DensityMatrix::maximally_mixed(2)).unwrap();
        let opts = IntegrationOptions { sample_stride: Some(50), ..Default::default() };
        let traj = integrate(&me, &DensityMatrix::new(excited()).unwrap(), &obs, opts).unwrap();
        assert_eq!(traj.len(), 1 + 2 * 4);
        assert_eq!(traj.round_ends().len(), 3);
        assert_eq!(traj.round_ends()[2].t, 400.0);
    }
}
