//! Finite-time bath correlation spectra of a single collision.
//!
//! An ancilla prepared in a thermal state of `h_b σz` and coupled through
//! `g σx ⊗ σx` during `[start, end]` contributes
//!
//! ```text
//! Γ(ω, t) = g² ∫₀^{t'} e^{iωs} (ρ_ee e^{2i h_b s} + ρ_gg e^{−2i h_b s}) ds,   t' = t − start,
//! ```
//!
//! and zero outside the window.

use num_complex::Complex64 as C64;

use crate::hamiltonians::AncillaSpec;
use crate::states::gibbs_weights;

/// Below this detuning (rad/ns) a branch is treated as exactly resonant.
pub const RESONANCE_TOL: f64 = 1e-9;
/// Below this |x·t| the sinc kernel switches to its Taylor series.
const SERIES_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumQuery {
    pub omega: f64,
    pub t: f64,
    pub ancilla: AncillaSpec,
    pub collision_start: f64,
    pub collision_end: f64,
}

impl SpectrumQuery {
    pub fn local_time(&self) -> Option<f64> {
        (self.t >= self.collision_start && self.t <= self.collision_end).then_some(self.t - self.collision_start)
    }
}

/// Thermal populations `(ρ_ee, ρ_gg)` of an ancilla; `ee` is the σz = +1 level.
pub fn ancilla_populations(ancilla: &AncillaSpec) -> (f64, f64) {
    let w = gibbs_weights(&[ancilla.h_b, -ancilla.h_b], ancilla.temperature.beta());
    (w[0], w[1])
}

/// sin(y)/y
fn sinc(y: f64) -> f64 {
    if y.abs() < SERIES_TOL {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

/// `∫₀^t e^{ixs} ds`, evaluated as `t e^{ixt/2} sinc(xt/2)` so that the
/// resonant limit `x → 0` is continuous.
pub fn oscillating_integral(x: f64, t: f64) -> C64 {
    if x.abs() < RESONANCE_TOL {
        return C64::new(t, 0.0);
    }
    let half = 0.5 * x * t;
    C64::from_polar(t * sinc(half), half)
}

/// Closed-form Γ(ω, t) for one collision window; zero outside the window.
pub fn gamma(q: &SpectrumQuery) -> C64 {
    let Some(tl) = q.local_time() else {
        return C64::new(0.0, 0.0);
    };
    let (ee, gg) = ancilla_populations(&q.ancilla);
    let g2 = q.ancilla.g * q.ancilla.g;
    let two_hb = q.ancilla.gap();
    (oscillating_integral(q.omega + two_hb, tl) * ee + oscillating_integral(q.omega - two_hb, tl) * gg) * g2
}

/// `pop · g² · sin(δt)/δ`, with the `δ → 0` limit `pop · g² · t`.
pub fn detuned_rate(delta: f64, t_local: f64, pop: f64, g: f64) -> f64 {
    pop * g * g * t_local * sinc(delta * t_local)
}

/// Ratio `Re Γ(2h_s, t) / Re Γ(−2h_s, t)` of the resonant branches, which
/// equals `ρ_gg/ρ_ee = exp(2 β_b h_b)` independent of `t`. Returns `+∞` when the
/// ancilla has no excited population.
pub fn kms_ratio(h_s: f64, ancilla: &AncillaSpec) -> f64 {
    let (ee, gg) = ancilla_populations(ancilla);
    // The detuning kernels of the two branches are even in δ and cancel.
    let delta = 2.0 * h_s - ancilla.gap();
    let emission = detuned_rate(delta, 1.0, gg, 1.0);
    let absorption = detuned_rate(-delta, 1.0, ee, 1.0);
    if absorption == 0.0 {
        f64::INFINITY
    } else {
        emission / absorption
    }
}

/// Lindblad rate contributed by one ancilla to a transition releasing energy
/// `omega`: `2 Re Γ(ω, t)`, restricted to the near-resonant branch unless
/// `include_rotating` also keeps the counter-rotating one.
pub fn dissipation_rate(q: &SpectrumQuery, include_rotating: bool) -> f64 {
    let Some(tl) = q.local_time() else {
        return 0.0;
    };
    let (ee, gg) = ancilla_populations(&q.ancilla);
    let two_hb = q.ancilla.gap();
    let emit = (q.omega - two_hb, gg);
    let absorb = (q.omega + two_hb, ee);
    let (near, far) = if emit.0.abs() <= absorb.0.abs() { (emit, absorb) } else { (absorb, emit) };
    let mut re = detuned_rate(near.0, tl, near.1, q.ancilla.g);
    if include_rotating {
        re += detuned_rate(far.0, tl, far.1, q.ancilla.g);
    }
    2.0 * re
}
