//! Experiment configuration: TOML files layered over per-experiment defaults,
//! with `--override key.path=value` edits applied last.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thermocoll::linalg::{eig_hermitian, ComplexMatrix};
use thermocoll::spin::{basis_vector, on_site, pauli_x, qubit_count};
use thermocoll::states::thermal_state;
use thermocoll::transitions::jump_set;
use thermocoll::{
    AncillaSpec, CollisionMode, CollisionSchedule, Complex64, DensityMatrix, HamiltonianSpec, Temperature,
};

use crate::error::{CliError, Result};

/// Frequencies closer than this (rad/ns) are one ancilla gap when deriving ancillae.
const GAP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Sweep,
    Ising2,
    Xy,
    Analyze,
    Crosscheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Sweep => "sweep",
            Experiment::Ising2 => "ising2",
            Experiment::Xy => "xy",
            Experiment::Analyze => "analyze",
            Experiment::Crosscheck => "crosscheck",
        }
    }

    pub fn default_output(self) -> PathBuf {
        match self {
            Experiment::Analyze => PathBuf::from("analysis.txt"),
            other => PathBuf::from(format!("{}.csv", other.name())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Tls { h_s: f64 },
    Ising { fields: Vec<f64>, couplings: Vec<f64> },
    Xy { j: f64 },
}

impl ModelConfig {
    pub fn spec(&self) -> Result<HamiltonianSpec> {
        let spec = match self {
            ModelConfig::Tls { h_s } => HamiltonianSpec::Tls { h_s: *h_s },
            ModelConfig::Ising { fields, couplings } => HamiltonianSpec::IsingChain {
                fields: fields.clone(),
                couplings: couplings.clone(),
            },
            ModelConfig::Xy { j } => HamiltonianSpec::XyDm { j: *j },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hamiltonian(&self) -> Result<ComplexMatrix> {
        Ok(self.spec()?.build()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    Sequential,
    Simultaneous,
}

impl From<ModeConfig> for CollisionMode {
    fn from(m: ModeConfig) -> Self {
        match m {
            ModeConfig::Sequential => CollisionMode::Sequential,
            ModeConfig::Simultaneous => CollisionMode::Simultaneous,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AncillaConfig {
    pub h_b: f64,
    pub site: usize,
    /// Falls back to `schedule.g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    /// Falls back to `bath.temperature_mk`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_mk: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub tau_c: f64,
    /// Defaults to `tau_c` (back-to-back collisions).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_p: Option<f64>,
    pub count: usize,
    pub mode: ModeConfig,
    pub g: f64,
    /// Sites that receive derived ancillae; all sites when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<Vec<usize>>,
    /// Explicit ancilla list; derived from the model's transitions when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancillae: Option<Vec<AncillaConfig>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub temperature_mk: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub h_b_min: f64,
    pub h_b_max: f64,
    pub steps: usize,
}

impl SweepConfig {
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.h_b_min];
        }
        let span = self.h_b_max - self.h_b_min;
        (0..self.steps).map(|k| self.h_b_min + span * k as f64 / (self.steps - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_stride: Option<usize>,
    #[serde(default)]
    pub include_rotating: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default)]
    pub include_zero_frequency: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Unused by the deterministic dynamics; kept so configs can carry one.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub model: ModelConfig,
    pub schedule: ScheduleConfig,
    pub bath: BathConfig,
    pub initial: InitialConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

fn schedule(tau_c: f64, count: usize, sites: Option<Vec<usize>>) -> ScheduleConfig {
    ScheduleConfig { tau_c, tau_p: None, count, mode: ModeConfig::Sequential, g: 1e-3, sites, ancillae: None }
}

impl ExperimentConfig {
    /// Built-in parameters of each experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let tls = ModelConfig::Tls { h_s: 1.0 };
        let (model, schedule, states, sweep) = match experiment {
            Experiment::Sweep => (
                tls,
                schedule(200.0, 50, None),
                vec!["excited"],
                Some(SweepConfig { h_b_min: 0.25, h_b_max: 1.75, steps: 61 }),
            ),
            Experiment::Ising2 => (
                ModelConfig::Ising { fields: vec![0.5, 0.5], couplings: vec![1.0] },
                schedule(400.0, 40, None),
                vec!["infinite-temperature"],
                None,
            ),
            Experiment::Xy => (
                ModelConfig::Xy { j: 1.0 },
                schedule(400.0, 100, Some(vec![0])),
                vec!["thermal(30)", "thermal(100)", "thermal(1000)", "infinite-temperature", "basis(01)", "bell(phi+)"],
                None,
            ),
            Experiment::Analyze => (tls, schedule(200.0, 1, None), vec!["excited"], None),
            Experiment::Crosscheck => (tls, schedule(200.0, 50, None), vec!["excited"], None),
        };
        Self {
            experiment,
            seed: 0,
            output: None,
            model,
            schedule,
            bath: BathConfig { temperature_mk: 10.0 },
            initial: InitialConfig { states: states.into_iter().map(String::from).collect() },
            sweep,
            integrator: IntegratorConfig::default(),
            analysis: AnalysisConfig::default(),
        }
    }

    /// Defaults, then the file at `path`, then each `key.path=value` override.
    pub fn load(experiment: Experiment, path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?),
            None => None,
        };
        Self::from_parts(experiment, text.as_deref(), overrides)
    }

    pub fn from_parts(experiment: Experiment, text: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut value = toml::Value::try_from(Self::defaults(experiment))
            .map_err(|e| CliError::Config(format!("cannot encode defaults: {e}")))?;
        if let Some(text) = text {
            let file: toml::Value = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
            merge(&mut value, file);
        }
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: Self = value.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        if cfg.experiment != experiment {
            return Err(CliError::Config(format!(
                "config is for experiment `{}` but `{}` was requested",
                cfg.experiment.name(),
                experiment.name()
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let spec = self.model.spec()?;
        let s = &self.schedule;
        if !(s.tau_c > 0.0) || !s.tau_c.is_finite() {
            return bad(format!("schedule.tau_c must be positive, got {}", s.tau_c));
        }
        if let Some(tp) = s.tau_p {
            if !(tp >= s.tau_c) || !tp.is_finite() {
                return bad(format!("schedule.tau_p ({tp}) must be at least tau_c ({})", s.tau_c));
            }
        }
        if s.count == 0 {
            return bad("schedule.count must be ≥ 1".into());
        }
        if !(s.g >= 0.0) || !s.g.is_finite() {
            return bad(format!("schedule.g must be ≥ 0, got {}", s.g));
        }
        let n = spec.qubits();
        if let Some(sites) = &s.sites {
            if sites.is_empty() || sites.iter().any(|&x| x >= n) {
                return bad(format!("schedule.sites must be nonempty and below {n}"));
            }
        }
        if let Some(list) = &s.ancillae {
            if list.is_empty() {
                return bad("schedule.ancillae must not be empty when given".into());
            }
        }
        self.bath_temperature()?;
        if self.initial.states.is_empty() {
            return bad("initial.states must list at least one state".into());
        }
        for st in &self.initial.states {
            st.parse::<InitialState>()?;
        }
        if self.experiment == Experiment::Sweep {
            let Some(sw) = &self.sweep else {
                return bad("sweep experiment needs a [sweep] table".into());
            };
            if !sw.h_b_min.is_finite() || !sw.h_b_max.is_finite() || sw.h_b_min > sw.h_b_max {
                return bad(format!("sweep bounds [{}, {}] must be finite and ordered", sw.h_b_min, sw.h_b_max));
            }
            if sw.steps == 0 {
                return bad("sweep.steps must be ≥ 1".into());
            }
        }
        if self.integrator.sample_stride == Some(0) {
            return bad("integrator.sample_stride must be ≥ 1".into());
        }
        self.ancillae()?;
        Ok(())
    }

    pub fn bath_temperature(&self) -> Result<Temperature> {
        temperature(self.bath.temperature_mk)
    }

    /// Explicit ancillae, or one per distinct positive transition frequency of
    /// `σx` on each coupled site, tuned to resonance.
    pub fn ancillae(&self) -> Result<Vec<AncillaSpec>> {
        let t = self.bath_temperature()?;
        let s = &self.schedule;
        let n = self.model.spec()?.qubits();
        let out: Vec<AncillaSpec> = if let Some(list) = &s.ancillae {
            list.iter()
                .map(|a| {
                    let temp = a.temperature_mk.map(temperature).transpose()?.unwrap_or(t);
                    Ok(AncillaSpec::new(a.h_b, temp, a.g.unwrap_or(s.g), a.site))
                })
                .collect::<Result<_>>()?
        } else {
            let h = self.model.hamiltonian()?;
            let sites: Vec<usize> = s.sites.clone().unwrap_or_else(|| (0..n).collect());
            let mut out = Vec::new();
            for site in sites {
                let groups = jump_set(&h, &[on_site(&pauli_x(), site, n)], false, GAP_TOL)?;
                let mut gaps: Vec<f64> = Vec::new();
                for g in groups.iter().filter(|g| g.omega > GAP_TOL) {
                    if !gaps.iter().any(|x| (x - g.omega).abs() <= GAP_TOL) {
                        gaps.push(g.omega);
                    }
                }
                out.extend(gaps.into_iter().map(|w| AncillaSpec::new(w / 2.0, t, s.g, site)));
            }
            out
        };
        if out.is_empty() {
            return Err(CliError::Config("no ancillae: the coupled sites have no nonzero transitions".into()));
        }
        for a in &out {
            a.validate(n)?;
        }
        Ok(out)
    }

    pub fn collision_schedule(&self, ancillae: Vec<AncillaSpec>) -> Result<CollisionSchedule> {
        let s = &self.schedule;
        let sched = CollisionSchedule::new(s.tau_c, s.count, s.mode.into(), ancillae)?;
        Ok(sched.with_period(s.tau_p.unwrap_or(s.tau_c))?)
    }

    pub fn initial_states(&self) -> Result<Vec<InitialState>> {
        self.initial.states.iter().map(|s| s.parse()).collect()
    }

    pub fn output_path(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| self.experiment.default_output())
    }
}

fn temperature(mk: f64) -> Result<Temperature> {
    if mk == f64::INFINITY {
        return Ok(Temperature::infinite());
    }
    Temperature::from_millikelvin(mk).map_err(CliError::from)
}

fn merge(base: &mut toml::Value, incoming: toml::Value) {
    match (base, incoming) {
        (toml::Value::Table(b), toml::Value::Table(inc)) => {
            for (k, v) in inc {
                let replace = matches!(&v, toml::Value::Table(t) if t.contains_key("kind"));
                match b.get_mut(&k) {
                    Some(slot) if !replace => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn apply_override(root: &mut toml::Value, spec: &str) -> Result<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{spec}` is not KEY=VALUE")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("override key `{path}` is malformed")));
    }
    let raw = raw.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let mut cur = root;
    for k in &keys[..keys.len() - 1] {
        let table = cur
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override `{path}` walks into a non-table")))?;
        cur = table.entry(k.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    let table =
        cur.as_table_mut().ok_or_else(|| CliError::Config(format!("override `{path}` walks into a non-table")))?;
    let last = keys[keys.len() - 1];
    if last == "kind" {
        // A new tag starts a fresh table; the old variant's fields would be unknown.
        table.clear();
    }
    table.insert(last.to_string(), value);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Initial-state descriptor, written as in config files: `excited`, `ground`,
/// `thermal(T_mK)`, `basis(bits)`, `infinite-temperature`, `eigenstate(k)`,
/// `bell(phi+|phi-|psi+|psi-)`.
///
/// `excited` and `ground` are the highest and lowest energy eigenstates.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Excited,
    Ground,
    Thermal(f64),
    Basis(String),
    InfiniteTemperature,
    Eigenstate(usize),
    Bell(BellState),
}

impl FromStr for InitialState {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || CliError::Config(format!("unknown initial state `{s}`"));
        let arg = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')).map(str::trim);
        Ok(match s {
            "excited" => InitialState::Excited,
            "ground" => InitialState::Ground,
            "infinite-temperature" => InitialState::InfiniteTemperature,
            _ => {
                if let Some(t) = arg("thermal(") {
                    let mk: f64 = t.parse().map_err(|_| bad())?;
                    temperature(mk)?;
                    InitialState::Thermal(mk)
                } else if let Some(bits) = arg("basis(") {
                    basis_vector(bits).ok_or_else(bad)?;
                    InitialState::Basis(bits.to_string())
                } else if let Some(k) = arg("eigenstate(") {
                    InitialState::Eigenstate(k.parse().map_err(|_| bad())?)
                } else if let Some(b) = arg("bell(") {
                    InitialState::Bell(match b {
                        "phi+" => BellState::PhiPlus,
                        "phi-" => BellState::PhiMinus,
                        "psi+" => BellState::PsiPlus,
                        "psi-" => BellState::PsiMinus,
                        _ => return Err(bad()),
                    })
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Excited => write!(f, "excited"),
            InitialState::Ground => write!(f, "ground"),
            InitialState::Thermal(mk) => write!(f, "thermal({mk})"),
            InitialState::Basis(bits) => write!(f, "basis({bits})"),
            InitialState::InfiniteTemperature => write!(f, "infinite-temperature"),
            InitialState::Eigenstate(k) => write!(f, "eigenstate({k})"),
            InitialState::Bell(b) => {
                let name = match b {
                    BellState::PhiPlus => "phi+",
                    BellState::PhiMinus => "phi-",
                    BellState::PsiPlus => "psi+",
                    BellState::PsiMinus => "psi-",
                };
                write!(f, "bell({name})")
            }
        }
    }
}

impl InitialState {
    pub fn prepare(&self, h: &ComplexMatrix) -> Result<DensityMatrix> {
        let d = h.dim();
        let eigenstate = |k: usize| -> Result<DensityMatrix> {
            let eig = eig_hermitian(h)?;
            if k >= d {
                return Err(CliError::Config(format!("eigenstate({k}) out of range for dimension {d}")));
            }
            Ok(DensityMatrix::pure(&eig.eigenvector(k))?)
        };
        match self {
            InitialState::Excited => eigenstate(d - 1),
            InitialState::Ground => eigenstate(0),
            InitialState::Eigenstate(k) => eigenstate(*k),
            InitialState::Thermal(mk) => Ok(thermal_state(h, temperature(*mk)?)?),
            InitialState::InfiniteTemperature => Ok(DensityMatrix::maximally_mixed(d)),
            InitialState::Basis(bits) => {
                let v = basis_vector(bits).ok_or_else(|| CliError::Config(format!("bad bit string `{bits}`")))?;
                if v.len() != d {
                    return Err(CliError::Config(format!("basis({bits}) does not match dimension {d}")));
                }
                Ok(DensityMatrix::pure(&v)?)
            }
            InitialState::Bell(b) => {
                if qubit_count(d) != Some(2) {
                    return Err(CliError::Config("Bell states need a two-qubit system".into()));
                }
                let (x, y, sign) = match b {
                    BellState::PhiPlus => ("00", "11", 1.0),
                    BellState::PhiMinus => ("00", "11", -1.0),
                    BellState::PsiPlus => ("01", "10", 1.0),
                    BellState::PsiMinus => ("01", "10", -1.0),
                };
                let (u, v) = (basis_vector(x).unwrap(), basis_vector(y).unwrap());
                let psi: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| a + b * sign).collect();
                Ok(DensityMatrix::pure(&psi)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for e in [Experiment::Sweep, Experiment::Ising2, Experiment::Xy, Experiment::Analyze, Experiment::Crosscheck] {
            ExperimentConfig::defaults(e).validate().unwrap();
        }
    }

    #[test]
    fn derived_ising_ancillae() {
        let cfg = ExperimentConfig::defaults(Experiment::Ising2);
        let a: Vec<(usize, f64)> = cfg.ancillae().unwrap().iter().map(|a| (a.target_site, a.h_b)).collect();
        assert_eq!(a.len(), 4);
        for (got, want) in a.iter().zip([(0, 1.5), (0, 0.5), (1, 1.5), (1, 0.5)]) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-12);
        }
    }

    #[test]
    fn derived_xy_ancilla() {
        let a = ExperimentConfig::defaults(Experiment::Xy).ancillae().unwrap();
        assert_eq!(a.len(), 1);
        assert!((a[0].h_b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn overrides_and_model_replacement() {
        let cfg = ExperimentConfig::from_parts(
            Experiment::Crosscheck,
            Some("[model]\nkind = \"ising\"\nfields = [0.5, 0.5]\ncouplings = [1.0]\n"),
            &["schedule.count=3".into(), "schedule.mode=simultaneous".into(), "bath.temperature_mk = 20".into()],
        )
        .unwrap();
        assert_eq!(cfg.schedule.count, 3);
        assert_eq!(cfg.schedule.mode, ModeConfig::Simultaneous);
        assert_eq!(cfg.bath.temperature_mk, 20.0);
        assert!(matches!(cfg.model, ModelConfig::Ising { .. }));
    }

    #[test]
    fn rejects_unknown_keys_and_mismatched_experiment() {
        assert!(ExperimentConfig::from_parts(Experiment::Sweep, Some("colour = 3\n"), &[]).is_err());
        assert!(ExperimentConfig::from_parts(Experiment::Sweep, Some("[schedule]\ntau = 3\n"), &[]).is_err());
        assert!(ExperimentConfig::from_parts(Experiment::Sweep, Some("experiment = \"xy\"\n"), &[]).is_err());
        assert!(ExperimentConfig::from_parts(Experiment::Sweep, None, &["sweep.steps".into()]).is_err());
        assert!(ExperimentConfig::from_parts(Experiment::Sweep, None, &["sweep.h_b_min=inf".into()]).is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["excited", "ground", "thermal(12.5)", "basis(0110)", "infinite-temperature", "eigenstate(3)", "bell(psi-)"] {
            assert_eq!(s.parse::<InitialState>().unwrap().to_string(), s);
        }
        assert!("thermal(-1)".parse::<InitialState>().is_err());
        assert!("basis(012)".parse::<InitialState>().is_err());
        assert!("hot".parse::<InitialState>().is_err());
    }

    #[test]
    fn excited_tls_is_spin_up() {
        let h = HamiltonianSpec::Tls { h_s: 1.0 }.build().unwrap();
        let rho = InitialState::Excited.prepare(&h).unwrap();
        assert!((rho.populations()[0] - 1.0).abs() < 1e-15);
    }
}
