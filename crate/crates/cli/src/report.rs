//! Transition analysis of a configured model: eigenbasis expansion of the
//! couplings, driven jump set, commutant and fixed-point verdict.

use std::fmt::{self, Write as _};

use thermocoll::linalg::{eig_hermitian, ComplexMatrix};
use thermocoll::spin::{on_site, pauli_x};
use thermocoll::transitions::{
    bath_correlation_check, decompose, jump_set, uniqueness_check, zero_frequency_obstructions,
    zero_frequency_transitions, CorrelationCheck, FrequencyGroup, TransitionEntry, UniquenessReport, ZeroFrequencyBlock,
};

use crate::config::ExperimentConfig;
use crate::error::Result;

const SECULAR_TOL: f64 = 1e-6;
const COEFF_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SiteExpansion {
    pub site: usize,
    pub entries: Vec<TransitionEntry>,
}

#[derive(Clone, Debug)]
pub struct GroupSummary {
    pub site: usize,
    pub omega: f64,
    pub norm: f64,
    pub driven: bool,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub model: String,
    pub energies: Vec<f64>,
    pub expansions: Vec<SiteExpansion>,
    pub groups: Vec<GroupSummary>,
    /// Verdict for the driven nonzero-frequency jumps alone.
    pub nonzero: UniquenessReport,
    /// Verdict with the individual zero-frequency transitions added, when requested.
    pub with_zero_frequency: Option<UniquenessReport>,
    /// `source` holds the site index.
    pub obstructions: Vec<ZeroFrequencyBlock>,
    /// `(k, l)` eigen-index pairs of the zero-frequency transitions present in the couplings.
    pub zero_frequency_pairs: Vec<(usize, usize)>,
    pub correlations: Vec<CorrelationCheck>,
}

impl AnalysisReport {
    pub fn unique(&self) -> bool {
        self.with_zero_frequency.unwrap_or(self.nonzero).unique
    }
}

pub fn run_analyze(cfg: &ExperimentConfig) -> Result<AnalysisReport> {
    let spec = cfg.model.spec()?;
    let h = spec.build()?;
    let n = spec.qubits();
    let eig = eig_hermitian(&h)?;
    let ancillae = cfg.ancillae()?;
    let mut sites: Vec<usize> = ancillae.iter().map(|a| a.target_site).collect();
    sites.sort_unstable();
    sites.dedup();
    let couplings: Vec<ComplexMatrix> = sites.iter().map(|&s| on_site(&pauli_x(), s, n)).collect();

    let mut expansions = Vec::new();
    for (&site, o) in sites.iter().zip(&couplings) {
        let table = decompose(o, &eig)?;
        expansions.push(SiteExpansion { site, entries: table.nonzero(COEFF_TOL).copied().collect() });
    }

    let all: Vec<FrequencyGroup> = jump_set(&h, &couplings, false, SECULAR_TOL)?;
    let driven_by = |g: &FrequencyGroup| {
        ancillae.iter().any(|a| a.target_site == sites[g.source] && (g.omega.abs() - a.gap()).abs() <= SECULAR_TOL)
    };
    let groups: Vec<GroupSummary> = all
        .iter()
        .map(|g| GroupSummary {
            site: sites[g.source],
            omega: g.omega,
            norm: g.operator.frobenius_norm(),
            driven: driven_by(g),
        })
        .collect();
    let mut jumps: Vec<ComplexMatrix> = all.iter().filter(|g| driven_by(g)).map(|g| g.operator.clone()).collect();
    let nonzero = uniqueness_check(&jumps)?;

    let zero = zero_frequency_transitions(&h, &couplings)?;
    let zero_frequency_pairs = zero.iter().map(|t| (t.k, t.l)).collect();
    let with_zero_frequency = if cfg.analysis.include_zero_frequency && !zero.is_empty() {
        jumps.extend(zero.into_iter().map(|t| t.operator));
        Some(uniqueness_check(&jumps)?)
    } else if cfg.analysis.include_zero_frequency {
        Some(nonzero)
    } else {
        None
    };

    let channel_ops: Vec<ComplexMatrix> = ancillae.iter().map(|a| on_site(&pauli_x(), a.target_site, n)).collect();
    let channel_groups: Vec<FrequencyGroup> = jump_set(&h, &channel_ops, false, SECULAR_TOL)?
        .into_iter()
        .filter(|g| (g.omega.abs() - ancillae[g.source].gap()).abs() <= SECULAR_TOL)
        .collect();
    let channel_bath: Vec<usize> = (0..ancillae.len()).collect();
    let correlations = bath_correlation_check(&channel_groups, &channel_bath, &ancillae, SECULAR_TOL)?;

    Ok(AnalysisReport {
        model: format!("{spec:?}"),
        energies: eig.eigenvalues.clone(),
        expansions,
        groups,
        nonzero,
        with_zero_frequency,
        obstructions: zero_frequency_obstructions(&h, &couplings)?
            .into_iter()
            .map(|o| ZeroFrequencyBlock { source: sites[o.source], ..o })
            .collect(),
        zero_frequency_pairs,
        correlations,
    })
}

fn verdict(r: &UniquenessReport) -> String {
    format!(
        "commutant dimension {}, adjoint-closed {}, unique fixed point {}",
        r.commutant_dim,
        if r.adjoint_closed { "yes" } else { "no" },
        if r.unique { "yes" } else { "no" }
    )
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "model: {}", self.model)?;
        writeln!(s, "\n[energies]")?;
        for (k, e) in self.energies.iter().enumerate() {
            writeln!(s, "  E{k} = {e:+.9}")?;
        }
        for ex in &self.expansions {
            writeln!(s, "\n[sigma_x({}) in the eigenbasis]", ex.site)?;
            writeln!(s, "  {:>3} {:>3} {:>14} {:>14} {:>14}", "k", "l", "omega", "re", "im")?;
            for e in &ex.entries {
                writeln!(
                    s,
                    "  {:>3} {:>3} {:>14.9} {:>14.9} {:>14.9}",
                    e.k, e.l, e.omega, e.coefficient.re, e.coefficient.im
                )?;
            }
        }
        writeln!(s, "\n[frequency groups]")?;
        writeln!(s, "  {:>4} {:>14} {:>12} driven", "site", "omega", "norm")?;
        for g in &self.groups {
            writeln!(s, "  {:>4} {:>14.9} {:>12.6} {}", g.site, g.omega, g.norm, if g.driven { "yes" } else { "no" })?;
        }
        writeln!(s, "\n[zero-frequency obstructions]")?;
        if self.obstructions.is_empty() {
            writeln!(s, "  none (nondegenerate spectrum)")?;
        }
        for o in &self.obstructions {
            writeln!(
                s,
                "  site {} level E = {:+.9} multiplicity {} off-diagonal weight {:.6e}",
                o.source, o.energy, o.multiplicity, o.weight
            )?;
        }
        let pairs: Vec<String> = self.zero_frequency_pairs.iter().map(|(k, l)| format!("({k},{l})")).collect();
        writeln!(s, "  transitions: {}", if pairs.is_empty() { "none".into() } else { pairs.join(" ") })?;
        writeln!(s, "\n[bath correlation matrices]")?;
        for c in &self.correlations {
            writeln!(
                s,
                "  omega {:>12.6} channels {:?} min eigenvalue {:.6e} {}",
                c.omega,
                c.channels,
                c.min_eigenvalue,
                if c.positive_semidefinite { "PSD" } else { "NOT PSD" }
            )?;
        }
        writeln!(s, "\n[verdict]")?;
        writeln!(s, "  nonzero-frequency jumps: {}", verdict(&self.nonzero))?;
        if let Some(z) = &self.with_zero_frequency {
            writeln!(s, "  with zero-frequency transitions: {}", verdict(z))?;
        }
        writeln!(
            s,
            "  thermalization to the Gibbs state is {}",
            if self.unique() { "guaranteed" } else { "not guaranteed" }
        )?;
        f.write_str(&s)
    }
}
