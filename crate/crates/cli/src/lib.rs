//! Experiment runner for `thermocoll`: layered TOML configuration, parallel
//! parameter sweeps, CSV and SVG output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod report;
pub mod svg;

pub use config::{Experiment, ExperimentConfig, InitialState};
pub use error::{CliError, Result};
pub use experiments::{
    conservation, run_crosscheck, run_ising2, run_sweep, run_xy, ConservationReport, CrosscheckResult, Curve,
    SweepResult,
};
pub use report::{run_analyze, AnalysisReport};

/// Runs `cfg` and renders its main artifact, plus an SVG figure when one exists.
pub fn execute(cfg: &ExperimentConfig) -> Result<(String, Option<String>)> {
    Ok(match cfg.experiment {
        Experiment::Sweep => {
            let r = run_sweep(cfg)?;
            (output::sweep_csv(&r), Some(svg::sweep_heatmap(&r)))
        }
        Experiment::Ising2 => {
            let c = run_ising2(cfg)?;
            (output::trajectories_csv(&c), Some(svg::fidelity_plot("Ising chain: collision modes", &c)))
        }
        Experiment::Xy => {
            let c = run_xy(cfg)?;
            (output::trajectories_csv(&c), Some(svg::fidelity_plot("XY chain with DM interaction", &c)))
        }
        Experiment::Analyze => (run_analyze(cfg)?.to_string(), None),
        Experiment::Crosscheck => {
            let r = run_crosscheck(cfg)?;
            (output::crosscheck_csv(&r), Some(svg::crosscheck_plot(&r)))
        }
    })
}
