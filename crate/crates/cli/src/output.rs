//! CSV rendering. Floats use Rust's shortest round-trip formatting, so equal
//! results give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::experiments::{CrosscheckResult, Curve, SweepResult};

/// `h_b,n,fidelity`, one row per grid point and collision count.
pub fn sweep_csv(r: &SweepResult) -> String {
    let mut s = String::from("h_b,n,fidelity\n");
    for (h_b, row) in r.h_b.iter().zip(&r.fidelity) {
        for (n, f) in row.iter().enumerate() {
            let _ = writeln!(s, "{h_b},{n},{f}");
        }
    }
    s
}

/// `t_ns,label,fidelity,trace,purity,p0..p{d-1}`, energy populations ascending.
pub fn trajectories_csv(curves: &[Curve]) -> String {
    let d = curves.first().map_or(0, |c| c.trajectory.first().populations.len());
    let mut s = String::from("t_ns,label,fidelity,trace,purity");
    for k in 0..d {
        let _ = write!(s, ",p{k}");
    }
    s.push('\n');
    for c in curves {
        for smp in &c.trajectory.samples {
            let _ = write!(s, "{},{},{},{},{}", smp.t, c.label, smp.fidelity, smp.trace, smp.purity);
            for p in &smp.populations {
                let _ = write!(s, ",{p}");
            }
            s.push('\n');
        }
    }
    s
}

/// `t_ns,trace_distance`
pub fn crosscheck_csv(r: &CrosscheckResult) -> String {
    let mut s = String::from("t_ns,trace_distance\n");
    for (t, d) in &r.rows {
        let _ = writeln!(s, "{t},{d}");
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
