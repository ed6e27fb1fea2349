use std::path::Path;
use std::process::{Command, Output};

use thermocoll_cli::{execute, Experiment, ExperimentConfig};

fn thermocoll(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermocoll")).current_dir(dir).args(args).output().unwrap()
}

fn small(experiment: Experiment, extra: &[&str]) -> ExperimentConfig {
    let mut o: Vec<String> = vec!["schedule.count=6".into()];
    if experiment == Experiment::Sweep {
        o.push("sweep.steps=7".into());
    }
    o.extend(extra.iter().map(|s| s.to_string()));
    ExperimentConfig::from_parts(experiment, None, &o).unwrap()
}

#[test]
fn csv_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--override", "sweep.steps=9", "--override", "schedule.count=10"];
    let mut outputs = Vec::new();
    for (name, threads) in [("a.csv", "1"), ("b.csv", "4")] {
        let out = thermocoll(dir.path(), &[&args[..], &["--out", name, "--threads", threads]].concat());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().next(), Some("h_b,n,fidelity"));
    assert_eq!(text.lines().count(), 1 + 9 * 11);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "experiment = \"sweep\"\nunknown_key = 1\n").unwrap();
    std::fs::write(dir.path().join("other.toml"), "experiment = \"xy\"\n").unwrap();
    for args in [
        vec!["sweep", "--config", "bad.toml"],
        vec!["sweep", "--config", "other.toml"],
        vec!["sweep", "--override", "sweep.h_b_min=2.0"],
        vec!["sweep", "--override", "schedule.tau_c=-1"],
        vec!["xy", "--override", "initial.states=[\"boiling\"]"],
        vec![
            "crosscheck",
            "--override",
            "model.kind=ising",
            "--override",
            "model.fields=[0.5, 0.5]",
            "--override",
            "model.couplings=[1.0]",
            "--override",
            "schedule.ancillae=[{h_b = 0.7, site = 0}]",
        ],
        vec!["crosscheck", "--override", "bath.temperature_mk=0"],
    ] {
        let out = thermocoll(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = thermocoll(dir.path(), &["analyze", "--config", "nope.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn printed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for e in ["sweep", "ising2", "xy", "analyze", "crosscheck"] {
        let out = thermocoll(dir.path(), &[e, "--print-config", "--override", "schedule.count=7"]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        std::fs::write(dir.path().join("cfg.toml"), &text).unwrap();
        let again = thermocoll(dir.path(), &[e, "--print-config", "--config", "cfg.toml"]);
        assert_eq!(String::from_utf8(again.stdout).unwrap(), text, "{e}");
    }
}

#[test]
fn shipped_configs_load() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for (file, e) in [
        ("sweep.toml", Experiment::Sweep),
        ("ising2.toml", Experiment::Ising2),
        ("xy.toml", Experiment::Xy),
        ("analyze_xy.toml", Experiment::Analyze),
        ("crosscheck.toml", Experiment::Crosscheck),
    ] {
        ExperimentConfig::load(e, Some(&root.join(file)), &[]).unwrap_or_else(|err| panic!("{file}: {err}"));
    }
}

#[test]
fn trajectories_stay_physical() {
    for e in [Experiment::Ising2, Experiment::Xy] {
        let (csv, svg) = execute(&small(e, &[])).unwrap();
        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&header[..5], &["t_ns", "label", "fidelity", "trace", "purity"]);
        assert_eq!(header.len(), 5 + 4);
        for line in lines {
            let cols: Vec<&str> = line.split(',').collect();
            let num = |i: usize| cols[i].parse::<f64>().unwrap();
            assert!((-1e-12..=1.0 + 1e-12).contains(&num(2)), "{line}");
            assert!((num(3) - 1.0).abs() <= 1e-8, "{line}");
            let total: f64 = (5..cols.len()).map(num).sum();
            assert!((total - 1.0).abs() <= 1e-8, "{line}");
        }
        assert!(svg.unwrap().starts_with("<svg"));
    }
}

#[test]
fn overrides_change_the_run() {
    let base = execute(&small(Experiment::Crosscheck, &[])).unwrap().0;
    let hot = execute(&small(Experiment::Crosscheck, &["bath.temperature_mk=40"])).unwrap().0;
    assert_ne!(base, hot);
    assert_eq!(base.lines().count(), 1 + 7);
}

#[test]
fn analyze_reports_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = thermocoll(
        dir.path(),
        &["analyze", "--override", "model.kind=xy", "--override", "model.j=1", "--override", "schedule.sites=[0]", "--override", "analysis.include_zero_frequency=true"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nonzero-frequency jumps: commutant dimension 4"), "{text}");
    assert!(text.contains("with zero-frequency transitions: commutant dimension 1"), "{text}");
    assert_eq!(std::fs::read_to_string(dir.path().join("analysis.txt")).unwrap(), text);
}
