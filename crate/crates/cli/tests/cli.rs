use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command as Process, Output};

use dpw_cli::{run, verify, Command, ExperimentConfig, FSpec, LambdaSpec};
use serde_json::Value;

fn dpw(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_dpw"))
        .args(args)
        .output()
        .expect("dpw runs")
}

fn report<'a>(a: &'a dpw_cli::Artifacts, name: &str) -> &'a Value {
    &a.reports
        .iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no report {name}"))
        .1
}

fn bump_config(alpha: f64, lambda: LambdaSpec) -> ExperimentConfig {
    ExperimentConfig {
        alpha,
        lambda_spec: lambda,
        ..Default::default()
    }
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn full_sampling_reconstructs_in_one_step() {
    let a = run(
        &bump_config(PI / 8.0, LambdaSpec::Full),
        &Command::Reconstruct { sweep: vec![] },
    )
    .unwrap();
    let r = report(&a, "reconstruction");
    assert_eq!(r["iterations"], 1);
    assert!(r["final_error"].as_f64().unwrap() <= 1e-8);
    assert!(r["relative_error"].as_f64().unwrap() <= 1e-12);
    assert!(a.failed_checks.is_empty());
}

#[test]
fn gap_four_contracts_below_the_bound() {
    // sin²(π/8) / sin²(π/4) = 0.29289…
    for seed in 0..5 {
        let cfg = ExperimentConfig {
            seed: Some(seed),
            f_spec: FSpec::Bump {
                bumps: vec![],
                random: true,
            },
            ..bump_config(
                PI / 8.0,
                LambdaSpec::TwoProgression {
                    delta_e: 4,
                    delta_o: 4,
                },
            )
        };
        let a = run(&cfg, &Command::Reconstruct { sweep: vec![] }).unwrap();
        let r = report(&a, "reconstruction");
        assert!((r["bound_ratio"].as_f64().unwrap() - 0.2928932188134524).abs() < 1e-12);
        assert!(
            r["measured_ratio"].as_f64().unwrap() <= 0.31,
            "seed {seed}: {r}"
        );
        assert_eq!(r["converged"], true);
        assert!(a.failed_checks.is_empty());
    }
}

#[test]
fn gap_beyond_the_sufficient_condition_has_no_guarantee() {
    let cfg = bump_config(
        PI / 4.0,
        LambdaSpec::TwoProgression {
            delta_e: 8,
            delta_o: 8,
        },
    );
    let a = run(&cfg, &Command::Reconstruct { sweep: vec![] }).unwrap();
    let r = report(&a, "reconstruction");
    assert_eq!(r["guarantee"], false);
    assert_eq!(r["set"]["sufficient"], false);
    assert!(a.failed_checks.is_empty());
}

#[test]
fn default_suite_passes() {
    let a = verify(&ExperimentConfig::default()).unwrap();
    let agg = report(&a, "verify");
    assert_eq!(agg["ok"], true, "{agg}");
    for (name, v) in &a.reports {
        if name != "verify" {
            assert_eq!(v["ok"], true, "{name}: {v}");
            for key in ["name", "lhs", "bound", "tolerance"] {
                assert!(v.get(key).is_some(), "{name} lacks {key}");
            }
        }
    }
}

#[test]
fn indicator_suite_flags_the_envelope_but_exits_cleanly() {
    let cfg = ExperimentConfig {
        f_spec: FSpec::Indicator,
        ..Default::default()
    };
    let a = verify(&cfg).unwrap();
    let env = report(&a, "growth_envelope");
    assert_eq!(env["ok"], false);
    assert_eq!(env["guaranteed"], false);
    assert_eq!(report(&a, "verify")["ok"], true);
    assert!(a.failed_checks.is_empty());

    let out = dpw(&["verify", "--function", "indicator"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn alpha_next_to_the_pole_is_a_numerical_error() {
    let out = dpw(&["verify", "--alpha", "1.5607", "--name", "edge"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("edge") && err.contains("alpha") && err.contains("pole"),
        "{err}"
    );
}

#[test]
fn config_errors_name_the_field() {
    let out = dpw(&["synth", "--grid", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`L`"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"name": "rg", "lambda_spec": {"kind": "random_gaps", "delta_e": 4, "delta_o": 4}}"#,
    )
    .unwrap();
    let out = dpw(&["sample", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("rg") && err.contains("lambda_spec.seed"),
        "{err}"
    );

    let out = dpw(&["synth", "--outputs", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reconstruction_outside_one_period_is_rejected() {
    let out = dpw(&["reconstruct", "--grid", "2048", "--window", "-64,64,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`window`"));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"alpha": 0.3, "L": 256, "name": "file"}"#).unwrap();
    let out = dpw(&[
        "synth",
        "--config",
        path.to_str().unwrap(),
        "--alpha",
        "0.2",
        "--outputs",
        "synth",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["synth"]["alpha"], 0.2);
    assert_eq!(v["synth"]["L"], 256);
    assert_eq!(v["synth"]["experiment"], "file");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = |out: &str| {
        vec![
            "reconstruct".to_owned(),
            "--function".into(),
            "random-bump".into(),
            "--lambda".into(),
            "random-gaps".into(),
            "--delta-e".into(),
            "6".into(),
            "--seed".into(),
            "11".into(),
            "--sweep".into(),
            "2,4,6".into(),
            "--out".into(),
            out.to_owned(),
        ]
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let argv = args(d.path().to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(dpw(&argv).status.code(), Some(0));
    }
    let (fa, fb) = (read_dir_sorted(a.path()), read_dir_sorted(b.path()));
    assert_eq!(fa, fb);
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        ["convergence.csv", "reconstruction.json", "sweep.csv"]
    );
    let conv = String::from_utf8(fa[0].1.clone()).unwrap();
    assert!(conv.starts_with("iteration,residual,ratio\n"));
    let rep: Value = serde_json::from_slice(&fa[1].1).unwrap();
    assert_eq!(rep["seed"], 11);
    assert_eq!(rep["set"]["lambda_seed"], 11);
}

#[test]
fn every_subcommand_runs() {
    for sub in [
        "synth",
        "analyze",
        "kernel",
        "project",
        "sample",
        "reconstruct",
        "verify",
        "density",
    ] {
        let out = dpw(&[sub, "--grid", "128", "--json", "--csv"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{sub}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn kernel_matches_the_closed_form() {
    let a = run(
        &ExperimentConfig {
            l: 4096,
            ..Default::default()
        },
        &Command::Kernel {
            center: discrete_pw::LatticePoint::new(3, 2),
            radius: 40,
        },
    )
    .unwrap();
    let k = report(&a, "kernel");
    assert!((k["diagonal"][0].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(k["max_quadrature_error"].as_f64().unwrap() <= 1e-6);
}
