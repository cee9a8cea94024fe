use std::process::Command;

use lp_lab::cli::{run, Experiment, ExperimentConfig};
use lp_lab::Error;

const SMALL: &str = "\
period = 64.0
points = 32768
jmax = 7
j_sweep = [2, 3, 4, 5]
random_fields = 4
";

fn small() -> ExperimentConfig {
    ExperimentConfig::from_toml_str(SMALL).unwrap()
}

fn config_key(text: &str) -> String {
    match ExperimentConfig::from_toml_str(text).unwrap_err() {
        Error::Config { key, .. } => key,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn config_errors_name_the_key() {
    assert_eq!(config_key("jmax = 12\nsed = 1\n"), "sed");
    assert_eq!(config_key("points = \"many\"\n"), "points");
    assert_eq!(config_key("jmax = 2\n"), "jmax");
    assert_eq!(config_key("cases = [\"both\"]\n"), "cases");
    assert_eq!(config_key("j_sweep = [4, 4]\n"), "j_sweep");
    assert_eq!(config_key("norm_params = [[0, 0, 1]]\n"), "norm_params");
    assert_eq!(config_key("eps0 = 0.5\n"), "eps0");
    assert_eq!(config_key("random_fields = 0\n"), "random_fields");
}

#[test]
fn invalid_grid_is_rejected() {
    assert!(ExperimentConfig::from_toml_str("points = 1000\n").is_err());
    assert!(ExperimentConfig::from_toml_str("n = 3\n").is_err());
}

#[test]
fn sweep_too_deep_for_jmax_surfaces_an_error() {
    let mut cfg = small();
    cfg.j_sweep = vec![2, 6];
    assert!(run(&cfg, Experiment::TlDiverge).is_err());
}

#[test]
fn small_suite_is_deterministic() {
    let cfg = small();
    let a = run(&cfg, Experiment::All).unwrap();
    let b = run(&cfg, Experiment::All).unwrap();
    assert_eq!(a.artifacts, b.artifacts);
    assert_eq!(a.report.render(), b.report.render());

    let names: Vec<&str> = a.artifacts.iter().map(|x| x.name.as_str()).collect();
    for want in [
        "family.csv",
        "decay.csv",
        "besov-bound.csv",
        "tl-diverge.csv",
        "multiplier.csv",
        "disjoint-sum.csv",
        "conv-ineq.csv",
        "vector-valued.csv",
    ] {
        assert!(names.contains(&want), "missing {want}");
    }

    let mut other = cfg.clone();
    other.seed += 1;
    let c = run(&other, Experiment::ConvIneq).unwrap();
    let a_conv = a
        .artifacts
        .iter()
        .find(|x| x.name == "conv-ineq.csv")
        .unwrap();
    assert_ne!(a_conv.contents, c.artifacts[0].contents);
}

#[test]
fn norm_table_has_one_row_per_triple_and_level() {
    let cfg = small();
    let out = run(&cfg, Experiment::TlDiverge).unwrap();
    assert_eq!(
        out.table.rows.len(),
        cfg.norm_params.len() * cfg.j_sweep.len()
    );
    let csv = &out.artifacts[0].contents;
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "experiment,case,s,p,q,J,besov_f,tl_f,besov_Tf,tl_Tf,oracle_tl_Tf_lo,oracle_tl_Tf_hi,K_emp,boundary_ok"
    );
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[0], "tl-diverge");
        assert!(["PLT", "PGT"].contains(&&rec[1]));
        for col in 6..12 {
            let v: f64 = rec[col].parse().unwrap();
            assert!(v.is_finite() && v > 0.0);
        }
        rows += 1;
    }
    assert_eq!(rows, out.table.rows.len());
}

#[test]
fn p_equals_q_is_reported_not_applicable() {
    let mut cfg = small();
    cfg.norm_params = vec![[0.0, 2.0, 2.0], [0.0, 1.0, 2.0]];
    let out = run(&cfg, Experiment::TlDiverge).unwrap();
    let line = out.report.render();
    assert!(
        line.contains("tl-diverge.s=0,p=2,q=2  measured -  bound -  not applicable (p=q)"),
        "{line}"
    );
    assert!(out.table.rows.iter().all(|r| r.p != r.q));
}

#[test]
fn binary_writes_outputs_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("small.toml");
    std::fs::write(&cfg_path, SMALL).unwrap();
    let out_dir = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_lp-lab"))
        .args(["family-check", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let stdout = String::from_utf8(status.stdout).unwrap();
    assert!(stdout.contains("family-check.telescoping"));
    assert!(out_dir.join("family.csv").is_file());
    assert_eq!(
        std::fs::read_to_string(out_dir.join("report.txt")).unwrap(),
        stdout
    );

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "spacing = \"wide\"\n").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_lp-lab"))
        .args(["decay", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("spacing"));
}
