use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn knotflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotflow")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDENS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden {name} differs");
}

/// scan.csv without the timing column.
fn scan_cells(dir: &Path) -> String {
    let text = std::fs::read_to_string(dir.join("scan.csv")).unwrap();
    text.lines().map(|l| l.rsplitn(2, ',').nth(1).unwrap()).collect::<Vec<_>>().join("\n") + "\n"
}

#[test]
fn inv_trefoil() {
    let o = knotflow(&["inv", "--family", "torus", "2", "3", "--sig"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["signature"], -2);
    golden("inv_torus_2_3_sig.json", &String::from_utf8(o.stdout).unwrap());
}

#[test]
fn inv_unknot() {
    let o = knotflow(&["inv", "--braid", "1", "--strands", "2", "--sig"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["signature"], 0);
}

#[test]
fn inv_knm_omega() {
    let o = knotflow(&["inv", "--family", "knm", "6", "6", "--omega", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o)["omega_signature"][0]["value"].as_i64().unwrap();
    assert!((v.abs() - 16).abs() <= 12, "{v}");
    golden("inv_knm_6_6_omega_1_3.json", &String::from_utf8(o.stdout).unwrap());
}

#[test]
fn inv_everything() {
    let o = knotflow(&["inv", "--braid", "1 1 1 1 1", "--strands", "2", "--sig", "--det", "--gstar", "--seifert", "--omega", "1/2", "--omega", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!((v["signature"].as_i64(), v["determinant"].as_str()), (Some(-4), Some("5")));
    assert_eq!(v["slice_genus"]["value"], "2");
    assert_eq!(v["slice_genus"]["exact"], true);
    assert_eq!(v["omega_signature"][0]["value"], -4);
    assert_eq!(v["seifert_matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors() {
    for args in [
        vec!["inv", "--braid", "1 x", "--strands", "2"],
        vec!["inv", "--braid", "3", "--strands", "2"],
        vec!["inv", "--family", "pretzel", "2", "3"],
        vec!["inv", "--family", "torus", "2", "3", "--omega", "5/4"],
        vec!["inv"],
        vec!["scan", "--gstar", "--nmax", "3"],
        vec!["scan", "--nmax", "3"],
        vec!["scan", "--sig", "--gstar"],
        vec!["frobnicate"],
    ] {
        let o = knotflow(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn scan_signature() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = knotflow(&["scan", "--sig", "--nmax", "20", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let tau = v["tauBar"].as_f64().unwrap().abs();
    assert!((0.4..=0.55).contains(&tau), "{tau}");
    assert_eq!(v["boundsSatisfied"], true);
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(on_disk, v);
    assert_eq!(std::fs::read_to_string(dir.path().join("scan.csv")).unwrap().lines().count(), 401);
}

#[test]
fn scan_half_equals_signature() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let sig = knotflow(&["scan", "--sig", "--nmax", "12", "--out", a.path().to_str().unwrap()]);
    let half = knotflow(&["scan", "--omega", "1/2", "--nmax", "12", "--out", b.path().to_str().unwrap()]);
    assert_eq!((sig.status.code(), half.status.code()), (Some(0), Some(0)));
    assert_eq!(scan_cells(a.path()), scan_cells(b.path()));
    golden("scan_sig_12.csv", &scan_cells(a.path()));
    let mut summary = stdout_json(&sig);
    summary.as_object_mut().unwrap().remove("monotoneTrend");
    golden("scan_sig_12_summary.json", &(serde_json::to_string_pretty(&summary).unwrap() + "\n"));
}

#[test]
fn scan_jobs_do_not_change_results() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    knotflow(&["--jobs", "1", "scan", "--omega", "1/3", "--nmax", "8", "--out", a.path().to_str().unwrap()]);
    knotflow(&["scan", "--omega", "1/3", "--nmax", "8", "--jobs", "4", "--out", b.path().to_str().unwrap()]);
    assert_eq!(scan_cells(a.path()), scan_cells(b.path()));
}

fn run_flow(config: &Path, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["flow", "--config", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(extra);
    (knotflow(&args), dir)
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn flow_twist_trefoil() {
    let (o, dir) = run_flow(&configs().join("twist23.cfg"), &["--svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rows = csv::Reader::from_path(dir.path().join("flow.csv")).unwrap();
    let headers = rows.headers().unwrap().clone();
    let row = rows.records().next().unwrap().unwrap();
    let sigma = headers.iter().position(|h| h == "sigma").unwrap();
    assert_eq!(&row[sigma], "-2");
    let manifest = read_json(dir.path().join("manifest.json"));
    assert_eq!(manifest["run_hash"], stdout_json(&o)["hash"]);
    assert_eq!(manifest["seed"], 1);
    assert!(manifest["outputs"].as_array().unwrap().iter().any(|v| v == "plot.svg"));
    assert!(std::fs::read_to_string(dir.path().join("plot.svg")).unwrap().starts_with("<svg"));
    golden("flow_twist23.csv", &std::fs::read_to_string(dir.path().join("flow.csv")).unwrap());
}

#[test]
fn flow_is_deterministic() {
    let cfg = configs().join("perturbed.cfg");
    let short = tempfile::NamedTempFile::new().unwrap();
    let text = std::fs::read_to_string(&cfg).unwrap().replace("tgrid = 4*pi, 8*pi, 12*pi, 16*pi, 20*pi, 24*pi", "tgrid = 4*pi, 8*pi");
    std::fs::write(short.path(), text).unwrap();
    let (a, da) = run_flow(short.path(), &[]);
    let (b, db) = run_flow(short.path(), &["--jobs", "1"]);
    assert_eq!((a.status.code(), b.status.code()), (Some(0), Some(0)));
    let (ma, mb) = (read_json(da.path().join("manifest.json")), read_json(db.path().join("manifest.json")));
    assert_eq!(ma["run_hash"], mb["run_hash"]);
    assert_eq!(std::fs::read(da.path().join("run.json")).unwrap(), std::fs::read(db.path().join("run.json")).unwrap());
    let (c, _) = run_flow(short.path(), &["--seed", "5"]);
    assert_eq!(c.status.code(), Some(0));
}

#[test]
fn flow_rejects_divergent_field() {
    let (o, dir) = run_flow(&configs().join("divergent.cfg"), &[]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("divergence") && err.contains('['), "{err}");
    assert!(!dir.path().join("flow.csv").exists());
}

#[test]
fn flow_config_errors_name_the_line() {
    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), "field = twist\nx0 = 2.5, 0\ntgrid = 1\n").unwrap();
    let (o, _) = run_flow(bad.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn braid_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, knotflow::diagram::Diagram::from_braid(&knotflow::braid::torus_braid(2, 5).unwrap()).to_json()).unwrap();
    let o = knotflow(&["braid", "--diagram", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["letters"].as_array().unwrap().len(), 5);
    std::fs::write(&path, "{\"crossings\": 3}").unwrap();
    assert_eq!(knotflow(&["braid", "--diagram", path.to_str().unwrap()]).status.code(), Some(2));
}
