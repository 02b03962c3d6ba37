//! End-to-end runs of the `itfleet` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn itfleet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itfleet")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = itfleet(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(Result::unwrap).collect()
}

const HEADER: &str = "asset_id,voltage_kv,commission_date,failure_date,manufacturer\n";

/// `synth` output for the given description; returns the fleet CSV path.
fn synth(dir: &Path, spec: &str) -> PathBuf {
    let spec = write(dir, "synth.json", spec);
    let out = dir.join("synth");
    ok(&["synth", "--spec", p(&spec), "--out", p(&out)]);
    out.join("fleet.csv")
}

fn demo_fleet(dir: &Path) -> PathBuf {
    synth(dir, r#"{"sizes": {"V110": 34, "V150": 33, "V220_380": 33}, "first_year": 1960, "last_year": 2020, "seed": 1}"#)
}

#[test]
fn fit_recovers_the_110_law_from_a_synthetic_register() {
    let dir = TempDir::new().unwrap();
    let fleet = synth(
        dir.path(),
        r#"{"sizes": {"V110": 5000, "V150": 0, "V220_380": 0}, "first_year": 1921, "last_year": 2020, "seed": 7,
            "failures": {"cutoff": "2021-07-01"}}"#,
    );
    let out = dir.path().join("fit");
    ok(&["fit", "--assets", p(&fleet), "--cutoff", "2021-07-01", "--family", "110", "--out", p(&out)]);
    let law = json(&out.join("law.json"));
    let laws = law["laws"].as_array().unwrap();
    assert_eq!(laws.len(), 2);
    for entry in laws {
        let beta = entry["beta"].as_f64().unwrap();
        assert!((beta / 6.67 - 1.0).abs() < 0.05, "{entry}");
    }
    assert!(law["fits"][0]["median"].is_f64());
    for file in ["km.csv", "fleet_summary.json", "fleet_summary.csv", "manifest.json"] {
        assert!(out.join(file).exists(), "{file}");
    }
}

#[test]
fn all_censored_register_keeps_the_curve_and_fails_the_fit() {
    let dir = TempDir::new().unwrap();
    let assets = write(dir.path(), "assets.csv", &format!("{HEADER}A,110,1990-01-01,,\nB,110,2000-05-05,,\nC,150,1980-02-02,,\n"));
    let out = dir.path().join("fit");
    let run = itfleet(&["fit", "--assets", p(&assets), "--cutoff", "2021-01-01", "--out", p(&out)]);
    assert_ne!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stderr).contains("insufficient events"));
    let km = csv_rows(&out.join("km.csv"));
    assert!(!km.is_empty());
    assert!(km.iter().all(|r| &r[4] == "1"));
    assert!(!out.join("manifest.json").exists());
}

#[test]
fn cutoff_before_first_commission_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let assets = write(dir.path(), "assets.csv", &format!("{HEADER}A,110,1990-01-01,,\n"));
    let run = itfleet(&["fit", "--assets", p(&assets), "--cutoff", "1980-01-01", "--out", p(&dir.path().join("o"))]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn missing_input_file_exits_with_io_code() {
    let dir = TempDir::new().unwrap();
    let run = itfleet(&["fit", "--assets", "no-such.csv", "--cutoff", "2021-01-01", "--out", p(dir.path())]);
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn new_assets_score_ten() {
    let dir = TempDir::new().unwrap();
    let assets = write(dir.path(), "assets.csv", &format!("{HEADER}A,110,2021-07-01,,\nB,150,2021-07-01,,\nC,380,2021-07-01,,\n"));
    let out = dir.path().join("score");
    ok(&["score", "--assets", p(&assets), "--laws", "reference", "--as-of", "2021-07-01", "--out", p(&out)]);
    let rows = csv_rows(&out.join("ahi.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| &r[4] == "10" && &r[5] == "green"));
}

#[test]
fn seventy_year_old_110kv_asset() {
    // p(fail within 3 y | age 70) = 0.451 under the reference 110 kV law,
    // which is below the 0.5 threshold of score 2
    let dir = TempDir::new().unwrap();
    let assets = write(dir.path(), "assets.csv", &format!("{HEADER}OLD,110,1951-07-01,,\n"));
    let out = dir.path().join("score");
    ok(&["score", "--assets", p(&assets), "--laws", "reference", "--as-of", "2021-07-01", "--out", p(&out)]);
    let rows = csv_rows(&out.join("ahi.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!((&rows[0][4], &rows[0][5], &rows[0][6]), ("3", "purple", "probability"));
}

#[test]
fn empty_fleet_scores_nothing() {
    let dir = TempDir::new().unwrap();
    let assets = write(dir.path(), "assets.csv", HEADER);
    let out = dir.path().join("score");
    ok(&["score", "--assets", p(&assets), "--laws", "reference", "--as-of", "2021-07-01", "--out", p(&out)]);
    assert!(csv_rows(&out.join("ahi.csv")).is_empty());
}

#[test]
fn score_needs_a_law_for_every_family() {
    let dir = TempDir::new().unwrap();
    let assets = write(dir.path(), "assets.csv", &format!("{HEADER}A,110,1990-01-01,,\nB,150,1990-01-01,,\n"));
    let laws = write(dir.path(), "laws.json", r#"[{"family": "V110", "beta": 6.67, "eta": 63.79, "source": "reference"}]"#);
    let run = itfleet(&["score", "--assets", p(&assets), "--laws", p(&laws), "--as-of", "2021-07-01", "--out", p(dir.path())]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("V150"));
}

fn output_digests(dir: &Path) -> Value {
    let mut m = json(&dir.join("manifest.json"));
    m.as_object_mut().unwrap().remove("duration_seconds");
    m
}

#[test]
fn simulation_artifacts_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let fleet = demo_fleet(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["simulate", "--fleet", p(&fleet), "--scenario", "time-based-unconstrained", "--seed", "1", "--out", p(&a)]);
    ok(&["simulate", "--fleet", p(&fleet), "--scenario", "time-based-unconstrained", "--seed", "1", "--jobs", "3", "--out", p(&b)]);
    let (ma, mb) = (output_digests(&a), output_digests(&b));
    assert_eq!(ma["outputs"], mb["outputs"]);
    assert_eq!(ma["seeds"]["master_seed"], 1);
    for file in ["report.json", "kpis.csv", "scenario.json"] {
        assert_eq!(std::fs::read(a.join(file)).unwrap(), std::fs::read(b.join(file)).unwrap(), "{file}");
    }
    let kpis = csv_rows(&a.join("kpis.csv"));
    assert_eq!(kpis.len(), 20 * 100);
}

#[test]
fn report_against_itself_has_zero_deltas() {
    let dir = TempDir::new().unwrap();
    let fleet = demo_fleet(dir.path());
    let sim = dir.path().join("sim");
    ok(&["simulate", "--fleet", p(&fleet), "--scenario", "condition-based-fte40", "--out", p(&sim)]);
    let out = dir.path().join("cmp");
    ok(&["report", "--a", p(&sim), "--b", p(&sim.join("report.json")), "--out", p(&out)]);
    let rows = csv_rows(&out.join("comparison.csv"));
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() == 0.0 && r[6].parse::<f64>().unwrap() == 0.0));
    assert!(json(&out.join("comparison.json"))["crossover_year"].is_null());
    let plot = csv_rows(&out.join("plotdata/a_totex.csv"));
    assert_eq!(plot.len(), 100);
    for r in &plot {
        let (capex, opex, totex): (f64, f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((capex + opex - totex).abs() <= 1e-6 * totex.max(1.0));
    }
}

#[test]
fn scenario_without_resources_names_the_field() {
    let dir = TempDir::new().unwrap();
    let fleet = demo_fleet(dir.path());
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/examples/condition-based-fte40.json")).unwrap();
    let mut scenario: Value = serde_json::from_str(&text).unwrap();
    scenario.as_object_mut().unwrap().remove("resources");
    let file = write(dir.path(), "scenario.json", &scenario.to_string());
    let run = itfleet(&["simulate", "--fleet", p(&fleet), "--scenario", p(&file), "--out", p(&dir.path().join("o"))]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("resources"));
}

#[test]
fn shipped_example_scenario_runs() {
    let dir = TempDir::new().unwrap();
    let fleet = demo_fleet(dir.path());
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/examples/condition-based-fte40.json");
    ok(&["simulate", "--fleet", p(&fleet), "--scenario", file, "--jobs", "2", "--out", p(&dir.path().join("o"))]);
}

#[test]
fn help_documents_every_flag() {
    for (cmd, flags) in [
        ("fit", &["--assets", "--cutoff", "--family", "--out"][..]),
        ("score", &["--assets", "--laws", "--as-of", "--out"]),
        ("simulate", &["--fleet", "--scenario", "--out", "--jobs", "--seed"]),
        ("synth", &["--spec", "--out"]),
        ("report", &["--a", "--b", "--out"]),
    ] {
        let out = itfleet(&[cmd, "--help"]);
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        for f in flags {
            assert!(text.contains(f), "{cmd} --help lacks {f}");
        }
    }
}
