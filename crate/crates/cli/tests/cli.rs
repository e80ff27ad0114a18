use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn run_config(dir: &Path, toml: &str) -> (Output, Option<Value>) {
    let cfg = dir.join("suite.toml");
    let out = dir.join("report.json");
    std::fs::write(&cfg, toml).unwrap();
    let o = verify(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let report = std::fs::read_to_string(&out).ok().map(|s| serde_json::from_str(&s).unwrap());
    (o, report)
}

#[test]
fn empty_suite_passes_with_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let (o, report) = run_config(dir.path(), "seed = 1\n");
    assert_eq!(o.status.code(), Some(0));
    let r = report.unwrap();
    assert_eq!(r["schema"], 1);
    assert_eq!(r["records"].as_array().unwrap().len(), 0);
    assert_eq!(r["summary"]["total"], 0);
    // only the report is left behind
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2);
}

#[test]
fn flat_target_is_rejected_as_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let (o, report) = run_config(
        dir.path(),
        r#"
seed = 3
[[scenario]]
check = "theorem"
name = "flat-target"
theorem = "norm0"
source = { kind = "poincare_ball", dim = 1 }
target = { kind = "flat", dim = 1 }
map = { kind = "scale", factor = [0.5, 0.0] }
region = { radius = 0.5, points = 4 }
"#,
    );
    assert_eq!(o.status.code(), Some(0));
    let r = report.unwrap();
    let rec = &r["records"][0];
    assert_eq!(rec["status"], "inconclusive");
    assert!(rec["message"].as_str().unwrap().contains("hypothesis"));
    assert_eq!(r["summary"]["inconclusive"], 1);
    for key in ["quantity", "value", "bound", "margin", "tolerance", "provenance"] {
        assert!(rec.get(key).is_some(), "{key}");
    }
}

#[test]
fn numerical_rejection_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (o, report) = run_config(
        dir.path(),
        r#"
seed = 3
[[scenario]]
check = "bochner"
name = "outside-the-ball"
source = { kind = "poincare_ball", dim = 1 }
target = { kind = "poincare_ball", dim = 1 }
map = { kind = "identity" }
point = [[1.5, 0.0]]
ell = 1
barrier = "u"
"#,
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report.unwrap()["records"][0]["status"], "error");
}

#[test]
fn violated_bound_fails() {
    // kappa far above the true curvature of the target
    let dir = tempfile::tempdir().unwrap();
    let (o, report) = run_config(
        dir.path(),
        r#"
seed = 3
[[scenario]]
check = "quartic"
name = "overstated-kappa"
source = { kind = "poincare_ball", dim = 2 }
target = { kind = "poincare_ball", dim = 2 }
map = { kind = "scale", factor = [0.5, 0.0] }
point = [[0.1, 0.0], [0.0, 0.2]]
ell = 2
kappa = 10.0
samples = 1000
"#,
    );
    assert_eq!(o.status.code(), Some(1));
    let rec = &report.unwrap()["records"][0];
    assert_eq!(rec["status"], "fail");
    assert!(rec["margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run_config(dir.path(), "seed = 1\n[[scenario]]\ncheck = \"theorem\"\nname = \"x\"\ntheorem = \"royden\"\nsource = {\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line"), "{err}");

    let unknown = r#"
seed = 1
[[scenario]]
check = "theorem"
name = "x"
theorem = "no-such-theorem"
source = { kind = "flat", dim = 1 }
target = { kind = "flat", dim = 1 }
map = { kind = "identity" }
region = { radius = 0.5, points = 2 }
"#;
    let (o, report) = run_config(dir.path(), unknown);
    assert_eq!(o.status.code(), Some(2));
    assert!(report.is_none());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-theorem"));

    let (o, _) = run_config(dir.path(), &unknown.replace("no-such-theorem", "royden").replace("flat\", dim = 1 }\nmap", "hyperbolic\", dim = 1 }\nmap"));
    assert_eq!(o.status.code(), Some(2));

    let (o, _) = run_config(dir.path(), "format = \"json\"\n");
    assert_eq!(o.status.code(), Some(2), "seed is required");

    let dup = "seed = 1\n[[scenario]]\ncheck = \"sandwich\"\nname = \"a\"\n[[scenario]]\ncheck = \"sandwich\"\nname = \"a\"\n";
    let (o, _) = run_config(dir.path(), dup);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));

    let typo = "seed = 1\n[[scenario]]\ncheck = \"majorization\"\nname = \"m\"\ntrails = 5\n";
    let (o, _) = run_config(dir.path(), typo);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trails"));

    assert_eq!(verify(&["run", "/nonexistent/suite.toml"]).status.code(), Some(2));
    assert_eq!(verify(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn suite_budget_and_seed_flow_into_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let toml = r#"
seed = 11
budget = { frames = 3, refine = 2 }
[[scenario]]
check = "theorem"
name = "inherits"
theorem = "norm0"
source = { kind = "poincare_ball", dim = 1, scale = 2.0 }
target = { kind = "poincare_ball", dim = 1 }
map = { kind = "identity" }
region = { radius = 0.5, points = 3 }

[[scenario]]
check = "theorem"
name = "own-budget"
theorem = "norm0"
source = { kind = "poincare_ball", dim = 1, scale = 2.0 }
target = { kind = "poincare_ball", dim = 1 }
map = { kind = "identity" }
region = { radius = 0.5, points = 3 }
budget = { frames = 5, refine = 1 }
seed = 99
"#;
    let (o, report) = run_config(dir.path(), toml);
    assert_eq!(o.status.code(), Some(0));
    let r = report.unwrap();
    let scn = &r["config"]["scenario"];
    assert_eq!(scn[0]["budget"]["frames"], 3);
    assert_eq!(scn[1]["budget"]["frames"], 5);
    assert_eq!(r["records"][1]["seed"], 99);
    assert_ne!(r["records"][0]["seed"], 11);
    assert_eq!(r["records"][0]["provenance"], "measured");
}

#[test]
fn text_format_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    std::fs::write(&cfg, "seed = 2\n[[scenario]]\ncheck = \"sandwich\"\nname = \"sw\"\ntrials = 10\n").unwrap();
    let o = verify(&["run", cfg.to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("PASS") && text.contains("sw") && text.contains("1 pass"), "{text}");
}

#[test]
fn catalog_lists_every_id() {
    let o = verify(&["list-models"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for id in ["flat", "fubini_study", "poincare_ball", "scaled", "product"] {
        assert!(text.contains(id), "{id}");
    }
    let o = verify(&["list-models", "--json"]);
    let cat: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = cat["theorems"].as_array().unwrap().iter().map(|t| t["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["royden", "norm0", "jacobian", "interpolating-i", "interpolating-ii", "positive-lower"]);
    assert_eq!(cat["metrics"].as_array().unwrap().len(), 5);
}

#[test]
fn seed_flag_changes_derived_seeds_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    std::fs::write(&cfg, "seed = 2\n[[scenario]]\ncheck = \"sandwich\"\nname = \"sw\"\ntrials = 10\n").unwrap();
    let read = |seed: &str| -> Value {
        let out = dir.path().join(format!("r{seed}.json"));
        let o = verify(&["run", cfg.to_str().unwrap(), "--seed", seed, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
    };
    let (a, b) = (read("5"), read("6"));
    assert_eq!(a["seed"], 5);
    assert_ne!(a["records"][0]["seed"], b["records"][0]["seed"]);
}
