use std::path::Path;
use std::process::{Command, Output};

use multiconc::PureState;
use multiconc_cli::StateFile;
use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiconc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn named_file(dir: &TempDir, name: &str) -> String {
    let o = bin(&["random", "--named", name]);
    assert!(o.status.success(), "{}", stderr(&o));
    write(dir, &format!("{}.json", name.replace(':', "_")), &stdout(&o))
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn values(doc: &Value) -> Vec<(String, f64)> {
    doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["requested"].as_str().unwrap().to_string(), r["value"].as_f64().unwrap()))
        .collect()
}

#[test]
fn named_ghz_file() {
    let o = bin(&["random", "--named", "ghz:3:2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = StateFile::parse(&stdout(&o)).unwrap();
    assert_eq!(doc.dims, vec![2, 2, 2]);
    assert_eq!(doc.amplitudes.len(), 2);
    for r in &doc.amplitudes {
        assert_eq!(r.re, std::f64::consts::FRAC_1_SQRT_2);
        assert_eq!(r.im, 0.0);
    }
}

#[test]
fn random_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = bin(&["random", "--dims", "2,3", "--seed", "5"]);
    let b = bin(&["random", "--dims", "2,3", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let parsed = StateFile::parse(&stdout(&a)).unwrap().to_state().unwrap();
    let direct = PureState::random(&[2, 3], 5).unwrap();
    let dev = parsed
        .amplitudes()
        .iter()
        .zip(direct.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-15);

    let path = write(&dir, "r.json", &stdout(&a));
    let o = bin(&["compute", &path, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = values(&json(&o));
    let expected = multiconc::concurrence_bipartite(&direct, &Default::default()).unwrap().value;
    assert_eq!(v, vec![("epr".to_string(), expected)]);
    assert_eq!(json(&o)["results"][0]["class"], "epr");
}

#[test]
fn bad_random_arguments() {
    assert_eq!(bin(&["random", "--named", "w:1"]).status.code(), Some(2));
    assert_eq!(bin(&["random", "--named", "ghz"]).status.code(), Some(2));
    assert_eq!(bin(&["random"]).status.code(), Some(2));
    assert_eq!(bin(&["random", "--dims", "2,x"]).status.code(), Some(2));
    assert_eq!(bin(&["random", "--dims", "2,0"]).status.code(), Some(2));
}

#[test]
fn compute_canonical_values() {
    let dir = TempDir::new().unwrap();
    let ghz = named_file(&dir, "ghz:3:2");
    let w = named_file(&dir, "w:3");

    let o = bin(&["compute", &ghz, "--class", "ghz", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = values(&json(&o));
    assert_eq!(v.len(), 1);
    assert!((v[0].1 - 1.0).abs() < 1e-12);

    let o = bin(&["compute", &w, "--class", "ghz", "--json"]);
    assert_eq!(values(&json(&o))[0].1, 0.0);

    let o = bin(&["compute", &w, "--class", "w", "--norm-w", "1", "--json", "--breakdown"]);
    let doc = json(&o);
    assert!((doc["results"][0]["value"].as_f64().unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
    assert_eq!(doc["results"][0]["per_operator"].as_array().unwrap().len(), 3);

    let o = bin(&["compute", &w, "--table", "--breakdown"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("ghz-reduced") && text.contains("w[1,2]"), "{text}");
}

#[test]
fn compute_input_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"dims":[2,2,2],"amplitudes":[{"index":[0,1,1],"re":1.0,"im":0.0}]}"#,
    );
    let o = bin(&["compute", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1-based"), "{}", stderr(&o));
    assert!(stderr(&o).contains("amplitudes[0].index"));

    let extra = write(&dir, "extra.json", r#"{"dims":[2],"amplitudes":[],"basis":"z"}"#);
    let o = bin(&["compute", &extra]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("basis"));

    let o = bin(&["compute", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let w = named_file(&dir, "w:3");
    assert_eq!(bin(&["compute", &w, "--norm-w", "-1"]).status.code(), Some(2));
    assert_eq!(bin(&["compute", &w, "--class", "epr"]).status.code(), Some(3));
    let bell = named_file(&dir, "bell");
    assert_eq!(bin(&["compute", &bell, "--class", "ghz-reduced"]).status.code(), Some(3));
    assert_eq!(bin(&["compute", &bell, "--json", "--table"]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let dir = TempDir::new().unwrap();
    let class_value = |doc: &Value, c: &str| {
        doc["classes"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["class"] == c)
            .unwrap()["value"]
            .as_f64()
            .unwrap()
    };

    let w4 = named_file(&dir, "w:4");
    let o = bin(&["classify", &w4, "--restarts", "4", "--seed", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["verdict"], "w-class");
    assert!((class_value(&doc, "w") - 1.0).abs() < 1e-12);
    assert!(class_value(&doc, "ghz") < 1e-12);
    assert!(class_value(&doc, "ghz-reduced") < 1e-12);

    let g4 = named_file(&dir, "ghz:4:2");
    let doc = json(&bin(&["classify", &g4, "--restarts", "4", "--json"]));
    assert_eq!(doc["verdict"], "genuine-ghz");
    assert_eq!(doc["genuine_ghz"], true);
    assert!(class_value(&doc, "w") < 1e-12);
    assert!((class_value(&doc, "ghz") - 1.0).abs() < 1e-12);
    assert!(class_value(&doc, "ghz-reduced") < 1e-12);

    let prod = write(
        &dir,
        "prod.json",
        r#"{"dims":[2,2,2],"amplitudes":[{"index":[1,1,1],"re":1.0,"im":0.0}]}"#,
    );
    let doc = json(&bin(&["classify", &prod, "--restarts", "4", "--json"]));
    assert_eq!(doc["verdict"], "fully-separable");
    for c in doc["classes"].as_array().unwrap() {
        assert_eq!(c["value"].as_f64().unwrap(), 0.0);
    }

    let o = bin(&["classify", &prod, "--restarts", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["classify", &prod, "--restarts", "3"]);
    assert!(stdout(&o).contains("verdict: fully-separable"));
}

#[test]
fn check_suites() {
    let o = bin(&["check", "--suite", "square"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);

    let o = bin(&["check", "--suite", "oracle", "--samples", "200", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert!(doc["rows"][0]["residual"].as_f64().unwrap() < 1e-10);

    let o = bin(&["check", "--suite", "permutation", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // The sandwich over every subsystem fails on the identity factors while
    // the pair-support sandwich and the GHZ non-invariance rows pass.
    let o = bin(&["check", "--suite", "slocc", "--samples", "100", "--json"]);
    assert_eq!(o.status.code(), Some(4));
    let doc = json(&o);
    for row in doc["rows"].as_array().unwrap() {
        let claim = row["claim"].as_str().unwrap();
        let expected = if claim.starts_with("slocc/w/") && claim.ends_with("/sl2/full") { "FAIL" } else { "PASS" };
        assert_eq!(row["status"], expected, "{claim}");
    }

    let o = bin(&["check", "--experiment", "lu-w", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("INFO"));
}

#[test]
fn state_file_path_is_reported() {
    let o = bin(&["compute", "/nonexistent/state.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(Path::new("/nonexistent/state.json").to_str().unwrap()));
}
