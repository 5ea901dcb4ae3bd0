use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn spq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_graph(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn pg_of_figure_one() {
    let o = spq(&["pg", "--input", &fixture("fig1.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "7\n");
}

#[test]
fn pg_all_nodes() {
    let o = spq(&["pg", "--input", &fixture("fig1.json"), "--all-nodes", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pg"], 7);
    assert_eq!(v["roots"], serde_json::json!(["v0", "v1", "v2"]));
}

#[test]
fn json_reports_carry_provenance_and_are_deterministic() {
    let args = ["pg-uac", "--input", &fixture("fig1.json"), "--format", "json"];
    let a = spq(&args);
    let b = spq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["pgUAC"], 165);
    assert_eq!(v["h1"].as_array().unwrap().len(), 36);
    assert!(v["fingerprint"].as_str().unwrap().len() >= 8);
    let seq = spq(&["pg-uac", "--input", &fixture("fig1.json"), "--format", "json", "--threads", "1"]);
    assert_eq!(seq.stdout, a.stdout);
}

#[test]
fn chain_validates_with_warning() {
    let f = temp_graph(r#"{"vertices":[{"id":"a","weight":-2},{"id":"b","weight":-3}],"edges":[["a","b"]]}"#);
    let o = spq(&["validate", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("chain (cyclic quotient)"));
    let o = spq(&["pg", "--input", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn oracle_verify_exmc() {
    let o = spq(&["oracle-verify", "--input", &fixture("exmc.json"), "--max-degree", "15"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "all characters agree\n");
}

#[test]
fn invalid_input_exits_one() {
    let bad = temp_graph(r#"{"vertices":[{"id":"a","weight":-1},{"id":"b","weight":-1}],"edges":[["a","b"]]}"#);
    for args in [
        vec!["pg", "--input", bad.path().to_str().unwrap()],
        vec!["pg", "--input", "/nonexistent/graph.json"],
        vec!["pg", "--unknown-flag"],
        vec!["pg"],
        vec!["h1", "--input", &fixture("fig1.json")],
        vec!["h1", "--input", &fixture("fig1.json"), "--char", "6,0"],
        vec!["pg", "--input", &fixture("fig1.json"), "--node", "w1"],
        vec!["pg", "--input", &fixture("fig1.json"), "--format", "xml"],
    ] {
        let o = spq(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn unknown_verdict_exits_three() {
    let o = spq(&["monomial-check", "--input", &fixture("fig1.json"), "--bound", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("Unknown"));
    let o = spq(&["emit-equations", "--input", &fixture("fig1.json"), "--bound", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = spq(&["monomial-check", "--input", &fixture("fig1.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn emitted_equations_are_seeded() {
    let run = |seed: &str| spq(&["emit-equations", "--input", &fixture("exmc.json"), "--seed", seed, "--format", "json"]).stdout;
    assert_eq!(run("4"), run("4"));
    assert_ne!(run("4"), run("5"));
    let v: serde_json::Value = serde_json::from_slice(&run("4")).unwrap();
    assert_eq!(v["equivariant"], true);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
}

#[test]
fn h1_and_cv_and_hilbert() {
    let o = spq(&["h1", "--input", &fixture("fig1.json"), "--char", "0,0"]);
    assert_eq!(stdout(&o), "7\n");
    let o = spq(&["cv", "--input", &fixture("fig1.json"), "--node", "v0", "--char", "0,0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"][0]["constants"][0]["value"], "2");
    assert_eq!(v["nodes"][0]["constants"][0]["routeB"], "2");
    let o = spq(&["hilbert", "--input", &fixture("fig1.json"), "--node", "v0", "--char", "0,0", "--max-degree", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(t^24 - t^21 + t^18 - t^15 + 3t^12 - t^9 + t^6 - t^3 + 1) / (t^15 - t^12 - t^3 + 1)"));
}

#[test]
fn fundamental_cycle_and_invariants() {
    let o = spq(&["fundamental-cycle", "--input", &fixture("fig1.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["arithmeticGenus"], 4);
    let o = spq(&["invariants", "--input", &fixture("fig1.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["group"]["order"], 36);
    assert_eq!(v["canonical"]["numericallyGorenstein"], true);
    let o = spq(&["pg", "--input", &fixture("d4.dsl"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pg"], 0);
    assert_eq!(v["artinRational"], true);
}
