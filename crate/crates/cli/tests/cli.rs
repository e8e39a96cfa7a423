use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use riskman::fixture::{extension_variant, mutations, fixture_infusion_pump, EXTENSION_AXIOMS_DSL, EXTENSION_SHAPES_DSL};
use riskman::ingest::write_ntriples;
use riskman::pipeline::parse_report_json;
use riskman::Namespaces;
use tempfile::TempDir;

fn riskman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riskman")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fixture_dir() -> (TempDir, Vec<PathBuf>) {
    let dir = TempDir::new().unwrap();
    let out = riskman(&["fixture", "-o", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let files = ["nt", "ttl", "html"].iter().map(|e| dir.path().join(format!("infusion-pump.{e}"))).collect();
    (dir, files)
}

#[test]
fn fixture_conforms_in_every_format() {
    let (_dir, files) = fixture_dir();
    for f in &files {
        let out = riskman(&["validate", s(f)]);
        assert_eq!(out.status.code(), Some(0), "{}: {}{}", f.display(), stdout(&out), stderr(&out));
        assert!(stdout(&out).contains("result: CONFORMS"));
    }
}

#[test]
fn json_reports_are_byte_identical_with_deterministic() {
    let (_dir, files) = fixture_dir();
    let args = ["validate", s(&files[1]), "--report", "json", "--deterministic"];
    let (a, b) = (riskman(&args), riskman(&args));
    assert_eq!(a.stdout, b.stdout);
    let report = parse_report_json(&stdout(&a)).unwrap();
    assert!(report.conforms && !report.inconsistent);
    assert_eq!(report.stats.elapsed_ms, 0);
}

#[test]
fn mutations_give_the_documented_exit_codes() {
    let ns = Namespaces::default();
    let dir = TempDir::new().unwrap();
    let base = fixture_infusion_pump(&ns).submission;
    for m in mutations(&ns) {
        let path = dir.path().join(format!("{}.nt", m.name));
        std::fs::write(&path, write_ntriples(&m.apply(&base))).unwrap();
        let out = riskman(&["validate", s(&path), "--report", "json"]);
        let report = parse_report_json(&stdout(&out)).unwrap();
        let expected = if m.name == "component-is-hazard" { 3 } else { 1 };
        assert_eq!(out.status.code(), Some(expected), "{}", m.name);
        assert_eq!(report.inconsistent, expected == 3, "{}", m.name);
    }
}

#[test]
fn extension_files_add_a_constraint() {
    let ns = Namespaces::default();
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("variant.nt");
    let axioms = dir.path().join("critical.axioms");
    let shapes = dir.path().join("critical.shapes");
    std::fs::write(&input, write_ntriples(&extension_variant(&ns))).unwrap();
    std::fs::write(&axioms, EXTENSION_AXIOMS_DSL).unwrap();
    std::fs::write(&shapes, EXTENSION_SHAPES_DSL).unwrap();
    let out = riskman(&[
        "validate", s(&input), "--ontology-extra", s(&axioms), "--shapes-extra", s(&shapes), "--report", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = parse_report_json(&stdout(&out)).unwrap();
    let ext: Vec<&str> =
        report.violations.iter().filter(|v| v.constraint.starts_with('E')).map(|v| v.focus.as_str()).collect();
    assert_eq!(ext, ["https://example.org/infusion-pump#cr"]);
}

#[test]
fn materialize_writes_closure_and_provenance() {
    let (dir, files) = fixture_dir();
    let closure = dir.path().join("closure.nt");
    let prov = dir.path().join("prov.tsv");
    let out = riskman(&["materialize", s(&files[0]), "-o", s(&closure), "--emit-provenance", s(&prov)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let closure = std::fs::read_to_string(closure).unwrap();
    assert!(closure.contains(
        "<https://example.org/infusion-pump#irl> <https://w3id.org/riskman/ontology#hasProbability> <https://w3id.org/riskman/ps#p4> ."
    ));
    let prov = std::fs::read_to_string(prov).unwrap();
    assert_eq!(prov.lines().count(), 50);
    assert!(prov.lines().all(|l| l.split('\t').count() == 3));
}

#[test]
fn ps_gen_writes_axioms_and_abox() {
    let dir = TempDir::new().unwrap();
    let out_file = dir.path().join("ps.axioms");
    let out = riskman(&["ps-gen", "--pi", "3", "--sigma", "2", "-o", s(&out_file)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let dsl = std::fs::read_to_string(&out_file).unwrap();
    assert_eq!(dsl.lines().filter(|l| l.starts_with("(gci")).count(), 9);
    let abox = std::fs::read_to_string(dir.path().join("ps.axioms.nt")).unwrap();
    assert!(abox.contains("<https://w3id.org/riskman/ps#p3> <https://w3id.org/riskman/ontology#gt> <https://w3id.org/riskman/ps#p2> ."));

    // generated PS(5, 5) files can stand in for the built-in default
    let default = dir.path().join("ps55.axioms");
    assert_eq!(riskman(&["ps-gen", "-o", s(&default)]).status.code(), Some(0));
    let (_fx, files) = fixture_dir();
    let out = riskman(&[
        "validate", s(&files[0]), s(&dir.path().join("ps55.axioms.nt")), "--no-ps", "--ontology-extra", s(&default),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
}

#[test]
fn distill_extracts_the_submission() {
    let (dir, files) = fixture_dir();
    let nt = dir.path().join("distilled.nt");
    let out = riskman(&["distill", s(&files[2]), "-o", s(&nt)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = riskman(&["validate", s(&nt)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let out = riskman(&["validate", s(&dir.path().join("missing.nt"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing.nt"));

    let bad = dir.path().join("bad.ttl");
    std::fs::write(&bad, "@prefix ex: <https://example.org/> .\nex:a ex:b .\n").unwrap();
    let out = riskman(&["validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.ttl"), "{}", stderr(&out));

    let out = riskman(&["validate"]);
    assert_eq!(out.status.code(), Some(2));

    let out = riskman(&["ps-gen", "-o", s(&dir.path().join("ps.nt"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_limits_have_their_own_message() {
    let (_dir, files) = fixture_dir();
    let out = riskman(&["validate", s(&files[0]), "--max-assertions", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("resource limit exceeded"), "{}", stderr(&out));
}

#[test]
fn assume_risk_sda_keeps_the_fixture_conforming() {
    let (_dir, files) = fixture_dir();
    let out = riskman(&["validate", s(&files[0]), "--assume-risk-sda", "--sequential"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
