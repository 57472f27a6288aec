use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn grammar(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/grammars").join(name)
}

fn mgforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgforge"))
        .args(args)
        .env_remove("MGFORGE_MAX_ITEMS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn copy_to(dir: &Path, name: &str, as_name: &str) -> PathBuf {
    let p = dir.join(as_name);
    std::fs::copy(grammar(name), &p).unwrap();
    p
}

#[test]
fn verify_peter_eats_is_equal() {
    let o = mgforge(&["verify", grammar("peter_eats_right_free.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUAL (1 string)"));
}

#[test]
fn verify_sour_apple_reports_witness() {
    let o = mgforge(&["verify", grammar("sour_apple_restricted.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("witness: applesour_"));
}

#[test]
fn verify_json_has_verdict() {
    let o = mgforge(&["verify", "--json", grammar("units_tens.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "equal");
    assert_eq!(v["cfg_strings"], 24);
}

#[test]
fn compile_writes_lexicon_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = copy_to(dir.path(), "units_tens.cfg", "numerals.cfg");
    let o = mgforge(&["compile", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mg = dir.path().join("numerals.mg");
    assert!(std::fs::read_to_string(&mg).unwrap().contains("vier :: C1 -zi -zeh -un"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("numerals.report.json")).unwrap()).unwrap();
    assert_eq!(report["items"]["remove_adapter"], 3);

    let o = mgforge(&["derive", mg.to_str().unwrap(), "--target", "vierundzwanzig"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "merge-1 ⟨vierundzwanzig : CFin⟩");
    assert_eq!(lines[2], "  move-1 ⟨vierundzwanzig : C2⟩");
    assert_eq!(lines.last().unwrap().trim(), "lex ⟨vier :: C1, -zi, -zeh, -un⟩");

    let o = mgforge(&["verify", g.to_str().unwrap(), "--lexicon", mg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn provenance_mismatch_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = copy_to(dir.path(), "units_tens.cfg", "numerals.cfg");
    mgforge(&["compile", g.to_str().unwrap()]);
    let mg = dir.path().join("numerals.mg");
    let other = grammar("peter_eats_right_free.cfg");
    let o = mgforge(&["verify", other.to_str().unwrap(), "--lexicon", mg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn json_lexicon_enumerates_the_same_language() {
    let dir = tempfile::tempdir().unwrap();
    let g = copy_to(dir.path(), "german_numerals.cfg", "de.cfg");
    let text = dir.path().join("de.mg");
    let json = dir.path().join("de.json");
    mgforge(&["compile", g.to_str().unwrap()]);
    mgforge(&["compile", g.to_str().unwrap(), "-o", json.to_str().unwrap()]);
    let a = mgforge(&["enumerate", text.to_str().unwrap()]);
    let b = mgforge(&["enumerate", json.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 99);
}

#[test]
fn enumerate_streams_shortest_first() {
    let o = mgforge(&["enumerate", grammar("units_tens.cfg").to_str().unwrap(), "--max-len", "8"]);
    let text = stdout(&o);
    let lens: Vec<usize> = text.lines().map(|l| l.chars().count()).collect();
    assert!(lens.windows(2).all(|w| w[0] <= w[1]));
    assert!(lens.iter().all(|&n| n <= 8));
    assert_eq!(text.lines().next(), Some("acht"));
}

#[test]
fn enumerate_json_lines() {
    let o = mgforge(&["enumerate", "--json", grammar("peter_eats_two_handed.cfg").to_str().unwrap()]);
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l["tree"]["op"] == "merge-1"));
}

#[test]
fn derive_reports_missing_strings() {
    let o = mgforge(&["derive", grammar("units_tens.cfg").to_str().unwrap(), "--target", "einszehn"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not derivable within bounds");
}

#[test]
fn item_budget_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mgforge"))
        .args(["verify", grammar("german_numerals.cfg").to_str().unwrap()])
        .env("MGFORGE_MAX_ITEMS", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("INCOMPLETE"));
}

#[test]
fn stats_output() {
    let o = mgforge(&["stats", "--json", grammar("units_tens.cfg").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["remove_adapter"].as_u64(), v["select_adapter"].as_u64()), (Some(3), Some(2)));
}

#[test]
fn usage_and_file_errors() {
    assert_eq!(mgforge(&[]).status.code(), Some(64));
    assert_eq!(mgforge(&["enumerate", "x.mg", "--max-len", "0"]).status.code(), Some(64));
    assert_eq!(mgforge(&["stats", "/nonexistent/x.mg"]).status.code(), Some(66));
    assert_eq!(mgforge(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_grammar_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.cfg");
    std::fs::write(&g, "S => x # C\n").unwrap();
    let o = mgforge(&["verify", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn exit_status_is_stable() {
    let g = grammar("sour_apple_restricted.cfg");
    let a = mgforge(&["verify", "--json", g.to_str().unwrap()]);
    let b = mgforge(&["verify", "--json", g.to_str().unwrap()]);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
}
