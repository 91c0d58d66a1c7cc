use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.aut"))
}

fn foidx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foidx")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_accepts_examples() {
    for name in ["three_letter", "four_letter", "fibonacci", "six_letter", "fourteen_letter"] {
        let o = foidx(&["check", path(&fixture(name))]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).contains("OK"));
    }
}

#[test]
fn check_reports_missing_inverse() {
    let o = foidx(&["check", path(&fixture("missing_inverse"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("inverse"), "{}", stdout(&o));
}

#[test]
fn check_reports_non_primitive() {
    let o = foidx(&["check", path(&fixture("not_primitive"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("primitive"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.aut");
    std::fs::write(&file, "letters: a b\nmap a = a b\nmap b = a ?\n").unwrap();
    let o = foidx(&["index", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains('3'));
}

#[test]
fn missing_file_is_a_validation_failure() {
    let o = foidx(&["check", "/nonexistent/x.aut"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn index_of_examples() {
    let o = foidx(&["index", path(&fixture("three_letter"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("2"));
    let o = foidx(&["index", "--early-exit", path(&fixture("four_letter"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("3"));
    assert!(stdout(&o).contains("complete true"));
}

#[test]
fn fibonacci_full_sweep() {
    let o = foidx(&["index", path(&fixture("fibonacci"))]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(["0", "1/2", "1"].contains(&first.as_str()));
}

#[test]
fn truncated_sweep_exits_with_two() {
    let o = foidx(&["index", "--max-k", "1", path(&fixture("three_letter"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("INCOMPLETE (k reached 1 of 8)"));
    let o = foidx(&["index", "--budget", "10000", path(&fixture("six_letter"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("INCOMPLETE"));
}

#[test]
fn budget_floor_is_enforced() {
    let o = foidx(&["index", "--budget", "10", path(&fixture("three_letter"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn report_writes_stable_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let json = dir.path().join(format!("r{run}.json"));
        let dot = dir.path().join(format!("r{run}.dot"));
        let o = foidx(&["report", path(&fixture("four_letter")), "--json", path(&json), "--dot", path(&dot)]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push((std::fs::read(&json).unwrap(), std::fs::read(&dot).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let report: serde_json::Value = serde_json::from_slice(&outputs[0].0).unwrap();
    assert_eq!(report["singularities"].as_array().unwrap().len(), 6);
    assert_eq!(report["components"].as_array().unwrap().len(), 1);
    assert_eq!(report["components"][0]["rank"], 1);
    assert_eq!(report["fo_index"], "3");
}

#[test]
fn dot_has_two_components_for_three_letters() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let o = foidx(&["report", path(&fixture("three_letter")), "--dot", path(&dot)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    let finite: Vec<&str> = text.lines().filter(|l| l.contains("S") && l.contains("->") && !l.contains("dashed")).collect();
    assert_eq!(finite.len(), 1, "{text}");
    assert!(stdout(&o).contains("component 1"));
    assert!(!stdout(&o).contains("component 2"));
}

#[test]
fn verify_passes_on_examples() {
    for name in ["three_letter", "four_letter", "fibonacci", "family_3"] {
        let o = foidx(&["verify", path(&fixture(name))]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
        assert!(stdout(&o).contains("PASS basis words fixed"));
    }
}
