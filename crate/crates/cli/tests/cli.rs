use std::process::{Command, Output};

use invsum_cli::parse_json;

fn invsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_sweep_exits_zero() {
    let o = invsum(&["sweep", "--theorem", "thm-1.1", "--sequence", "step", "--n", "1", "--primes", "5..7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2 reports, 2 passed, 0 failed"), "{text}");
}

#[test]
fn failing_cell_exits_one() {
    let o = invsum(&["verify", "--theorem", "thm-3.2", "--c=-3", "--n", "1", "--p", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let reports = parse_json(&stdout(&o)).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(!reports[0].pass);
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(invsum(&["sweep", "--theorem", "thm-1.1", "--primes", "8..10"]).status.code(), Some(2));
    assert_eq!(invsum(&["sweep", "--theorem", "thm-9.9"]).status.code(), Some(2));
    assert_eq!(invsum(&["sweep"]).status.code(), Some(2));
    assert_eq!(invsum(&["verify", "--theorem", "thm-1.1", "--n", "1", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn json_sweep_round_trips() {
    let o = invsum(&[
        "sweep", "--theorem", "all", "--sequence", "step,lucas", "--n", "1..3", "--primes", "5..13",
        "--m", "0..2", "--format", "json", "--jobs", "3",
    ]);
    let text = stdout(&o);
    let (array, meta) = text.rsplit_once("\n{").expect("trailing metadata object");
    let reports = parse_json(array).unwrap();
    assert!(!reports.is_empty());
    let again = invsum_cli::emit_report(&reports, invsum_cli::Format::Json);
    assert_eq!(String::from_utf8(again).unwrap().trim_end(), array.trim_end());
    let meta: serde_json::Value = serde_json::from_str(&format!("{{{meta}")).unwrap();
    assert_eq!(meta["summary"]["reports"], reports.len().to_string());
    assert!(meta["summary"]["skipped"]["even_depth"].is_string());
}

#[test]
fn all_cells_skipped_gives_empty_outputs() {
    let args = ["sweep", "--theorem", "thm-1.1", "--n", "2", "--primes", "5..7", "--format"];
    let json = invsum(&[&args[..], &["json"]].concat());
    assert_eq!(json.status.code(), Some(0));
    assert!(stdout(&json).starts_with("[]\n"));
    let csv = invsum(&[&args[..], &["csv"]].concat());
    assert_eq!(stdout(&csv).lines().count(), 1);
}

#[test]
fn classify_and_transform() {
    let o = invsum(&["classify", "--sequence", "lucas,step"]);
    assert_eq!(stdout(&o), "lucas  plus\nstep   minus\n");
    let o = invsum(&["transform", "--sequence", "lucas", "--horizon", "4"]);
    assert_eq!(stdout(&o), "a    = [2, 1, 3, 4]\nT(a) = [2, 1, 3, 4]\n");
}

#[test]
fn matrix_prints_both_forms() {
    let o = invsum(&["matrix", "--rows", "2", "--cols", "4"]);
    assert_eq!(stdout(&o), "  1  -1   1  -1\n  3  -3   9 -15\n\n 1 -1  1 -1\n 0  0  1 -2\n");
}
