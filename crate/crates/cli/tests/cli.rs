use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossratio")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn single_check_passes() {
    let o = run(&["verify", "--only", "chow.todd"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS  chow.todd"));
}

#[test]
fn json_lines_follow_the_schema() {
    let o = run(&["verify", "--only", "chow.printed_signs", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    for key in ["id", "description", "expected", "computed", "provenance", "status", "ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["status"], "flagged-discrepancy");
    assert_eq!(v["computed"], "-165, -60");
}

#[test]
fn text_output_is_repeatable() {
    let a = run(&["verify", "--only", "gram.rank_b2", "--explain"]);
    let b = run(&["verify", "--only", "gram.rank_b2", "--explain"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "--only", "no.such.check"]).status.code(), Some(2));
    assert_eq!(run(&["chow", "--ring", "nope", "--eval", "1"]).status.code(), Some(2));
    assert_eq!(run(&["chow", "--ring", "inv", "--eval", "B^"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn chow_eval() {
    assert_eq!(stdout(&run(&["chow", "--ring", "inv", "--eval", "((B+3C)/4)^4"])).trim(), "27");
    assert_eq!(stdout(&run(&["chow", "--ring", "b0", "--eval", "Bb^2Cb"])).trim(), "180");
    assert_eq!(stdout(&run(&["chow", "--ring", "cusp", "--eval", "N^3"])).trim(), "-6");
    assert_eq!(stdout(&run(&["chow", "--ring", "t0", "--eval", "Bti + 3Ct"])).trim(), "12*Hw - 6*Bte");
}

#[test]
fn riemann_roch_table() {
    let out = stdout(&run(&["riemann-roch", "--n-range", "0..2"]));
    let rows: Vec<&str> = out.lines().skip(1).map(str::trim).collect();
    assert_eq!(rows, ["0  1", "1  10", "2  55"]);
}

#[test]
fn tritangent_table_has_45_rows() {
    let out = stdout(&run(&["tables", "--which", "td"]));
    assert_eq!(out.lines().count(), 46);
}

#[test]
fn gram_dump() {
    let path = std::env::temp_dir().join(format!("crossratio-b2-{}.csv", std::process::id()));
    let o = run(&["gram", "--which", "b2", "--dump-matrix", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("21"));
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let rows: Vec<Vec<i64>> = csv.lines().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 36);
    assert!((0..36).all(|i| rows[i][i] == -3 && rows[i].len() == 36));
}

#[test]
fn ledger_trace() {
    let out = stdout(&run(&["ledger", "--trace"]));
    assert!(out.lines().any(|l| l.starts_with("contraction") && l.contains("[1, 61, 147, 61, 1] euler 271")), "{out}");
}

#[test]
fn fan_star() {
    let out = stdout(&run(&["fan", "--star", "e1"]));
    assert!(out.contains("14 rays"), "{out}");
    assert_eq!(run(&["fan", "--star", "e9"]).status.code(), Some(2));
}
