use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibrecurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_lines(out: &Output) -> usize {
    String::from_utf8_lossy(&out.stderr).lines().count()
}

#[test]
fn count_q17_pair() {
    let out = run(&["count", "--field", "17", "--poly", "1,15,16,1,1", "--poly", "15,0,16,13,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["N"], 48);
    assert_eq!(v["genus"], 5);
    assert_eq!(v["hws"], 58);
    let a: Vec<i64> = v["subsets"].as_array().unwrap().iter().map(|s| s["A"].as_i64().unwrap()).collect();
    assert_eq!(a, [-8, -6, -16]);
}

#[test]
fn count_conic() {
    let v = json(&run(&["count", "--field", "5", "--poly", "0,1"]));
    assert_eq!(v["genus"], 0);
    assert_eq!(v["N"], 6);
}

#[test]
fn count_extension_field_coordinates() {
    let out = run(&["count", "--field", "5^2:1,1,1", "--poly", "0,[0,1],1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["polys"][0][1], serde_json::json!([0, 1]));
}

#[test]
fn error_paths_have_codes_and_one_line() {
    for (args, code) in [
        (vec!["count", "--field", "4", "--poly", "0,1"], 2),
        (vec!["count", "--field", "5", "--poly", "1,x"], 2),
        (vec!["count", "--field", "5", "--poly", "1,3,1"], 3),
        (vec!["count", "--field", "5", "--poly", "3"], 3),
        (vec!["count", "--field", "5"], 2),
        (vec!["bound", "--q", "12", "--genus", "1"], 2),
        (vec!["search", "--field", "5", "--degrees", "3,3", "--strategy", "sideways"], 2),
        (vec!["search", "--field", "97", "--degrees", "4,4", "--strategy", "exhaustive"], 3),
        (vec!["verify-paper", "--fixtures", "/nonexistent/fixtures.toml"], 2),
        (vec!["nonsense"], 2),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert_eq!(stderr_lines(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn bound_examples() {
    for (q, g, want) in [("17", "5", "58"), ("17", "0", "18"), ("25", "5", "76"), ("5^2", "5", "76")] {
        let out = run(&["bound", "--q", q, "--genus", g]);
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), want);
    }
}

#[test]
fn verify_paper_reports_every_row() {
    let out = run(&["verify-paper"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("PASS g5-q17")));
    for label in ["g5-q79", "g5-q89", "g7-q29"] {
        assert!(text.lines().any(|l| l.starts_with("DISCREPANT") && l.contains(label)));
    }
    // Rows whose printed polynomials do not give the printed values.
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_lines(&out), 1);
}

#[test]
fn verify_paper_custom_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.toml");
    std::fs::write(
        &path,
        "[[row]]\nlabel = \"a\"\nfield = \"17\"\ngenus = 5\nf1 = \"1,15,16,1,1\"\nf2 = \"15,0,16,13,1\"\na = [-8, -6, -16]\nn = 48\nconsistent = true\n\n\
         [[row]]\nlabel = \"b\"\nfield = \"17\"\ngenus = 5\nf1 = \"1,15,16,1,1\"\nf2 = \"15,0,16,13,1\"\na = [-8, -6, -16]\nn = 50\nconsistent = false\n",
    )
    .unwrap();
    let out = run(&["verify-paper", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify-paper", "--fixtures", path.to_str().unwrap(), "--json"]);
    let v = json(&out);
    assert_eq!(v["rows"][1]["outcome"], "discrepant");

    std::fs::write(&path, "[[row]]\nlabel = 3\n").unwrap();
    assert_eq!(run(&["verify-paper", "--fixtures", path.to_str().unwrap()]).status.code(), Some(2));
}

fn search_lines(args: &[&str]) -> (Vec<Value>, Output) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (lines, out)
}

#[test]
fn search_is_deterministic_and_sorted() {
    let args = ["search", "--field", "5", "--degrees", "3,3", "--strategy", "exhaustive"];
    let (lines, first) = search_lines(&args);
    let (_, second) = search_lines(&args);
    assert_eq!(first.stdout, second.stdout);
    let entries = &lines[..lines.len() - 1];
    assert_eq!(entries.len(), 10);
    let ns: Vec<u64> = entries.iter().map(|e| e["N"].as_u64().unwrap()).collect();
    assert!(ns.windows(2).all(|w| w[0] >= w[1]));
    assert!(entries.iter().all(|e| e["N"].as_u64() <= e["hws"].as_u64()));
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["space_size"], 9375);

    let seeded = ["search", "--field", "11", "--degrees", "4,3", "--budget", "5000", "--seed", "9", "--strategy", "hill-climb"];
    assert_eq!(run(&seeded).stdout, run(&seeded).stdout);
}

#[test]
fn search_config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"field": "7", "degrees": [2, 3], "strategy": "random", "budget": 3000, "seed": 4, "top": 5}"#).unwrap();
    let a = run(&["search", "--config", path.to_str().unwrap()]);
    let b = run(&["search", "--field", "7", "--degrees", "2,3", "--budget", "3000", "--seed", "4", "--top", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = run(&["search", "--config", path.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn search_records_mark_improvements() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    std::fs::write(&path, "g,q,lower,upper,source\n4,5,10,22,test\n").unwrap();
    let (lines, _) = search_lines(&[
        "search", "--field", "5", "--degrees", "3,3", "--strategy", "exhaustive", "--records",
        path.to_str().unwrap(),
    ]);
    for e in &lines[..lines.len() - 1] {
        assert_eq!(e["known_lower"], 10);
        assert_eq!(e["known_upper"], 22);
        assert_eq!(e["improved"], e["N"].as_u64().unwrap() > 10);
    }
    std::fs::write(&path, "g,q,lower,upper,source\n4,5,x,22,test\n").unwrap();
    let out = run(&["search", "--field", "5", "--degrees", "3,3", "--records", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn probe_reports_positive_rate() {
    let out = run(&["probe", "--field", "5^2", "--degrees", "4,4", "--budget", "2000"]);
    assert!(json(&out)["rate"].as_f64().unwrap() > 0.0);
}
