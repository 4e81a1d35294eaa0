use std::path::PathBuf;

use prym_atlas::cli::run;
use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str], env: Option<&str>) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["prym-atlas"];
    full.extend_from_slice(args);
    let code = run(full, env, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn datum(dir: &TempDir, name: &str, json: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

const PICARD: &str = r#"{"N": 3, "rows": [[1, 1, 2, 2]], "H": [[1]]}"#;

#[test]
fn analyze_picard() {
    let dir = TempDir::new().unwrap();
    let input = datum(&dir, "picard.json", PICARD);
    let r = call(&["analyze", "--input", &input], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["classification"]["verdict"], "SPECIAL_PEL");
    assert_eq!(v["prym_dimension"], 2);
    assert_eq!(v["polarization"], serde_json::json!([3, 3]));
    assert_eq!(v["classification"]["dim_P_G"], 1);
}

#[test]
fn analyze_hyperelliptic_six_points() {
    let dir = TempDir::new().unwrap();
    let input = datum(
        &dir,
        "h6.json",
        r#"{"N": 2, "rows": [[1,1,1,1,1,1]], "H": [[1]]}"#,
    );
    let r = call(&["analyze", "--input", &input, "--format", "csv"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].contains(",3,"));
    assert!(lines[1].contains("SPECIAL_PEL"));
}

#[test]
fn analyze_with_prime_adds_char_p() {
    let dir = TempDir::new().unwrap();
    let input = datum(&dir, "picard.json", PICARD);
    let r = call(&["analyze", "--input", &input, "--prime", "auto"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["char_p"]["prime"], 7);
    assert_eq!(v["char_p"]["ordinary_point"]["status"], "found");
}

#[test]
fn analyze_exit_codes() {
    let dir = TempDir::new().unwrap();
    let zero_col = datum(
        &dir,
        "z.json",
        r#"{"N": 4, "rows": [[1, 1, 2, 0]], "H": [[1]]}"#,
    );
    let r = call(&["analyze", "--input", &zero_col], None);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("violation zero-column"));

    let bad = datum(&dir, "bad.json", "{\"N\": 3, \"rows\": ");
    assert_eq!(call(&["analyze", "--input", &bad], None).code, 3);

    let reducible = datum(
        &dir,
        "r.json",
        r#"{"N": 2, "rows": [[1,1,0,0],[1,1,0,0]], "H": [[1,0]]}"#,
    );
    // a repeated row is caught as a zero column first or as reducibility
    assert_eq!(call(&["analyze", "--input", &reducible], None).code, 2);

    let outside = datum(
        &dir,
        "o.json",
        r#"{"N": 4, "rows": [[2, 2, 2, 2]], "H": [[1]]}"#,
    );
    assert_eq!(call(&["analyze", "--input", &outside], None).code, 2);

    let trivial = datum(
        &dir,
        "t.json",
        r#"{"N": 3, "rows": [[1, 1, 2, 2]], "H": []}"#,
    );
    assert_eq!(call(&["analyze", "--input", &trivial], None).code, 2);
    assert_eq!(
        call(&["analyze", "--input", &trivial, "--allow-trivial-H"], None).code,
        0
    );

    assert_eq!(
        call(&["analyze", "--input", "/nonexistent/x.json"], None).code,
        3
    );
    assert_eq!(call(&["analyze"], None).code, 2);
}

#[test]
fn verify_reports_pairs() {
    let dir = TempDir::new().unwrap();
    let input = datum(
        &dir,
        "z5.json",
        r#"{"N": 5, "rows": [[1, 2, 3, 4]], "H": [[1]]}"#,
    );
    let r = call(&["verify", "--input", &input], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["prime"], 11);
    let checks = v["product_identity"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["identity_holds"], false);
    assert!(checks[0]["left_terms"].as_u64().unwrap() > 0);

    let bad_prime = call(&["verify", "--input", &input, "--prime", "13"], None);
    assert_eq!(bad_prime.code, 3);
    assert_eq!(
        call(&["verify", "--input", &input, "--prime", "21"], None).code,
        3
    );
}

#[test]
fn verify_without_eligible_pairs() {
    let dir = TempDir::new().unwrap();
    let input = datum(
        &dir,
        "e.json",
        r#"{"N": 2, "rows": [[1, 1, 1, 1]], "H": [[1]]}"#,
    );
    let r = call(&["verify", "--input", &input, "--prime", "5"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("no eligible pairs")));
}

#[test]
fn hw_dump_e2() {
    let dir = TempDir::new().unwrap();
    let input = datum(
        &dir,
        "e.json",
        r#"{"N": 2, "rows": [[1, 1, 1, 1]], "H": [[1]]}"#,
    );
    let r = call(
        &["hw-dump", "--input", &input, "--char", "1", "--prime", "3"],
        None,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let expected = "p=3 s=4 char=1 i=1 j=1\n\
                    1 0 0 1 1\n1 0 1 0 1\n1 0 1 1 0\n1 1 0 0 1\n1 1 0 1 0\n1 1 1 0 0\n";
    assert_eq!(r.stdout, expected);
    let again = call(
        &["hw-dump", "--input", &input, "--char", "1", "--prime", "3"],
        None,
    );
    assert_eq!(again.stdout, r.stdout);
}

#[test]
fn hw_dump_blocks_and_errors() {
    let dir = TempDir::new().unwrap();
    let input = datum(
        &dir,
        "h6.json",
        r#"{"N": 2, "rows": [[1,1,1,1,1,1]], "H": [[1]]}"#,
    );
    let r = call(&["hw-dump", "--input", &input, "--char", "1"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("p=")).count(), 4);

    assert_eq!(
        call(&["hw-dump", "--input", &input, "--char", "0"], None).code,
        2
    );
    assert_eq!(
        call(&["hw-dump", "--input", &input, "--char", "1,1"], None).code,
        2
    );
    let capped = call(
        &["hw-dump", "--input", &input, "--char", "1"],
        Some("max_poly_terms=3"),
    );
    assert_eq!(capped.code, 4);
}

#[test]
fn search_contains_picard_row() {
    let r = call(
        &[
            "search", "--N", "2..3", "--m", "1", "--s", "4", "--format", "csv",
        ],
        None,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next().unwrap(), prym_atlas::report::CSV_HEADER);
    assert!(r
        .stdout
        .lines()
        .any(|l| l.starts_with("3,1,4,") && l.contains("SPECIAL_PEL")));
    assert!(r.stdout.lines().any(|l| l.starts_with("# total ")));
}

#[test]
fn search_z5_verdicts() {
    let r = call(&["search", "--N", "5", "--s", "4", "--format", "csv"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<&str> = r
        .stdout
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert!(!rows.is_empty());
    for row in rows {
        let verdict = row.split(',').nth(10).unwrap();
        assert!(
            verdict == "SPECIAL_PEL" || verdict == "NOT_SPECIAL_S4",
            "{row}"
        );
    }
}

#[test]
fn search_empty_range_is_header_only() {
    let r = call(
        &["search", "--N", "3..2", "--s", "4", "--format", "csv"],
        None,
    );
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, format!("{}\n", prym_atlas::report::CSV_HEADER));
}

#[test]
fn search_json_lines_end_with_summary() {
    let r = call(&["search", "--N", "3", "--s", "4"], None);
    assert_eq!(r.code, 0);
    let lines: Vec<Value> = r
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["total"].as_u64().unwrap() as usize, lines.len() - 1);
}

#[test]
fn search_cap_gives_partial_output() {
    let r = call(
        &[
            "search",
            "--N",
            "2..5",
            "--s",
            "4",
            "--format",
            "csv",
            "--max-count",
            "3",
        ],
        None,
    );
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("partial"));
    assert!(r.stdout.contains("# total 3"));

    // environment value applies without the flag, and the flag wins over it
    let env = Some("max_count=2");
    assert!(call(
        &["search", "--N", "2..5", "--s", "4", "--format", "csv"],
        env
    )
    .stdout
    .contains("# total 2"));
    let both = call(
        &[
            "search",
            "--N",
            "2..5",
            "--s",
            "4",
            "--format",
            "csv",
            "--max-count",
            "1",
        ],
        env,
    );
    assert!(both.stdout.contains("# total 1"));
    assert_eq!(
        call(&["search", "--N", "2", "--s", "4"], Some("max_count=zero")).code,
        2
    );
}

#[test]
fn search_is_deterministic_and_writes_files() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let r = call(
            &[
                "search",
                "--N",
                "2..4",
                "--s",
                "4..5",
                "--format",
                "csv",
                "--out",
                path.to_str().unwrap(),
            ],
            None,
        );
        assert_eq!(r.code, 0);
        assert!(r.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn help_exits_zero() {
    let r = call(&["--help"], None);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("hw-dump"));
}
