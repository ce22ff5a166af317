use std::process::{Command, Output};

use hyperbolic_hardy::cli::{execute, Cli, Report, Run};

use clap::Parser;

const BIN: &str = env!("CARGO_BIN_EXE_hyperbolic-hardy");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("HYPERBOLIC_HARDY_OUTPUT_DIR")
        .output()
        .expect("spawn binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn parse_run(o: &Output) -> Run {
    serde_json::from_slice(&o.stdout).expect("json run")
}

fn constant(run: &Run, name: &str) -> (String, String) {
    let v: serde_json::Value = serde_json::to_value(run).unwrap();
    let table = &v["reports"][0];
    let entry = if let Some(e) = table.get(name) {
        e.clone()
    } else if let Some(e) = table["aux"].get(name) {
        e.clone()
    } else {
        table["chain"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .map(|c| c["value"].clone())
            .unwrap_or_else(|| panic!("no constant {name}"))
    };
    (
        entry["num"].as_str().unwrap().to_string(),
        entry["den"].as_str().unwrap().to_string(),
    )
}

#[test]
fn constants_second_order() {
    let o = run(&["constants", "--k", "2", "--l", "0", "--N", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_run(&o);
    assert_eq!(constant(&r, "c1"), ("2".into(), "1".into()));
    assert_eq!(constant(&r, "poincare"), ("16".into(), "1".into()));

    let t = run(&[
        "constants",
        "--k",
        "2",
        "--l",
        "0",
        "--N",
        "5",
        "--format",
        "text",
    ]);
    assert!(stdout(&t).lines().any(|l| l.trim() == "c1 = 2"));
}

#[test]
fn constants_first_order() {
    let o = run(&["constants", "--k", "1", "--l", "0", "--N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = parse_run(&o);
    assert_eq!(constant(&r, "poincare"), ("1".into(), "1".into()));
    assert_eq!(constant(&r, "hardy"), ("1".into(), "4".into()));
}

#[test]
fn constants_hypothesis_gate() {
    let o = run(&["constants", "--k", "2", "--l", "1", "--N", "4"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("requires N > 4"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_thm21_standard() {
    let o = run(&[
        "verify", "--case", "thm21", "--N", "5", "--suite", "standard",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_run(&o);
    assert_eq!(
        r.suite_version.as_deref(),
        Some(hyperbolic_hardy::suite::version())
    );
    assert_eq!(r.reports.len(), 20);
    assert_eq!(r.summary.passed, 20);
    for rep in &r.reports {
        let Report::Margin(m) = rep else {
            panic!("expected margin report")
        };
        assert_eq!(m.case, "thm21");
        assert_eq!(m.n, 5);
        assert!(m.verdict.passed());
    }
}

#[test]
fn verify_hardy1d() {
    let o = run(&["verify", "--case", "hardy1d", "--suite", "standard"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(parse_run(&o).reports.len(), 60);
}

#[test]
fn verify_forced_failure() {
    let o = run(&["verify", "--case", "thm21", "--N", "5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(parse_run(&o).summary.failed > 0);
}

#[test]
fn verify_several_dimensions_and_general() {
    let o = run(&[
        "verify", "--case", "rellich", "--N", "5", "6", "--suite", "smoke",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(parse_run(&o).reports.len(), 8);

    let o = run(&[
        "verify", "--case", "general", "--k", "3", "--l", "1", "--suite", "smoke",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_run(&o);
    let Report::Margin(m) = &r.reports[0] else {
        panic!()
    };
    assert_eq!(m.n, 7);

    let o = run(&["verify", "--case", "general", "--suite", "smoke"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("--k"));
}

#[test]
fn yang_outside_range_is_rejected() {
    let o = run(&["verify", "--case", "yang", "--beta", "2", "--N", "6"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("requires"));
}

#[test]
fn identity_ph1() {
    let o = run(&["identity", "--which", "ph1", "--N", "5", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.starts_with("max residual"))
        .expect("max residual line");
    let value: f64 = line
        .trim_start_matches("max residual")
        .trim()
        .parse()
        .unwrap();
    assert!(value < 1e-10, "{line}");
}

#[test]
fn identity_estimates_carry_mode() {
    let o = run(&[
        "identity",
        "--which",
        "estimate1",
        "--n",
        "2",
        "--N",
        "7",
        "--suite",
        "smoke",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for rep in parse_run(&o).reports {
        let Report::Identity(r) = rep else { panic!() };
        assert_eq!(r.mode, Some(2));
        assert_eq!(r.n, 7);
    }
}

#[test]
fn sharpness_poincare() {
    let o = run(&["sharpness", "--case", "poincare_k1", "--N", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_run(&o);
    let Report::Sharpness(t) = &r.reports[0] else {
        panic!()
    };
    assert!(t.is_decreasing());
    let last = t.last_quotient().unwrap();
    assert!((last - 4.0).abs() / 4.0 < 0.01, "{last}");
}

#[test]
fn sharpness_csv_has_param_and_quotient_rows() {
    let o = run(&[
        "sharpness",
        "--case",
        "poincare_k1",
        "--N",
        "5",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case,N,function_id,term_name,value"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    assert!(rows[0].contains(",param,") && rows[1].contains(",quotient,"));
}

#[test]
fn halfspace_rellich1() {
    let o = run(&["halfspace", "--which", "rellich1", "--N", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(parse_run(&o).reports.len(), 6);
}

#[test]
fn halfspace_pf2_explicit_alpha() {
    let o = run(&[
        "halfspace",
        "--which",
        "pf2",
        "--N",
        "5",
        "--alpha",
        "0.5",
        "--suite",
        "pole",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = parse_run(&o);
    assert_eq!(r.reports.len(), 2);
    for rep in r.reports {
        let Report::Identity(i) = rep else { panic!() };
        assert_eq!(i.alpha, Some(0.5));
        assert!(i.alternate.is_some());
    }
}

#[test]
fn csv_long_format_for_margins() {
    let o = run(&[
        "verify", "--case", "poincare", "--N", "5", "--suite", "smoke", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["case", "N", "function_id", "term_name", "value"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    // 3 terms + lhs, rhs, margin, noise, verdict per function
    assert_eq!(rows.len(), 4 * 8);
    assert!(rows.iter().all(|r| &r[0] == "poincare" && &r[1] == "5"));
}

#[test]
fn json_round_trip() {
    for args in [
        vec![
            "hyperbolic-hardy",
            "verify",
            "--case",
            "yang",
            "--beta",
            "1",
            "--N",
            "7",
            "--suite",
            "smoke",
        ],
        vec![
            "hyperbolic-hardy",
            "constants",
            "--k",
            "4",
            "--l",
            "1",
            "--N",
            "9",
        ],
        vec![
            "hyperbolic-hardy",
            "identity",
            "--which",
            "estimate2",
            "--N",
            "5",
            "--suite",
            "smoke",
        ],
        vec![
            "hyperbolic-hardy",
            "halfspace",
            "--which",
            "hardy_mazya",
            "--N",
            "5",
            "--suite",
            "pole",
        ],
    ] {
        let cli = Cli::try_parse_from(&args).unwrap();
        let (_, direct, _) = execute(&cli.command).unwrap();
        let o = run(&args[1..]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let parsed = parse_run(&o);
        assert_eq!(parsed, direct, "{args:?}");
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(again, stdout(&o));
    }
}

#[test]
fn output_is_byte_identical() {
    let args = ["verify", "--case", "thm21", "--N", "5", "6"];
    let (a, b) = (run(&args), run(&args));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_and_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = run(&[
        "constants",
        "--k",
        "2",
        "--l",
        "1",
        "--N",
        "5",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("case,N,function_id,term_name,value"));

    let o = Command::new(BIN)
        .args(["sharpness", "--case", "poincare_k1", "--N", "5"])
        .env("HYPERBOLIC_HARDY_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = dir.path().join("sharpness-poincare_k1-N5.json");
    let run: Run = serde_json::from_str(&std::fs::read_to_string(written).unwrap()).unwrap();
    assert_eq!(run.command, "sharpness");
}

#[test]
fn usage_errors() {
    for args in [
        vec!["bogus"],
        vec!["constants", "--k", "2"],
        vec!["verify", "--case", "nope"],
        vec!["halfspace", "--which", "rellich1", "--N", "x"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_suite_is_reported() {
    let o = run(&["verify", "--case", "thm21", "--suite", "missing"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("missing"));
}
