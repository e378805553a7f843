use std::path::Path;
use std::process::{Command, Output};

use rgmis::report::Report;

fn rgmis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgmis")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_edge_lists() {
    let out = rgmis(&["gen", "path", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "3\n0 1\n1 2\n");

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        assert_eq!(code(&rgmis(&["gen", "er", "20", "0.2", "--seed", "7", "--out", path_str(p)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = rgmis(&["gen", "cycle", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cycle requires ≥ 3"), "{}", stderr(&out));
}

#[test]
fn verify_exact_on_generated_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p3.txt");
    assert_eq!(code(&rgmis(&["gen", "path", "3", "--out", path_str(&file)])), 0);
    let out = rgmis(&["verify", "--graph", path_str(&file), "--mode", "exact"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert!(report.per_edge.iter().all(|e| e.value.to_string() == "1/2"));
    assert_eq!(report.per_edge.len(), 4);
}

#[test]
fn verify_audit_flags_strict_slack() {
    let out = rgmis(&["verify", "--graph", "k3", "--mode", "audit", "--format", "table"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().contains("status STRICT"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("audit.csv");
    let out = rgmis(&["verify", "--graph", "p3", "--mode", "audit", "--audit-csv", path_str(&csv_path)]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[10], "slack_den");
    assert_eq!(&headers[11], "prefix");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // 1 + 3 + 6 states below t = 3, four ordered edges each
    assert_eq!(rows.len(), 40);
    assert!(rows.iter().all(|r| &r[9] == "0"));
}

#[test]
fn verify_mc_statistical_section_and_determinism() {
    let args = ["verify", "--graph", "er:50:0.1:3", "--mode", "mc", "--trials", "100000", "--seed", "11"];
    let out = rgmis(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.trials, Some(100_000));
    assert!(report.checks.iter().any(|c| c.name == "max_edge_expectation" && c.status.to_string() == "WITHIN"));

    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(rgmis(&threaded).stdout, out.stdout);

    let out = rgmis(&["verify", "--graph", "p3", "--mode", "mc"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn exhaustive_refusal() {
    let out = rgmis(&["verify", "--graph", "k10", "--mode", "exact"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("refused"));
    assert_eq!(code(&rgmis(&["verify", "--graph", "k10", "--exhaustive-bound", "2", "--mode", "audit"])), 3);
}

#[test]
fn consistency_runs_and_catches_faults() {
    assert_eq!(code(&rgmis(&["consistency", "--graph", "p3", "--trials", "100"])), 0);
    assert_eq!(code(&rgmis(&["consistency", "--graph", "er:30:0.2:1", "--trials", "1000"])), 0);

    // vertex 1 of P3 has a lower neighbor under every ordering with it last
    let out = rgmis(&["consistency", "--graph", "p3", "--trials", "100", "--inject-fault", "1"]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("vertex 1"), "{err}");
    assert!(err.contains("prefix:"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.txt");
    let out = rgmis(&["consistency", "--graph", "p3", "--trials", "1", "--trace-out", path_str(&trace)]);
    assert_eq!(code(&out), 0);
    let summary = rgmis(&["report", path_str(&trace)]);
    assert_eq!(code(&summary), 0);
    assert!(stdout(&summary).contains("total_calls"));
}

#[test]
fn report_headlines_and_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = dir.path().join("p3.json");
    let k3 = dir.path().join("k3.json");
    assert_eq!(code(&rgmis(&["verify", "--graph", "p3", "--out", path_str(&p3)])), 0);
    assert_eq!(code(&rgmis(&["verify", "--graph", "k3", "--out", path_str(&k3)])), 0);

    let table = stdout(&rgmis(&["report", path_str(&p3), path_str(&k3)]));
    assert!(table.contains("max_edge_expectation 1/2 bound 1/2 status TIGHT"), "{table}");
    assert!(table.contains("max_edge_expectation 1/3 bound 1/2 status STRICT"), "{table}");

    let csv_text = stdout(&rgmis(&["report", path_str(&k3), "--format", "csv"]));
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let headline = rows.iter().find(|r| &r[2] == "max_edge_expectation").unwrap();
    assert_eq!((&headline[3], &headline[4], &headline[5]), ("1/3", "1/2", "STRICT"));
    let avg = rows.iter().find(|r| &r[2] == "average_calls").unwrap();
    assert_eq!((&avg[3], &avg[4]), ("2/3", "1"));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"schema\": \"other\"}").unwrap();
    let out = rgmis(&["report", path_str(&junk)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("schema mismatch"));
}

#[test]
fn config_file_with_flags_winning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "graph = \"k3\"\nmode = \"exact\"\nformat = \"table\"\n").unwrap();
    let out = rgmis(&["verify", "--config", path_str(&cfg)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("max_edge_expectation 1/3"));

    let out = rgmis(&["verify", "--config", path_str(&cfg), "--graph", "p3", "--format", "csv"]);
    assert!(stdout(&out).starts_with("edge_from,edge_to,num,den\n0,1,1,2\n"));

    std::fs::write(&cfg, "graf = \"k3\"\n").unwrap();
    assert_eq!(code(&rgmis(&["verify", "--config", path_str(&cfg)])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&rgmis(&["verify"])), 2);
    assert_eq!(code(&rgmis(&["verify", "--graph", "nonsense"])), 2);
    assert_eq!(code(&rgmis(&["frobnicate"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3\n0 5\n").unwrap();
    let out = rgmis(&["verify", "--graph", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"));
}
