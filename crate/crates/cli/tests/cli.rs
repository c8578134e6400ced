use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ahext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahext")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_input(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, json).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Column `name` of a CSV on stdout or disk.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

const ROUND: &str = r#"{"metric": {"type": "round", "r0": 1}, "H0": 0}"#;
const ROUND_CMC: &str = r#"{"metric": {"type": "round", "r0": 1}, "H0": 2}"#;
const PERTURBED: &str = r#"{"metric": {"type": "legendre", "r0": 1, "coefficients": [0, 0, 0.1, 0.05]}, "H0": 0}"#;

#[test]
fn profile_columns() {
    let out = ahext(&["profile", "--m", "0", "--b", "1", "--r0", "1", "--smax", "2", "--samples", "256"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = stdout(&out);
    assert!(csv.starts_with("s,u,u_prime,u_double_prime,R,H,hawking_mass\r\n"));
    let r = column(&csv, "R");
    assert_eq!(r.len(), 256);
    assert!(r.iter().all(|r| (r + 6.0).abs() <= 1e-8));

    let out = ahext(&["profile", "--m", "1", "--b", "1", "--r0", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(column(&stdout(&out), "hawking_mass").iter().all(|m| (m - 1.0).abs() <= 1e-8));
}

#[test]
fn profile_inside_the_horizon_is_an_input_error() {
    let out = ahext(&["profile", "--m", "1", "--b", "1", "--r0", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("r_o < r_+"), "{}", stderr(&out));
}

#[test]
fn profile_file_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("p.csv");
    let out = ahext(&["profile", "--m", "-2", "--b", "1", "--r0", "0.7", "--samples", "33", "--output", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let x: f64 = field.parse().unwrap();
        assert_eq!(format!("{x:.16e}"), field);
    }
}

#[test]
fn minimal_bound_of_the_unit_sphere() {
    let dir = TempDir::new().unwrap();
    let input = write_input(&dir, "round.json", ROUND);
    let out = ahext(&["bound", "--input", s(&input), "--variant", "minimal"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "1.0");

    let cmc = write_input(&dir, "round_cmc.json", ROUND_CMC);
    let out = ahext(&["bound", "--input", s(&cmc), "--variant", "minimal"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("H0 = 0"));
}

#[test]
fn schema_violations_exit_with_two() {
    let dir = TempDir::new().unwrap();
    for json in [
        r#"{"metric": {"type": "cube", "r0": 1}, "H0": 0}"#,
        r#"{"metric": {"type": "round"}, "H0": 0}"#,
        r#"{"metric": {"type": "round", "r0": 1}}"#,
        r#"{"metric": {"type": "round", "r0": -1}, "H0": 0}"#,
        "not json",
    ] {
        let input = write_input(&dir, "bad.json", json);
        let out = ahext(&["bound", "--input", s(&input)]);
        assert_eq!(code(&out), 2, "{json}: {}", stderr(&out));
    }
    let out = ahext(&["bound", "--input", s(&dir.path().join("missing.json"))]);
    assert_eq!(code(&out), 2);
    let out = ahext(&["bound", "--input", s(&write_input(&dir, "r.json", ROUND)), "--variant", "nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn thread_count_is_validated() {
    let dir = TempDir::new().unwrap();
    let input = write_input(&dir, "round.json", ROUND);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ahext"))
            .args(["bound", "--input", s(&input)])
            .env("AHEXT_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    for bad in ["0", "-1", "many"] {
        let out = run(bad);
        assert_eq!(code(&out), 2, "{bad}");
        assert!(stderr(&out).contains("AHEXT_THREADS"));
    }
}

#[test]
fn flow_and_collar_tables() {
    let dir = TempDir::new().unwrap();
    let input = write_input(&dir, "p.json", PERTURBED);
    let (csv, json) = (dir.path().join("flow.csv"), dir.path().join("flow.json"));
    let out = ahext(&["flow", "--input", s(&input), "--path-samples", "81", "--output", s(&csv), "--report", s(&json)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let radius = column(&text, "area_radius");
    assert_eq!(radius.len(), 81);
    assert!(radius.iter().all(|r| (r - radius[0]).abs() <= 1e-8 * radius[0]));
    let times = column(&text, "flow_time");
    assert!(times.windows(2).all(|w| w[1] >= w[0]));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!(summary["alpha"].as_f64().unwrap() > 0.0);
    assert!(summary["max_trace_residual"].as_f64().unwrap() <= 1e-5);

    let (csv, json) = (dir.path().join("collar.csv"), dir.path().join("collar.json"));
    let out = ahext(&[
        "collar", "--input", s(&input), "--path-samples", "81", "--variant", "minimal", "--output", s(&csv), "--report",
        s(&json),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(column(&text, "min_r_plus_6").iter().all(|r| *r > 0.0));
    let masses = column(&text, "hawking_mass");
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(summary["variant"], "minimal");
    assert_eq!(summary["end_mass"].as_f64().unwrap(), *masses.last().unwrap());
    assert!(summary["end_mass"].as_f64().unwrap() <= summary["end_mass_bound"].as_f64().unwrap());
}

struct Extended {
    dir: TempDir,
    csv: PathBuf,
    report: PathBuf,
}

fn extend_round_cmc(tag: &str) -> Extended {
    let dir = TempDir::new().unwrap();
    let input = write_input(&dir, "round_cmc.json", ROUND_CMC);
    let csv = dir.path().join(format!("{tag}.csv"));
    let report = dir.path().join(format!("{tag}.json"));
    let out = ahext(&[
        "extend", "--input", s(&input), "--mass", "0.6", "--variant", "cmc-b0", "--output", s(&csv), "--report", s(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("PASS"));
    Extended { dir, csv, report }
}

#[test]
fn extend_then_verify_round_trips() {
    let a = extend_round_cmc("a");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&a.report).unwrap()).unwrap();
    assert_eq!(report["status"], "PASS");
    assert_eq!(report["parameters"]["variant"], "cmc-b0");
    assert_eq!(report["exterior_mass"], 0.6);

    let b = extend_round_cmc("b");
    assert_eq!(fs::read(&a.csv).unwrap(), fs::read(&b.csv).unwrap());
    assert_eq!(fs::read(&a.report).unwrap(), fs::read(&b.report).unwrap());

    let out = ahext(&["verify", "--profile", s(&a.csv), "--report", s(&a.report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().last(), Some("PASS"));
    // certificate values printed by verify match the report to 1e-12
    let certs = report["certificates"].as_array().unwrap();
    for line in text.lines().filter(|l| l.contains(" = ")) {
        let name = line.split_whitespace().nth(1).unwrap();
        let value: f64 = line.split(" = ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
        let recorded = certs.iter().find(|c| c["name"] == name).unwrap()["value"].as_f64().unwrap();
        assert!((value - recorded).abs() <= 1e-12 * recorded.abs().max(1.0), "{name}");
    }

    // a perturbed u'' breaks the glued curvature certificate
    let csv = fs::read_to_string(&a.csv).unwrap();
    let mut lines: Vec<String> = csv.lines().map(str::to_string).collect();
    let mut fields: Vec<String> = lines[2].split(',').map(str::to_string).collect();
    let upp: f64 = fields[3].parse().unwrap();
    fields[3] = format!("{:.16e}", upp - 10.0);
    lines[2] = fields.join(",");
    let tampered = a.dir.path().join("tampered.csv");
    fs::write(&tampered, lines.join("\r\n") + "\r\n").unwrap();
    let out = ahext(&["verify", "--profile", s(&tampered), "--report", s(&a.report)]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("not certified"));
}

#[test]
fn extend_below_the_collar_end_mass_is_a_hypothesis_error() {
    let dir = TempDir::new().unwrap();
    let input = write_input(&dir, "round_cmc.json", ROUND_CMC);
    let out = ahext(&[
        "extend",
        "--input",
        s(&input),
        "--mass",
        "0.4",
        "--variant",
        "cmc-b0",
        "--output",
        s(&dir.path().join("p.csv")),
        "--report",
        s(&dir.path().join("r.json")),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("collar-end Hawking mass"));
}

#[test]
fn verify_rejects_a_foreign_header() {
    let dir = TempDir::new().unwrap();
    let csv = write_input(&dir, "p.csv", "a,b\r\n1,2\r\n");
    let report = write_input(&dir, "r.json", "{}");
    let out = ahext(&["verify", "--profile", s(&csv), "--report", s(&report)]);
    assert_eq!(code(&out), 2);
}
