use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nonstatic(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonstatic"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(path: &Path) -> Value {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    serde_json::from_str(&std::fs::read_to_string(PathBuf::from(name)).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is one JSON object")
}

#[test]
fn no_flags_is_the_static_scenario() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(dir.path(), &["nonstaticity"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("D = 0.00"));
    let m = manifest(&dir.path().join("nonstaticity.csv"));
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["derived"]["nonstaticity"], 0.0);
    assert_eq!(m["derived"]["c3"], 0.0);
    assert_eq!(m["scenario"]["c1"], 1.0);
}

#[test]
fn manifest_records_measure_for_large_nonstaticity() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(
        dir.path(),
        &["nonstaticity", "--c1", "1", "--c2", "100", "--out", "n.csv"],
    );
    assert!(o.status.success());
    let d = manifest(&dir.path().join("n.csv"))["derived"]["nonstaticity"]
        .as_f64()
        .unwrap();
    assert_eq!(format!("{d:.2}"), "35.70");
}

#[test]
fn constraint_violation_is_a_usage_error_naming_the_flag() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(dir.path(), &["energies", "--c1", "0.5", "--c2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr_json(&o);
    assert_eq!(err["error"]["kind"], "usage");
    assert_eq!(err["error"]["flag"], "--c1");
    assert!(!dir.path().join("energies.csv").exists());
}

#[test]
fn unknown_flag_and_missing_subject_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(dir.path(), &["energies", "--frobnicate", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["flag"], "--frobnicate");
    let o = nonstatic(dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["kind"], "usage");
    let o = nonstatic(dir.path(), &["sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(dir.path(), &["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("--tol-scale"));
}

#[test]
fn validate_static_case_passes() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(dir.path(), &["validate", "--c1", "1", "--c2", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("D = 0.00"));
    assert!(!out.contains("FAIL"));
    let csv = std::fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    assert!(csv.starts_with("check,value,tolerance,passed\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn validate_failure_exits_with_three() {
    // a tolerance scale far below round-off makes the suite fail
    let dir = TempDir::new().unwrap();
    let o = nonstatic(
        dir.path(),
        &["validate", "--c1", "5", "--c2", "2", "--tol-scale", "1e-30"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], "validation");
    assert!(dir.path().join("validate.csv").exists());
}

#[test]
fn energy_sweep_is_conserved() {
    let dir = TempDir::new().unwrap();
    for c1 in ["1", "2", "4", "10", "20"] {
        let out = format!("e{c1}.csv");
        let o = nonstatic(
            dir.path(),
            &["energies", "--c1", c1, "--c2", "1", "--out", &out],
        );
        assert!(o.status.success());
        let text = std::fs::read_to_string(dir.path().join(&out)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,electric,magnetic,total"));
        let totals: Vec<f64> = lines
            .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
            .collect();
        assert_eq!(totals.len(), 201);
        for e in &totals {
            assert!((e - totals[0]).abs() <= 1e-10 * totals[0]);
        }
    }
}

#[test]
fn density_output_is_reproducible_and_round_trips_through_manifest() {
    let dir = TempDir::new().unwrap();
    let args = ["density-q", "--c1", "5", "--c2", "2", "--nt", "9"];
    let a = nonstatic(dir.path(), &[&args[..], &["--out", "a.csv"]].concat());
    let b = nonstatic(dir.path(), &[&args[..], &["--out", "b.csv"]].concat());
    assert!(a.status.success() && b.status.success());
    let bytes_a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(bytes_a, std::fs::read(dir.path().join("b.csv")).unwrap());
    assert!(!bytes_a.contains(&b'\r'));

    let m = manifest(&dir.path().join("a.csv"));
    assert_eq!(m["scenario"]["c3_sign"], "+");
    let nq = m["scenario"]["nq"].as_u64().unwrap() as usize;
    let text = String::from_utf8(bytes_a.clone()).unwrap();
    assert!(text.starts_with("t,q,density\n"));
    assert_eq!(text.lines().count(), 1 + 9 * nq);
    // every number carries seventeen significant digits
    let first = text.lines().nth(1).unwrap();
    for field in first.split(',') {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
    }

    let c = nonstatic(
        dir.path(),
        &["--config", "a.csv.manifest.json", "--out", "c.csv"],
    );
    assert!(c.status.success(), "{}", String::from_utf8_lossy(&c.stderr));
    assert_eq!(bytes_a, std::fs::read(dir.path().join("c.csv")).unwrap());
}

#[test]
fn flags_override_config_values() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"subject": "fluctuations", "c1": 4.0, "c2": 1.0, "nt": 3}"#,
    )
    .unwrap();
    let o = nonstatic(
        dir.path(),
        &["--config", "cfg.json", "--c1", "10", "--out", "f.csv"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&dir.path().join("f.csv"));
    assert_eq!(m["scenario"]["c1"], 10.0);
    assert_eq!(m["scenario"]["c2"], 1.0);
    assert_eq!(m["scenario"]["nt"], 3);

    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"subject": "energies", "c9": 1}"#,
    )
    .unwrap();
    let o = nonstatic(dir.path(), &["--config", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["flag"], "--config");
}

#[test]
fn every_subject_has_its_documented_header() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("density-q", "t,q,density"),
        ("density-p", "t,p,density"),
        ("fock-density", "t,q,density"),
        ("energies", "t,electric,magnetic,total"),
        ("fluctuations", "t,dq,dp,product"),
        ("wigner", "t,q,p,w"),
        (
            "ellipse",
            "t,center_q,center_p,center_angle,orientation,sigma_major,sigma_minor",
        ),
        ("mandel-q", "t,mean,variance,q"),
        ("nonstaticity", "t,f,fdot,fddot,zeta,phase_integral,kind"),
    ];
    for (subject, header) in cases {
        let extra: &[&str] = match subject {
            "wigner" => &["--nq", "21", "--np", "21", "--nt", "2"],
            "density-q" | "density-p" | "fock-density" => &["--nt", "3"],
            _ => &[],
        };
        let o = nonstatic(
            dir.path(),
            &[&[subject, "--c1", "5", "--c2", "2"][..], extra].concat(),
        );
        assert!(
            o.status.success(),
            "{subject}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let text = std::fs::read_to_string(dir.path().join(format!("{subject}.csv"))).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{subject}");
        let columns = header.split(',').count();
        assert!(text.lines().all(|l| l.split(',').count() == columns));
    }
}

#[test]
fn json_format_carries_columns_and_rows() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(
        dir.path(),
        &[
            "mandel-q", "--c1", "2", "--c2", "1", "--nt", "4", "--format", "json",
        ],
    );
    assert!(o.status.success());
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mandel-q.json")).unwrap())
            .unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(
        doc["columns"],
        serde_json::json!(["t", "mean", "variance", "q"])
    );
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!((r[3].as_f64().unwrap() - 1.5).abs() < 1e-12);
    }
}

#[test]
fn undefined_statistics_and_large_fock_level_are_rejected() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(dir.path(), &["mandel-q", "--a0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nonstatic(dir.path(), &["fock-density", "--fock-n", "51"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["flag"], "--fock-n");
}

#[test]
fn ellipse_reports_clockwise_period() {
    let dir = TempDir::new().unwrap();
    let o = nonstatic(
        dir.path(),
        &["ellipse", "--c1", "5", "--c2", "2", "--nt", "801"],
    );
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("centre rotation period 6.28318530718"));
    assert!(out.contains("orientation rotation period 6.28318530718"));
    assert!(out.contains("(clockwise)"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = format!("w{threads}.csv");
        let o = Command::new(env!("CARGO_BIN_EXE_nonstatic"))
            .current_dir(dir.path())
            .env("RAYON_NUM_THREADS", threads)
            .args([
                "wigner", "--c1", "5", "--c2", "2", "--nq", "41", "--np", "41", "--out", &out,
            ])
            .output()
            .unwrap();
        assert!(o.status.success());
        outputs.push(std::fs::read(dir.path().join(&out)).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
