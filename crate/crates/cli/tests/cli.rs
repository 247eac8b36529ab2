use std::path::PathBuf;
use std::process::{Command, Output};

fn equistark(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equistark"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(stem: &str) -> String {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "fixtures",
        &format!("{stem}.json"),
    ]
    .iter()
    .collect();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn theta_for_the_gaussian_field() {
    let out = equistark(&[
        "theta",
        "--conductor",
        "4",
        "--subgroup",
        "trivial",
        "--S",
        "inf,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1/4 - 1/4*σ_3");

    let out = equistark(&[
        "--json",
        "theta",
        "--conductor",
        "4",
        "--S",
        "inf,2",
        "--T",
        "5",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theta"], "-1 + σ_3");
}

#[test]
fn etnc_pipeline_passes() {
    for p in ["3", "5", "11"] {
        let out = equistark(&["verify-etnc", "--conductor", "23", "--p", p]);
        assert_eq!(out.status.code(), Some(0), "p = {p}\n{}", stdout(&out));
        assert!(stdout(&out).contains("PASS containment"));
    }
}

#[test]
fn bad_input_exits_two() {
    let out = equistark(&["theta", "--conductor", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(equistark(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        equistark(&["theta", "--conductor", "7", "--subgroup", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_output_does_not_depend_on_threads() {
    let args = [
        "--json",
        "verify-strong-stark",
        "--fixture",
        &fixture("f23_p3_t07"),
    ];
    let serial = Command::new(env!("CARGO_BIN_EXE_equistark"))
        .args(args)
        .env("EQUISTARK_JOBS", "1")
        .output()
        .unwrap();
    let default = equistark(&args);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, default.stdout);
}

#[test]
fn fixture_reports() {
    for stem in ["f4_p3_t05", "f23_p3_t05", "f23_p3_t07", "f23_p5_t03"] {
        let out = equistark(&["--json", "verify-dk", "--fixture", &fixture(stem)]);
        assert_eq!(out.status.code(), Some(0), "{stem}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let checks: Vec<_> = v["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x["check"].as_str().unwrap())
            .collect();
        assert_eq!(
            checks,
            ["class-number-index", "dasgupta-kakde", "ray-sequence"]
        );
    }
    let out = equistark(&["verify-strong-stark", "--fixture", &fixture("f23_p3_t07")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("chi(11) order 2 fitting=[(1, 1), (7, 1)]"));
    assert!(text.ends_with("11 passed, 0 failed, 0 skipped\n"));
}

#[test]
fn corrupted_fixture_is_rejected() {
    let text = std::fs::read_to_string(fixture("f23_p3_t07")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["modules"]["A"]["cardinality"] = 9.into();
    let path = std::env::temp_dir().join(format!("equistark-corrupt-{}.json", std::process::id()));
    std::fs::write(&path, v.to_string()).unwrap();
    let out = equistark(&["verify-dk", "--fixture", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cardinality"));
}

#[test]
fn selftest_passes() {
    let out = equistark(&["selftest", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(" 0 failed"));
}
