use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn rough(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rough")).args(args).output().expect("run rough")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Write `text` to a scratch file unique to this test.
fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("rough-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn approx_named_event() {
    let out = rough(&["approx", &fixture("six_element_map.json"), "--event", "odd"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "event      {1,3,5}\n\
         lower      {1,3}\n\
         upper      {1,2,3,5,6}\n\
         exact      false\n\
         P          1/2\n\
         P*         (1/3, 5/6)\n"
    );
}

#[test]
fn approx_label_list_with_condition() {
    let out = rough(&["approx", &fixture("six_element_map.json"), "--event", "4,5,6", "--given", "odd"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("P_lower(A|B) 0\n"), "{text}");
    assert!(text.contains("P_upper(A|B) 2/5\n"), "{text}");
}

#[test]
fn approx_undefined_conditional() {
    // Nothing maps entirely inside {2}, so the lower conditional has no denominator.
    let out = rough(&["approx", &fixture("six_element_map.json"), "--event", "1", "--given", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("P_lower(A|B) undefined\n"), "{text}");
    assert!(text.contains("P_upper(A|B) 0\n"), "{text}");
}

#[test]
fn approx_empty_event() {
    let out = rough(&["approx", &fixture("six_element_map.json"), "--event", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("P*         (0, 0)\n"));
}

#[test]
fn unknown_names_exit_3() {
    let out = rough(&["approx", &fixture("six_element_map.json"), "--event", "evens"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("evens"));

    let out = rough(&["report", &fixture("six_element_map.json"), "--variable", "W"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_input_exits_2() {
    let missing = rough(&["approx", "/nonexistent/space.json", "--event", "1"]);
    assert_eq!(missing.status.code(), Some(2));

    let syntax = scratch("syntax.json", "{\"elements\": [\"1\"");
    assert_eq!(rough(&["approx", &syntax, "--event", "1"]).status.code(), Some(2));

    let zero = scratch("zero.json", r#"{"elements": ["a"], "map": {"a": ["a"]}, "weights": {"a": "1/0"}}"#);
    assert_eq!(rough(&["approx", &zero, "--event", "a"]).status.code(), Some(2));

    let empty_image = scratch("empty.json", r#"{"elements": ["a", "b"], "map": {"a": ["a"], "b": []}}"#);
    let out = rough(&["approx", &empty_image, "--event", "a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("map.b"), "{}", stderr(&out));

    let bad_mode = rough(&["report", &fixture("six_element_map.json"), "--variable", "U", "--cdf-mode", "sum"]);
    assert_eq!(bad_mode.status.code(), Some(2));
}

#[test]
fn report_event_mode() {
    let out = rough(&["report", &fixture("six_element_map.json"), "--variable", "U", "--cdf-mode", "event"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("distribution function (event)\n"));
    assert!(
        text.contains("F_upper(u):\n  (-inf, 1)  0\n  [1, 3)     2/3\n  [3, 4)     5/6\n  [4, inf)   1\n"),
        "{text}"
    );
    assert!(text.contains("E*(U)           = (4/3, 35/6)\n"));
}

#[test]
fn report_identity_map_has_no_note() {
    let out = rough(&["report", &fixture("identity_map.json"), "--variable", "U"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("V*(U) direct    = (35/12, 35/12)\n"), "{text}");
    assert!(!text.contains("note:"));
}

#[test]
fn verify_domain_limits() {
    let out = rough(&["verify", "--n-max", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rough(&["verify", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--allow-large"));
    let out = rough(&["verify", "--n-max", "9", "--allow-large"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_sweep_reports_counterexamples() {
    let out = rough(&["verify", "--n-max", "2"]);
    let text = stdout(&out);
    assert!(text.starts_with("swept 30 spaces (n <= 2, uniform + seeds [1, 2])\n"), "{text}");
    assert!(!text.contains("ms"), "timings must be opt-in");
    // The exact-conditioning sandwich fails on a transitive, non-reflexive map of two elements.
    assert_eq!(out.status.code(), Some(5));
    assert!(text.contains("counterexamples:"));
    assert!(stderr(&out).contains("L2.6.10"));
    assert!(!stderr(&out).contains("NC-SUPERADD"));
}

#[test]
fn verify_cover_variant_counts_as_law() {
    let out = rough(&["verify", "--n-max", "2", "--include-cover-variant", "--json"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("L2.6.8-COVER"));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cover = report["laws"].as_array().unwrap().iter().find(|l| l["law"] == "L2.6.8-COVER").unwrap();
    assert_eq!(cover["verdict"], "violated");
    assert!(cover["counterexamples"].as_array().unwrap().len() <= 3);
}

#[test]
fn verify_is_deterministic_across_thread_modes() {
    let parallel = rough(&["verify", "--n-max", "2", "--json"]);
    let serial = rough(&["verify", "--n-max", "2", "--json", "--serial"]);
    assert_eq!(parallel.stdout, serial.stdout);
    assert_eq!(parallel.status.code(), serial.status.code());
}
