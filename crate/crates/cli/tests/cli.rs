use std::path::Path;
use std::process::{Command, Output};

fn idemsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemsum"))
        .args(args)
        .env_remove("IDEMSUM_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn build_manifest(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["family", "build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = idemsum(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = idemsum(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_arguments_exit_two_with_stderr_only() {
    for args in [
        &["family", "build", "--kind", "su2"][..],
        &["family", "build", "--kind", "q1", "--N", "10"][..],
        &["wild", "build", "--builder", "wild2", "--lambda", "4"][..],
        &["lambda", "member", "--value", "1/0"][..],
        &[
            "family",
            "verify",
            "--manifest",
            "/nonexistent/manifest.json",
        ][..],
    ] {
        let out = idemsum(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn header_fields_and_sorted_keys() {
    let out = idemsum(&[
        "family", "build", "--kind", "q1", "--y", "2", "--verify", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "family build");
    assert_eq!(v["seed"], 5);
    assert_eq!(v["pass"], true);
    assert!(v["tool"].as_str().unwrap().starts_with("idemsum "));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn s4_on_su2_fails_and_on_p332_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let su2 = build_manifest(dir.path(), "su2.json", &["--kind", "su2", "--k", "3"]);
    let out = idemsum(&[
        "identity",
        "s4",
        "--manifest",
        &su2,
        "--trials",
        "20",
        "--wordlen",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    // S4 needs four generators.
    let p332 = build_manifest(dir.path(), "p332.json", &["--kind", "p332"]);
    let out = idemsum(&[
        "identity",
        "s4",
        "--manifest",
        &p332,
        "--trials",
        "5",
        "--wordlen",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("four generators"));
}

#[test]
fn manifest_round_trip_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let m = build_manifest(
        dir.path(),
        "q2.json",
        &["--kind", "q2perp", "--alpha", "1.5", "--which", "second"],
    );
    let out = idemsum(&["family", "verify", "--manifest", &m]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn lambda_and_orbit_commands() {
    let out = idemsum(&[
        "--format", "text", "lambda", "set", "--n", "5", "--kind", "cf2", "--count", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("1, 4/3, 11/8"));

    let out = idemsum(&["lambda", "member", "--value", "5/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);

    let out = idemsum(&["--seed", "9/4", "orbit", "fundamental", "--depth", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["point"], "1/4");
    assert_eq!(v["seed"], "9/4");
}

#[test]
fn text_format_is_plain() {
    let out = idemsum(&["--format", "text", "scan", "lambda4", "--grid", "0:4:1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.trim_start().starts_with('{'));
    assert!(text.ends_with('\n'));
}

#[test]
fn seeded_runs_repeat() {
    let args = [
        "wild",
        "fullness",
        "--builder",
        "wild1a",
        "--trials",
        "4",
        "--seed",
        "12",
    ];
    let a = idemsum(&args);
    let b = idemsum(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = idemsum(&[
        "wild",
        "build",
        "--builder",
        "wild1a",
        "--subdim",
        "2",
        "--seed",
        "12",
    ]);
    let again = idemsum(&[
        "wild",
        "build",
        "--builder",
        "wild1a",
        "--subdim",
        "2",
        "--seed",
        "13",
    ]);
    assert_ne!(json(&other)["family"], serde_json::Value::Null);
    assert_ne!(other.stdout, again.stdout);
}
