use std::process::{Command, Output};

use serde_json::Value;

fn qvir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qvir"))
        .args(args)
        .env_remove("QVIR_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn level_one_determinant() {
    let out = qvir(&["kac-det", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let det = json(&out)["determinant"].as_str().unwrap().to_string();
    assert_eq!(
        det,
        "(x^4*y^4*l^2 - x^2*y^4*l^2 - x^4*y^2*l^2 - x^2*y^6 - 2*x^4*y^4 - x^6*y^2 + x^2*y^2*l^2 \
         + y^6 + 3*x^2*y^4 + 3*x^4*y^2 + x^6 - y^4 - 2*x^2*y^2 - x^4)/(x^2*y^4 + x^4*y^2)"
    );
}

#[test]
fn singular_vector_at_one_one_has_ratio_one() {
    let out = qvir(&["singular", "--r", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ratio"], "1");
    assert_eq!(v["status"], "pass");
}

#[test]
fn probabilistic_kac_check() {
    let out = qvir(&["verify-kac", "--level", "4", "--probabilistic", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lambda_part"], "pass");
    assert_eq!(v["points_passed"], 20);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["kac-det", "--level", "3", "--probabilistic", "--seed", "5"][..],
        &["verify-defrel", "--n", "1", "--m", "-2", "--sector", "-1,2", "--L", "3"][..],
        &["selftest", "--only", "1,11"][..],
    ] {
        let a = qvir(args);
        let b = qvir(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn identity_checks_pass() {
    for args in [
        &["verify-split", "--N", "2", "--sector", "0,0", "--L", "2"][..],
        &["verify-screening", "--sign", "-", "--n", "-1", "--sector", "0,-1", "--L", "2"][..],
        &["verify-appendix", "--pair", "b+s-", "--L", "2"][..],
        &["verify-identity-c106", "--r", "3"][..],
    ] {
        let out = qvir(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("\"pass\""));
    }
}

#[test]
fn failed_verification_exits_with_one() {
    let out = qvir(&["verify-appendix", "--pair", "b-s+", "--L", "1", "--q-epsilon", "q"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "fail");
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
    let explicit = qvir(&["verify-appendix", "--pair", "b-s+", "--L", "1", "--q-epsilon", "x^2/y^2"]);
    assert_eq!(explicit.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qvir(&["kac-det"]).status.code(), Some(2));
    assert_eq!(qvir(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qvir(&["verify-screening", "--sign", "x", "--n", "0", "--L", "1"]).status.code(), Some(2));
    assert_eq!(qvir(&["macdonald", "--partition", "1,2"]).status.code(), Some(2));
    assert_eq!(qvir(&["verify-identity-c106", "--r", "0"]).status.code(), Some(2));
}

#[test]
fn bounds_are_enforced_and_configurable() {
    let out = qvir(&["kac-det", "--level", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));

    let dir = std::env::temp_dir().join(format!("qvir-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bounds.conf");
    std::fs::write(&cfg, "kac_exact = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(qvir(&["kac-det", "--level", "2", "--config", cfg]).status.code(), Some(2));
    assert_eq!(qvir(&["kac-det", "--level", "1", "--config", cfg]).status.code(), Some(0));

    let with_env = Command::new(env!("CARGO_BIN_EXE_qvir"))
        .args(["kac-det", "--level", "2"])
        .env("QVIR_CONFIG", cfg)
        .output()
        .unwrap();
    assert_eq!(with_env.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qvir-out-{}.json", std::process::id()));
    let out = qvir(&["gram", "--level", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["basis"], serde_json::json!([[2], [1, 1]]));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn pretty_renders_a_table() {
    let out = qvir(&["verify-defrel", "--n", "1", "--m", "-1", "--L", "1", "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("modes") && l.contains("residual")));
}

#[test]
fn timings_appear_only_on_request() {
    let args = ["verify-defrel", "--n", "0", "--m", "0", "--L", "1"];
    assert!(!String::from_utf8_lossy(&qvir(&args).stdout).contains("elapsed_ms"));
    let mut timed = args.to_vec();
    timed.push("--timing");
    assert!(String::from_utf8_lossy(&qvir(&timed).stdout).contains("elapsed_ms"));
}
