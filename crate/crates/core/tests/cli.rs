use std::process::{Command, Output};

use serde_json::Value;

fn pssmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pssmp")).args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_stderr(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON error record")
}

#[test]
fn analytic_verify_passes() {
    let out = pssmp(&["verify", "--analytic", "--preset", "bessel:3", "--alpha", "2", "--a", "1", "--q", "0.5,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["result"]["pass"], true);
    let s = 2f64.sqrt();
    let row = &v["result"]["rows"][1];
    assert!((row["occupation"].as_f64().unwrap() - s / s.sinh()).abs() < 1e-14);
    assert_eq!(v["provenance"]["config"]["alpha"], 2.0);
}

#[test]
fn describe_shows_bessel_five() {
    let out = pssmp(&["exponent", "--preset", "bessel:3", "--tee", "2", "--describe"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let c = &v["result"]["simplified"]["components"][0];
    assert_eq!(c["kind"], "quadratic");
    assert_eq!(c["sigma2"], 1.0);
    assert_eq!(c["drift"], 1.5);
}

#[test]
fn csv_tables_carry_provenance() {
    for args in [
        vec!["exponent", "--preset", "sawtooth:3,1", "--u-grid", "0:2:5"],
        vec!["series", "--preset", "stable:1.5", "--z-grid", "0,1"],
        vec!["series", "--preset", "bessel:3", "--coefficients", "4"],
        vec!["scale", "--preset", "bessel:1", "--tee", "2", "--method", "both", "--x-grid", "0.5,1"],
        vec!["occupation", "--preset", "bessel:3", "--q", "1", "--x-grid", "0,2"],
        vec!["specials", "--function", "bessel_i:0.5", "--x-grid", "0,1"],
    ] {
        let out = pssmp(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
        assert_eq!(header["tool"], "pssmp");
        assert_eq!(header["command"], args[0]);
        assert!(lines.next().unwrap().contains(','));
        assert!(lines.count() >= 2);
    }
}

#[test]
fn scale_methods_agree() {
    let out = pssmp(&["scale", "--preset", "bessel:3", "--tee", "2", "--method", "both", "--x-grid", "0.05:5:12", "--format", "json"]);
    let v = json_stdout(&out);
    for row in v["result"].as_array().unwrap() {
        assert!(row["abs_diff"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn json_exponent_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    std::fs::write(&path, r#"{"components":[{"kind":"quadratic","sigma2":1.0,"drift":0.5}],"wrappers":[{"kind":"tee","beta":2.0}]}"#).unwrap();
    let out = pssmp(&["exponent", "--exponent", path.to_str().unwrap(), "--u-grid", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_stdout(&out)["result"][0]["psi"], 2.0);
    // --alpha is needed without a preset
    let out = pssmp(&["series", "--exponent", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let out = pssmp(&["exponent", "--preset", "sawtooth:1,0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let e = json_stderr(&out);
    assert_eq!(e["error"]["kind"], "constraint");
    assert!(e["error"]["message"].as_str().unwrap().contains("γ"));

    let out = pssmp(&["series", "--preset", "stable:1.5", "--alpha", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stderr(&out)["error"]["kind"], "root_not_below_alpha");

    let out = pssmp(&["verify"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stderr(&out)["error"]["kind"], "usage");

    let out = pssmp(&["series", "--preset", "bessel:3", "--z-grid", "1e300"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_stderr(&out)["error"]["class"], "numeric");

    // starting halfway to the level is far from the entrance law
    let out = pssmp(&[
        "verify", "--mc", "--preset", "bessel:3", "--paths", "4000", "--h", "0.01", "--x0-fraction", "0.5", "--ks-retries", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_stdout(&out)["result"]["pass"], false);
}

#[test]
fn mc_verify_is_reproducible() {
    let args = ["verify", "--mc", "--preset", "bessel:3", "--paths", "2000", "--h", "2e-3", "--seed", "42"];
    let a = pssmp(&args);
    let b = pssmp(&[&args[..], &["--workers", "3"]].concat());
    assert!(matches!(a.status.code(), Some(0 | 3)));
    assert_eq!(a.stdout, b.stdout);
    let v = json_stdout(&a);
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 7);
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"exponent":{"components":[{"kind":"quadratic","sigma2":1.0,"drift":1.5}]},
            "alpha":2.0,"x0":2.0,"a":1.0,"h":0.001,"n_paths":300,"master_seed":7,"mode":{"kind":"ruin"}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = pssmp(&["simulate", "--config", cfg.to_str().unwrap(), "--per-path", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["result"]["n_paths"], 300);
    // escape probability from ln 2 is 1 - 2^{-3}
    let (m, se) = (summary["result"]["mean"].as_f64().unwrap(), summary["result"]["stderr"].as_f64().unwrap());
    assert!((m - 0.875).abs() < 4.0 * se + 0.01, "{m} ± {se}");
    let paths = std::fs::read_to_string(out_dir.join("paths.csv")).unwrap();
    assert_eq!(paths.lines().count(), 302);
}
