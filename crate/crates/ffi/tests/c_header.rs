//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "pssmp.h"

int main(void) {
    PssmpExponent *e = NULL;
    PssmpSeries *s = NULL;
    double v = 0.0;
    if (pssmp_exponent_from_preset("bessel:3", &e) != PSSMP_STATUS_OK) return 10;
    if (pssmp_series_new(e, 2.0, &s) != PSSMP_STATUS_OK) return 11;
    if (pssmp_hitting_laplace(s, 0.0, 1.0, 1.0, &v) != PSSMP_STATUS_OK) return 12;
    if (fabs(v - sqrt(2.0) / sinh(sqrt(2.0))) > 1e-14) return 13;
    if (pssmp_exponent_from_preset("bessel:-1", &e) != PSSMP_STATUS_INVALID_ARGUMENT) return 14;
    if (pssmp_last_error_message() == NULL) return 15;
    printf("%.17g\n", v);
    pssmp_series_free(s);
    pssmp_exponent_free(e);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let lib = target_dir().join("libpssmp_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 0.730_834_483_939_939_8).abs() < 1e-12);
}
