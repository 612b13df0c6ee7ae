use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use mmsec_ffi::*;

fn last_error() -> String {
    let p = mmsec_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn preset_evaluate_and_free() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(mmsec_scenario_from_preset(c("fig1").as_ptr(), &mut h), MmsecStatus::Ok);
        assert!(mmsec_last_error_message().is_null());
        let mut v = f64::NAN;
        assert_eq!(mmsec_evaluate(h, c("tau_n").as_ptr(), &mut v), MmsecStatus::Ok);
        assert!(v > 0.0 && v < 1.0);
        // same value as the library call
        let direct = mmsec::analysis::evaluate(
            &mmsec::scenario::preset("fig1").unwrap(),
            mmsec::scenario::Metric::TauN,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(v, direct);

        assert_eq!(mmsec_scenario_set(h, c("lambda_e").as_ptr(), 4e-4), MmsecStatus::Ok);
        let mut w = f64::NAN;
        assert_eq!(mmsec_evaluate(h, c("tau_n").as_ptr(), &mut w), MmsecStatus::Ok);
        assert!(w < v);
        mmsec_scenario_free(h);
    }
}

#[test]
fn simulate_agrees_with_analysis() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(mmsec_scenario_from_preset(c("fig1").as_ptr(), &mut h), MmsecStatus::Ok);
        let (mut est, mut ci, mut exact) = (0.0, 0.0, 0.0);
        assert_eq!(mmsec_simulate(h, c("tau_n").as_ptr(), 5000, 3, &mut est, &mut ci), MmsecStatus::Ok);
        assert_eq!(mmsec_evaluate(h, c("tau_n").as_ptr(), &mut exact), MmsecStatus::Ok);
        assert!(ci > 0.0);
        assert!((est - exact).abs() <= 0.01f64.max(1.5 * ci));
        assert_eq!(mmsec_simulate(h, c("tau_n").as_ptr(), 0, 3, &mut est, &mut ci), MmsecStatus::Validation);
        mmsec_scenario_free(h);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(mmsec_scenario_from_preset(c("fig99").as_ptr(), &mut h), MmsecStatus::Unsupported);
        assert!(h.is_null());
        assert!(last_error().contains("fig99"));
        assert_eq!(mmsec_scenario_from_preset(ptr::null(), &mut h), MmsecStatus::NullPointer);
        assert_eq!(mmsec_scenario_from_toml(c("bs_intensity = ").as_ptr(), &mut h), MmsecStatus::Parse);
        let bad = [0xffu8, 0];
        assert_eq!(mmsec_scenario_from_preset(bad.as_ptr().cast(), &mut h), MmsecStatus::InvalidUtf8);

        assert_eq!(mmsec_scenario_from_preset(c("fig1").as_ptr(), &mut h), MmsecStatus::Ok);
        let mut v = 0.0;
        assert_eq!(mmsec_evaluate(h, c("nope").as_ptr(), &mut v), MmsecStatus::Parse);
        assert_eq!(mmsec_evaluate(h, c("tau_n").as_ptr(), ptr::null_mut()), MmsecStatus::NullPointer);
        // rejected update leaves the handle unchanged
        let mut before = 0.0;
        mmsec_evaluate(h, c("tau_n").as_ptr(), &mut before);
        assert_eq!(mmsec_scenario_set(h, c("lambda_e").as_ptr(), -1.0), MmsecStatus::Validation);
        let mut after = 0.0;
        mmsec_evaluate(h, c("tau_n").as_ptr(), &mut after);
        assert_eq!(before, after);
        mmsec_scenario_free(h);
        mmsec_scenario_free(ptr::null_mut());
    }
}

#[test]
fn toml_round_trip() {
    let text = mmsec::scenario::to_toml(&mmsec::scenario::preset("fig4").unwrap()).unwrap();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(mmsec_scenario_from_toml(c(&text).as_ptr(), &mut h), MmsecStatus::Ok);
        let mut v = 0.0;
        assert_eq!(mmsec_evaluate(h, c("p_con").as_ptr(), &mut v), MmsecStatus::Ok);
        assert!(v > 0.0 && v <= 1.0);
        mmsec_scenario_free(h);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/mmsec.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["mmsec_scenario_from_preset", "mmsec_scenario_free", "mmsec_evaluate", "mmsec_simulate", "mmsec_last_error_message"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"mmsec.h\"\nint main(void) { MmsecScenario *s = 0; MmsecStatus st = mmsec_scenario_from_preset(\"fig1\", &s); return st == MMSEC_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include")).arg(&src).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("skipping C compile check, `{cc}` unavailable: {e}"),
    }
}
