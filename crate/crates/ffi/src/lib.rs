//! C ABI over `mmsec`.
//!
//! Scenarios are opaque handles created by `mmsec_scenario_*` constructors and
//! released with `mmsec_scenario_free`. Every fallible call returns an
//! `MmsecStatus`; on failure a message is available from
//! `mmsec_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mmsec::analysis::{evaluate, AnalysisSettings};
use mmsec::montecarlo::SimulationConfig;
use mmsec::scenario::{parse_scenario, preset, Axis, Metric, ScenarioParams};
use mmsec::sweep::simulate_points;
use mmsec::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmsecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    Domain = 4,
    Convergence = 5,
    Unsupported = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque scenario handle.
pub struct MmsecScenario {
    params: ScenarioParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> MmsecStatus {
    match e {
        Error::Domain { .. } => MmsecStatus::Domain,
        Error::Validation { .. } => MmsecStatus::Validation,
        Error::Convergence { .. } => MmsecStatus::Convergence,
        Error::Unsupported(_) => MmsecStatus::Unsupported,
        Error::Parse(_) => MmsecStatus::Parse,
        Error::Io(_) => MmsecStatus::Io,
    }
}

struct Fail(MmsecStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MmsecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MmsecStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            MmsecStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(MmsecStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(MmsecStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(MmsecStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

unsafe fn store(out: *mut *mut MmsecScenario, params: ScenarioParams) {
    *out = Box::into_raw(Box::new(MmsecScenario { params }));
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next `mmsec_*` call on this thread.
#[no_mangle]
pub extern "C" fn mmsec_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Create a scenario from a built-in preset name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mmsec_scenario_from_preset(name: *const c_char, out: *mut *mut MmsecScenario) -> MmsecStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = preset(str_arg(name, "name")?)?;
        store(out, params);
        Ok(())
    })
}

/// Create a scenario from TOML text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mmsec_scenario_from_toml(toml: *const c_char, out: *mut *mut MmsecScenario) -> MmsecStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = parse_scenario(str_arg(toml, "toml")?)?;
        store(out, params);
        Ok(())
    })
}

/// Release a scenario. Null is ignored.
///
/// # Safety
/// `scenario` must come from a `mmsec_scenario_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mmsec_scenario_free(scenario: *mut MmsecScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Set one sweep axis (`lambda_e`, `lambda_b`, `tc_db`, `te_db`, `phi`, `theta_b`).
///
/// # Safety
/// `scenario` must be a live handle and `axis` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mmsec_scenario_set(scenario: *mut MmsecScenario, axis: *const c_char, value: f64) -> MmsecStatus {
    guard(|| {
        non_null(scenario, "scenario")?;
        let axis: Axis = str_arg(axis, "axis")?.parse()?;
        let mut next = (*scenario).params.clone();
        next.set_axis(axis, value)?;
        next.validate()?;
        (*scenario).params = next;
        Ok(())
    })
}

/// Analytical value of a metric (`tau`, `tau_n`, `tau_c`, `p_con`, `p_sec`, `n_p`, `omega`).
///
/// # Safety
/// `scenario` must be a live handle, `metric` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mmsec_evaluate(scenario: *const MmsecScenario, metric: *const c_char, out: *mut f64) -> MmsecStatus {
    guard(|| {
        non_null(scenario, "scenario")?;
        non_null(out, "out")?;
        let metric: Metric = str_arg(metric, "metric")?.parse()?;
        *out = evaluate(&(*scenario).params, metric, &AnalysisSettings::default())?;
        Ok(())
    })
}

/// Monte Carlo estimate of a metric and its 95% confidence half-width.
///
/// # Safety
/// `scenario` must be a live handle, `metric` a NUL-terminated string,
/// `estimate` and `ci_halfwidth` writable.
#[no_mangle]
pub unsafe extern "C" fn mmsec_simulate(
    scenario: *const MmsecScenario,
    metric: *const c_char,
    trials: u64,
    seed: u64,
    estimate: *mut f64,
    ci_halfwidth: *mut f64,
) -> MmsecStatus {
    guard(|| {
        non_null(scenario, "scenario")?;
        non_null(estimate, "estimate")?;
        non_null(ci_halfwidth, "ci_halfwidth")?;
        let metric: Metric = str_arg(metric, "metric")?.parse()?;
        let config = SimulationConfig::new(trials, seed);
        let r = simulate_points(std::slice::from_ref(&(*scenario).params), &[metric], &config)?[0][0];
        *estimate = r.estimate;
        *ci_halfwidth = r.ci_halfwidth;
        Ok(())
    })
}
