//! C ABI for the core library: opaque model handles, status codes, and
//! flat-double reports, so other languages can bind without Rust types.
//!
//! Every entry point is panic-safe (unwinding is caught and mapped to
//! `DP_STATUS_INTERNAL`) and null-tolerant. The header is generated into
//! `include/dicke_probe.h` at build time.

use std::ffi::{c_char, c_double, c_int, c_uint, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use dicke_probe::dicke::ModelParams;
use dicke_probe::discrimination::{
    helstrom_single_mode, helstrom_two_mode, DiscriminationOptions,
};
use dicke_probe::error::Error;
use dicke_probe::estimation::{
    estimation_report, EstimationOptions, PcOptions,
};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DpStatus {
    DpStatusOk = 0,
    DpStatusNullPointer = 1,
    DpStatusInvalidArgument = 2,
    DpStatusUnstable = 3,
    DpStatusNotConverged = 4,
    DpStatusInternal = 5,
}

fn status_of(e: &Error) -> DpStatus {
    match e {
        Error::InvalidParams(_) | Error::Config(_) | Error::LossOutOfRange(_) => {
            DpStatus::DpStatusInvalidArgument
        }
        Error::Unstable { .. } => DpStatus::DpStatusUnstable,
        Error::CutoffTooSmall { .. } | Error::NotConverged(_) | Error::StepExceedsMargin { .. } => {
            DpStatus::DpStatusNotConverged
        }
        _ => DpStatus::DpStatusInternal,
    }
}

/// Opaque model handle; create with `dp_model_new`, release with
/// `dp_model_free`.
pub struct DpModel {
    params: ModelParams,
}

/// Flat estimation report; every field is a double so the layout is
/// language-agnostic. `f_photon_counting` is NaN when photon counting was
/// skipped.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct DpEstimationReport {
    pub h_two_mode: c_double,
    pub h_single_mode: c_double,
    pub f_homodyne: c_double,
    pub f_photon_counting: c_double,
    pub optimal_homodyne_angle: c_double,
    pub n_thermal: c_double,
    pub squeezing_r: c_double,
    pub pc_cutoff: c_double,
    pub pc_converged: c_double,
}

fn guarded<F: FnOnce() -> DpStatus>(f: F) -> DpStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(DpStatus::DpStatusInternal)
}

/// Creates a model handle. Fails on non-positive frequencies or a negative
/// coupling; stability is not required here (ground-state operations check it).
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_model_new(
    omega_a: c_double,
    omega_b: c_double,
    lambda: c_double,
    d: c_double,
    out: *mut *mut DpModel,
) -> DpStatus {
    if out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| match ModelParams::new(omega_a, omega_b, lambda, d) {
        Ok(params) => {
            unsafe { *out = Box::into_raw(Box::new(DpModel { params })) };
            DpStatus::DpStatusOk
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a handle returned by `dp_model_new` or `dp_model_dipole_gauge`.
/// Passing NULL is a no-op.
///
/// # Safety
/// `model` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn dp_model_free(model: *mut DpModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// New handle with the mode roles swapped (the electric-dipole-gauge reading).
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_model_dipole_gauge(
    model: *const DpModel,
    out: *mut *mut DpModel,
) -> DpStatus {
    if model.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| {
        let swapped = unsafe { &*model }.params.dipole_gauge_map();
        unsafe { *out = Box::into_raw(Box::new(DpModel { params: swapped })) };
        DpStatus::DpStatusOk
    })
}

/// Stability threshold d_crit = λ²/ω_b − ω_a/4. Returns NaN on NULL.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_d_crit(model: *const DpModel) -> c_double {
    if model.is_null() {
        return f64::NAN;
    }
    unsafe { &*model }.params.d_crit()
}

/// Sum-rule value d_TRK = λ²/ω_b. Returns NaN on NULL.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_d_trk(model: *const DpModel) -> c_double {
    if model.is_null() {
        return f64::NAN;
    }
    unsafe { &*model }.params.d_trk()
}

/// Critical coupling λ_crit = √(ω_a ω_b)/2 of the D = 0 model. Returns NaN on
/// NULL.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_lambda_crit(model: *const DpModel) -> c_double {
    if model.is_null() {
        return f64::NAN;
    }
    unsafe { &*model }.params.lambda_crit()
}

unsafe fn eval_to_out(
    model: *const DpModel,
    out: *mut c_double,
    f: impl FnOnce(&ModelParams) -> Result<f64, Error>,
) -> DpStatus {
    if model.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| match f(&unsafe { &*model }.params) {
        Ok(v) => {
            unsafe { *out = v };
            DpStatus::DpStatusOk
        }
        Err(e) => status_of(&e),
    })
}

/// Two-mode quantum Fisher information H(D) of the ground state.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_qfi_two_mode(model: *const DpModel, out: *mut c_double) -> DpStatus {
    unsafe { eval_to_out(model, out, |p| dicke_probe::estimation::qfi_two_mode(p)) }
}

/// Single-mode (reduced state of mode a) QFI H_a(D).
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_qfi_single_mode(
    model: *const DpModel,
    out: *mut c_double,
) -> DpStatus {
    unsafe { eval_to_out(model, out, |p| dicke_probe::estimation::qfi_single_mode(p)) }
}

/// Homodyne Fisher information at measurement angle `phi`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_homodyne_fi(
    model: *const DpModel,
    phi: c_double,
    out: *mut c_double,
) -> DpStatus {
    unsafe { eval_to_out(model, out, |p| dicke_probe::estimation::homodyne_fi(p, phi)) }
}

/// Photon-counting Fisher information. `max_cutoff` caps the Fock ladder
/// (pass 0 for the default ceiling); the cutoff actually used is returned in
/// `out_cutoff` when non-NULL.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable; `out_cutoff` may be
/// NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_photon_counting_fi(
    model: *const DpModel,
    max_cutoff: c_uint,
    out: *mut c_double,
    out_cutoff: *mut c_uint,
) -> DpStatus {
    if model.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| {
        let mut opts = PcOptions::default();
        if max_cutoff > 0 {
            opts.max_cutoff = max_cutoff as usize;
        }
        match dicke_probe::estimation::photon_counting_fi(&unsafe { &*model }.params, &opts) {
            Ok(est) => {
                unsafe {
                    *out = est.value;
                    if !out_cutoff.is_null() {
                        *out_cutoff = est.cutoff as c_uint;
                    }
                }
                DpStatus::DpStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Full estimation report. Set `include_photon_counting` to 0 to skip the
/// Fock-space part (its fields come back as NaN).
///
/// # Safety
/// `model` must be a live handle; `out` must point to a `DpEstimationReport`.
#[no_mangle]
pub unsafe extern "C" fn dp_estimation_report(
    model: *const DpModel,
    include_photon_counting: c_int,
    max_cutoff: c_uint,
    out: *mut DpEstimationReport,
) -> DpStatus {
    if model.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| {
        let mut opts = EstimationOptions {
            skip_photon_counting: include_photon_counting == 0,
            ..Default::default()
        };
        if max_cutoff > 0 {
            opts.pc.max_cutoff = max_cutoff as usize;
        }
        match estimation_report(&unsafe { &*model }.params, &opts) {
            Ok(r) => {
                unsafe {
                    *out = DpEstimationReport {
                        h_two_mode: r.h_two_mode,
                        h_single_mode: r.h_single_mode,
                        f_homodyne: r.f_homodyne,
                        f_photon_counting: r.f_photon_counting.unwrap_or(f64::NAN),
                        optimal_homodyne_angle: r.optimal_homodyne_angle,
                        n_thermal: r.reduced_state.n_thermal,
                        squeezing_r: r.reduced_state.r,
                        pc_cutoff: r.diagnostics.pc_cutoff.map_or(f64::NAN, |c| c as f64),
                        pc_converged: r
                            .diagnostics
                            .pc_converged
                            .map_or(f64::NAN, f64::from),
                    };
                }
                DpStatus::DpStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Ground-state covariance in the (x_a, y_a, x_b, y_b) basis, written
/// row-major into `out[16]`.
///
/// # Safety
/// `model` must be a live handle; `out` must point to 16 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dp_ground_state_covariance(
    model: *const DpModel,
    out: *mut c_double,
) -> DpStatus {
    if model.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(
        || match dicke_probe::dicke::ground_state_covariance(&unsafe { &*model }.params) {
            Ok(sigma) => {
                let m = sigma.matrix();
                for i in 0..4 {
                    for j in 0..4 {
                        unsafe { *out.add(i * 4 + j) = m[(i, j)] };
                    }
                }
                DpStatus::DpStatusOk
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Helstrom bound for discriminating the two handles' ground states
/// (collective two-mode measurement).
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_helstrom_two_mode(
    model0: *const DpModel,
    model1: *const DpModel,
    out: *mut c_double,
) -> DpStatus {
    if model0.is_null() || model1.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| {
        match helstrom_two_mode(&unsafe { &*model0 }.params, &unsafe { &*model1 }.params) {
            Ok(v) => {
                unsafe { *out = v };
                DpStatus::DpStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Helstrom bound on the reduced mode-a states, computed in a truncated Fock
/// space; `max_cutoff = 0` uses the default ceiling.
///
/// # Safety
/// Both handles must be live; `out` must be writable; `out_cutoff` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_helstrom_single_mode(
    model0: *const DpModel,
    model1: *const DpModel,
    max_cutoff: c_uint,
    out: *mut c_double,
    out_cutoff: *mut c_uint,
) -> DpStatus {
    if model0.is_null() || model1.is_null() || out.is_null() {
        return DpStatus::DpStatusNullPointer;
    }
    guarded(|| {
        let mut opts = DiscriminationOptions::default();
        if max_cutoff > 0 {
            opts.max_cutoff = max_cutoff as usize;
        }
        match helstrom_single_mode(
            &unsafe { &*model0 }.params,
            &unsafe { &*model1 }.params,
            &opts,
        ) {
            Ok(cv) => {
                unsafe {
                    *out = cv.value;
                    if !out_cutoff.is_null() {
                        *out_cutoff = cv.cutoff as c_uint;
                    }
                }
                DpStatus::DpStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Short human-readable description of a status code; static storage, do not
/// free.
#[no_mangle]
pub extern "C" fn dp_status_message(status: DpStatus) -> *const c_char {
    let msg: &'static str = match status {
        DpStatus::DpStatusOk => "ok\0",
        DpStatus::DpStatusNullPointer => "null pointer argument\0",
        DpStatus::DpStatusInvalidArgument => "invalid argument\0",
        DpStatus::DpStatusUnstable => "Hamiltonian unstable at these parameters\0",
        DpStatus::DpStatusNotConverged => "computation did not converge\0",
        DpStatus::DpStatusInternal => "internal error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn dp_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(env!("CARGO_PKG_VERSION")).unwrap())
        .as_ptr()
}

// keep the unused-import lint honest about ptr usage in docs/examples
const _: *const () = ptr::null();
