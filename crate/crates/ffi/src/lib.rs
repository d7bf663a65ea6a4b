//! C ABI over `birkhoff_heinz`.
//!
//! Norms are opaque `BhNorm` handles created by `bh_norm_from_spec` or
//! `bh_norm_from_alias` and released with `bh_norm_free`. Every fallible
//! call returns a `BhStatus`; `bh_last_error_message` holds the message from
//! the most recent call on the calling thread (empty after a success).
//! Strings returned through out-parameters are owned by the caller and
//! released with `bh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use birkhoff_heinz::birkhoff;
use birkhoff_heinz::constants::{heinz_mean, ConstantError, ConstantKind, Estimator, GridParams};
use birkhoff_heinz::norm::{norm_from_alias, Norm};
use birkhoff_heinz::norm_spec::{parse_norm_spec, SpecError};
use birkhoff_heinz::verify::{run_checks, VerifyError};
use birkhoff_heinz::Point2;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidNorm = 4,
    InvalidArgument = 5,
    EstimatorError = 6,
    Panic = 7,
}

/// Opaque norm handle.
pub struct BhNorm {
    norm: Norm,
}

/// Grid parameters; obtain defaults from `bh_grid_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BhGrid {
    pub theta_count: u32,
    pub psi_scan: u32,
    pub refinement_levels: u32,
    pub scan_tol: f64,
    pub admit_tol: f64,
    pub value_tol: f64,
}

/// A constant estimate with its witness pair, given by sphere angles.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BhEstimate {
    pub value: f64,
    pub theta_x: f64,
    pub theta_y: f64,
    pub defect: f64,
}

impl From<BhGrid> for GridParams {
    fn from(g: BhGrid) -> Self {
        GridParams {
            theta_count: g.theta_count as usize,
            psi_scan: g.psi_scan as usize,
            refinement_levels: g.refinement_levels as usize,
            scan_tol: g.scan_tol,
            admit_tol: g.admit_tol,
            value_tol: g.value_tol,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(BhStatus, String);

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        let status = match e {
            SpecError::Parse { .. } => BhStatus::ParseError,
            SpecError::Validation(_) => BhStatus::InvalidNorm,
        };
        Failure(status, e.to_string())
    }
}

impl From<ConstantError> for Failure {
    fn from(e: ConstantError) -> Self {
        let status = match e {
            ConstantError::Domain(_) | ConstantError::InvalidGrid(_) => BhStatus::InvalidArgument,
            _ => BhStatus::EstimatorError,
        };
        Failure(status, e.to_string())
    }
}

impl From<birkhoff::BirkhoffError> for Failure {
    fn from(e: birkhoff::BirkhoffError) -> Self {
        Failure(BhStatus::InvalidArgument, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Constant(c) => c.into(),
            other => Failure(BhStatus::InvalidArgument, other.to_string()),
        }
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `body`, recording errors and converting panics to `BhStatus::Panic`.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> BhStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            BhStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {message}"));
            BhStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(BhStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(BhStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn norm_ref<'a>(p: *const BhNorm) -> Result<&'a Norm, Failure> {
    p.as_ref().map(|h| &h.norm).ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn grid_or_default(grid: *const BhGrid) -> GridParams {
    grid.as_ref().map(|g| GridParams::from(*g)).unwrap_or_default()
}

fn boxed(norm: Norm) -> *mut BhNorm {
    Box::into_raw(Box::new(BhNorm { norm }))
}

/// Parses norm text (`kind=... key=value ...`) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_norm_from_spec(text: *const c_char, out: *mut *mut BhNorm) -> BhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let norm = parse_norm_spec(read_str(text)?)?;
        write_out(out, boxed(norm))
    })
}

/// Builds a handle from a built-in alias such as `"hexagon"` or `"lp:4"`.
///
/// # Safety
/// `alias` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_norm_from_alias(alias: *const c_char, out: *mut *mut BhNorm) -> BhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let name = read_str(alias)?;
        let norm = norm_from_alias(name)
            .ok_or_else(|| Failure(BhStatus::InvalidArgument, format!("unknown norm alias `{name}`")))?
            .map_err(|e| Failure(BhStatus::InvalidNorm, e.to_string()))?;
        write_out(out, boxed(norm))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `norm` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bh_norm_free(norm: *mut BhNorm) {
    if !norm.is_null() {
        drop(Box::from_raw(norm));
    }
}

/// `‖(x, y)‖`.
///
/// # Safety
/// `norm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_norm_evaluate(norm: *const BhNorm, x: f64, y: f64, out: *mut f64) -> BhStatus {
    guard(|| {
        let n = norm_ref(norm)?;
        let p = Point2::new(x, y);
        if !p.is_finite() {
            return Err(Failure(
                BhStatus::InvalidArgument,
                "non-finite coordinates".into(),
            ));
        }
        write_out(out, n.evaluate(p))
    })
}

/// Birkhoff orthogonality defect `‖x‖ − min_λ ‖x + λy‖`.
///
/// # Safety
/// `norm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_defect(
    norm: *const BhNorm,
    x1: f64,
    x2: f64,
    y1: f64,
    y2: f64,
    out: *mut f64,
) -> BhStatus {
    guard(|| {
        let n = norm_ref(norm)?;
        let d = birkhoff::defect(n, Point2::new(x1, x2), Point2::new(y1, y2))?;
        write_out(out, d)
    })
}

/// `(a^ν b^{1−ν} + a^{1−ν} b^ν) / 2` for `a, b > 0`, `ν ∈ [0, 1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_heinz_mean(a: f64, b: f64, nu: f64, out: *mut f64) -> BhStatus {
    guard(|| write_out(out, heinz_mean(a, b, nu)?))
}

#[no_mangle]
pub extern "C" fn bh_grid_default() -> BhGrid {
    let g = GridParams::default();
    BhGrid {
        theta_count: g.theta_count as u32,
        psi_scan: g.psi_scan as u32,
        refinement_levels: g.refinement_levels as u32,
        scan_tol: g.scan_tol,
        admit_tol: g.admit_tol,
        value_tol: g.value_tol,
    }
}

/// Estimates the constant named by `kind` (`"H"`, `"J_B"`, `"A2_B"`,
/// `"delta_B"`, `"rho_B"`, `"mu_B"`, `"J"`, `"S"`, `"A2"`). `nu` is used only
/// for `"H"`. A null `grid` means the default grid.
///
/// # Safety
/// `norm` must be a live handle, `kind` a NUL-terminated string, `grid` null
/// or readable, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bh_estimate(
    norm: *const BhNorm,
    kind: *const c_char,
    nu: f64,
    grid: *const BhGrid,
    out: *mut BhEstimate,
) -> BhStatus {
    guard(|| {
        let n = norm_ref(norm)?;
        let tag = read_str(kind)?;
        let kind = ConstantKind::from_tag(tag, nu)
            .ok_or_else(|| Failure(BhStatus::InvalidArgument, format!("unknown constant `{tag}`")))??;
        if out.is_null() {
            return Err(null());
        }
        let e = Estimator::new(n, grid_or_default(grid))?.estimate(kind)?;
        write_out(
            out,
            BhEstimate {
                value: e.value,
                theta_x: e.witness.x.angle,
                theta_y: e.witness.y.angle,
                defect: e.witness.defect,
            },
        )
    })
}

/// Largest reverse defect over sampled orthogonal pairs; near zero exactly
/// on Radon planes.
///
/// # Safety
/// `norm` must be a live handle, `grid` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bh_radon_defect(
    norm: *const BhNorm,
    grid: *const BhGrid,
    out: *mut f64,
) -> BhStatus {
    guard(|| {
        let n = norm_ref(norm)?;
        if out.is_null() {
            return Err(null());
        }
        let d = Estimator::new(n, grid_or_default(grid))?.radon_defect()?;
        write_out(out, d)
    })
}

/// Runs the inequality catalog for `nu_count` values of ν and returns the
/// JSON report in `*out_json`. `*all_passed` receives 1 or 0 when non-null.
///
/// # Safety
/// `norm` must be a live handle, `nus` must point to `nu_count` doubles,
/// `grid` null or readable, `out_json` writable; `all_passed` may be null.
#[no_mangle]
pub unsafe extern "C" fn bh_verify_json(
    norm: *const BhNorm,
    nus: *const f64,
    nu_count: usize,
    grid: *const BhGrid,
    out_json: *mut *mut c_char,
    all_passed: *mut i32,
) -> BhStatus {
    guard(|| {
        let n = norm_ref(norm)?;
        if nus.is_null() || out_json.is_null() {
            return Err(null());
        }
        let nus = std::slice::from_raw_parts(nus, nu_count);
        let report = run_checks(n, nus, &grid_or_default(grid))?;
        let json = CString::new(report.to_json()).expect("JSON has no interior NUL");
        if !all_passed.is_null() {
            all_passed.write(i32::from(report.all_passed()));
        }
        write_out(out_json, json.into_raw())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Error message from the most recent call on this thread; empty after a
/// success. The pointer is valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Canonical norm text for a handle, returned in `*out`.
///
/// # Safety
/// `norm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bh_norm_spec_string(norm: *const BhNorm, out: *mut *mut c_char) -> BhStatus {
    guard(|| {
        let n = norm_ref(norm)?;
        let s = CString::new(n.to_spec_string()).expect("spec has no interior NUL");
        write_out(out, s.into_raw())
    })
}
