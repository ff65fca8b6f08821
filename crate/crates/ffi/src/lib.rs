//! C ABI over the strongnil engine.
//!
//! Objects are opaque handles built from the same JSON documents the CLI
//! reads. Every call returns a [`StrongnilStatus`]; on failure a message is
//! available from [`strongnil_last_error`] on the same thread. Reports come
//! back as NUL-terminated JSON owned by the caller and released with
//! [`strongnil_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use strongnil::input::{load_map_json, load_matrix_json, LoadedMatrix, MatrixInput};
use strongnil::{fixtures, limits, report, Error, PolyMap};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrongnilStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, unknown variable, shape or parse error.
    InvalidInput = 3,
    /// Well-formed input the requested operation does not apply to.
    Precondition = 4,
    /// The term cap set by `STRONGNIL_MAX_TERMS` was exceeded.
    TermLimit = 5,
    /// Cross-checks disagreed or the engine panicked.
    Internal = 6,
    /// Fixture suite ran but some verdict did not match.
    Mismatch = 7,
}

/// Square polynomial matrix over Q or Q[eps].
pub struct StrongnilMatrix {
    inner: LoadedMatrix,
}

/// Polynomial map x -> H(x) over Q.
pub struct StrongnilMap {
    inner: PolyMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(StrongnilStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Precondition(_) | Error::Singular | Error::DependentVectors => StrongnilStatus::Precondition,
            Error::Inconsistent(_) => StrongnilStatus::Internal,
            _ => StrongnilStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(StrongnilStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f` with panics and term-cap unwinds turned into status codes.
fn ffi_call(f: impl FnOnce() -> Result<(), Failure>) -> StrongnilStatus {
    limits::install_quiet_hook();
    let outcome = catch_unwind(AssertUnwindSafe(|| limits::guard(f)));
    let failure = match outcome {
        Ok(Ok(Ok(()))) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            return StrongnilStatus::Ok;
        }
        Ok(Ok(Err(f))) => f,
        Ok(Err(cap)) => {
            Failure(StrongnilStatus::TermLimit, format!("term limit {} exceeded ({} terms)", cap.limit, cap.reached))
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            Failure(StrongnilStatus::Internal, format!("panic: {msg}"))
        }
    };
    set_error(failure.1);
    failure.0
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(StrongnilStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_json(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string(v).expect("report serializes");
    *out = CString::new(text).expect("JSON has no NUL").into_raw();
    Ok(())
}

unsafe fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = ptr::null_mut();
    Ok(())
}

unsafe fn matrix_ref<'a>(m: *const StrongnilMatrix) -> Result<&'a StrongnilMatrix, Failure> {
    m.as_ref().ok_or_else(|| null("matrix"))
}

unsafe fn map_ref<'a>(h: *const StrongnilMap) -> Result<&'a StrongnilMap, Failure> {
    h.as_ref().ok_or_else(|| null("map"))
}

fn opt(v: u32) -> Option<usize> {
    (v != 0).then_some(v as usize)
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn strongnil_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn strongnil_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn strongnil_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a matrix document `{"n", "m", "M", "ring"}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_from_json(
    json: *const c_char,
    out: *mut *mut StrongnilMatrix,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let inner = load_matrix_json(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(StrongnilMatrix { inner }));
        Ok(())
    })
}

/// Built-in fixture by name. Map fixtures give their Jacobian, the free
/// fixture its commutative image. `d` and `m`
/// parametrize H5 and DUAL; 0 picks the default.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_from_fixture(
    name: *const c_char,
    d: u32,
    m: u32,
    out: *mut *mut StrongnilMatrix,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let f = fixtures::fixture(read_str(name, "name")?, opt(d).map(|d| d as u32), opt(m))?;
        let inner = match f.subject {
            fixtures::Subject::Dual(m) => LoadedMatrix::Dual(m),
            other => LoadedMatrix::Rational(other.rational_matrix().expect("not a dual fixture")),
        };
        *out = Box::into_raw(Box::new(StrongnilMatrix { inner }));
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_free(m: *mut StrongnilMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Matrix size.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_size(m: *const StrongnilMatrix, out: *mut usize) -> StrongnilStatus {
    ffi_call(|| {
        let m = matrix_ref(m)?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = match &m.inner {
            LoadedMatrix::Rational(p) => p.rows(),
            LoadedMatrix::Dual(p) => p.rows(),
        };
        Ok(())
    })
}

/// Nilpotency and strong nilpotency indices. Over Q, an index of 0 means
/// "not nilpotent". Over Q[eps] the strong index is searched up to
/// `max_r` tuples (0 picks the default bound) and 0 means none was found.
///
/// # Safety
/// `m` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_indices(
    m: *const StrongnilMatrix,
    max_r: u32,
    regular: *mut usize,
    strong: *mut usize,
) -> StrongnilStatus {
    ffi_call(|| {
        let m = matrix_ref(m)?;
        let regular = regular.as_mut().ok_or_else(|| null("regular"))?;
        let strong = strong.as_mut().ok_or_else(|| null("strong"))?;
        let v = match &m.inner {
            LoadedMatrix::Rational(p) => report::matrix_report(p, None)?,
            LoadedMatrix::Dual(p) => report::dual_matrix_report(p, opt(max_r))?,
        };
        let index = |key: &str| v[key].as_u64().map_or(0, |i| i as usize);
        *regular = index("regular");
        *strong = index("strong");
        Ok(())
    })
}

/// Full JSON report, as printed by `strongnil analyze-matrix`. `r` selects
/// a tuple-product check (0 for none over Q) or the search bound over Q[eps].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_report(
    m: *const StrongnilMatrix,
    r: u32,
    out: *mut *mut c_char,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let v = match &matrix_ref(m)?.inner {
            LoadedMatrix::Rational(p) => report::matrix_report(p, opt(r))?,
            LoadedMatrix::Dual(p) => report::dual_matrix_report(p, opt(r))?,
        };
        write_json(out, &v)
    })
}

/// Triangularization certificate or witness as JSON. Over Q only.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_triangularize(
    m: *const StrongnilMatrix,
    out: *mut *mut c_char,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        match &matrix_ref(m)?.inner {
            LoadedMatrix::Rational(p) => write_json(out, &report::triangularize_report(p)?),
            LoadedMatrix::Dual(_) => {
                Err(Failure(StrongnilStatus::Precondition, "triangularization needs a matrix over Q".into()))
            }
        }
    })
}

/// The matrix as a JSON document accepted by `strongnil_matrix_from_json`.
/// `n` is the variable count written to the document.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_matrix_to_json(
    m: *const StrongnilMatrix,
    n: usize,
    out: *mut *mut c_char,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let doc = match &matrix_ref(m)?.inner {
            LoadedMatrix::Rational(p) => MatrixInput::from_matrix(p, n),
            LoadedMatrix::Dual(p) => MatrixInput::from_matrix(p, n),
        };
        write_json(out, &serde_json::to_value(doc).expect("document serializes"))
    })
}

/// Parses a map document `{"n", "H"}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_map_from_json(json: *const c_char, out: *mut *mut StrongnilMap) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let inner = load_map_json(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(StrongnilMap { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn strongnil_map_free(h: *mut StrongnilMap) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Jacobian of the map as a new matrix handle.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_map_jacobian(
    h: *const StrongnilMap,
    out: *mut *mut StrongnilMatrix,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let inner = LoadedMatrix::Rational(map_ref(h)?.inner.jacobian());
        *out = Box::into_raw(Box::new(StrongnilMatrix { inner }));
        Ok(())
    })
}

/// Map report as printed by `strongnil analyze-map`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_map_report(h: *const StrongnilMap, out: *mut *mut c_char) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        write_json(out, &report::map_report(&map_ref(h)?.inner)?)
    })
}

/// Quasi-translation checks as printed by `strongnil check-qt`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_map_check_qt(h: *const StrongnilMap, out: *mut *mut c_char) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        write_json(out, &report::qt_report(&map_ref(h)?.inner)?)
    })
}

/// The four equivalent statements for tuple count `r` (0 picks the strong
/// index, or n). `statement` 1..=4 checks one statement, 0 checks all.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_map_equivalences(
    h: *const StrongnilMap,
    r: u32,
    statement: u8,
    out: *mut *mut c_char,
) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        if statement > 4 {
            return Err(Failure(StrongnilStatus::InvalidInput, format!("statement {statement} not in 0..=4")));
        }
        let statement = (statement != 0).then_some(statement);
        write_json(out, &report::cor22_report(&map_ref(h)?.inner, opt(r), statement)?)
    })
}

/// Runs the built-in fixture corpus. Returns `Mismatch` (with the report
/// still written) when any verdict differs from its expectation.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_run_fixtures(out: *mut *mut c_char) -> StrongnilStatus {
    let mut all_pass = true;
    let status = ffi_call(|| {
        check_out(out)?;
        let rep = fixtures::run_fixture_suite()?;
        all_pass = rep.all_pass;
        write_json(out, &serde_json::to_value(&rep).expect("suite report serializes"))
    });
    if status == StrongnilStatus::Ok && !all_pass {
        set_error("fixture verdicts differ from expectations".into());
        return StrongnilStatus::Mismatch;
    }
    status
}

/// Noncommutative check. With `json` NULL, reports the built-in
/// non-homogeneous counterexample; otherwise reads a matrix document whose
/// entries are noncommutative polynomials.
///
/// # Safety
/// `json` must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strongnil_nc_check(json: *const c_char, out: *mut *mut c_char) -> StrongnilStatus {
    ffi_call(|| {
        check_out(out)?;
        let v = if json.is_null() {
            report::nc_counterexample()
        } else {
            let m = MatrixInput::from_json(read_str(json, "json")?)?.load_free()?;
            report::nc_report(&m)?
        };
        write_json(out, &v)
    })
}
