//! C ABI over `wildram`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every function returns a
//! [`WrStatus`]; on failure the message is kept per thread and can be
//! copied out with [`wr_last_error`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wildram::coeff::Fp;
use wildram::error::Error;
use wildram::harness::{parse_series_spec, run_suite, ParsedSeries, SeriesSpec, SuiteParams, SuiteReport};
use wildram::residue::{iterative_residue, pind_laurent, smallest_index_j, SmallestIndex};
use wildram::series::Order;
use wildram::wild::{lower_ramification, normal_form, WildSeries};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvariantViolation = 4,
    InsufficientPrecision = 5,
    PreconditionViolation = 6,
    UnknownSuite = 7,
    WrongInputKind = 8,
    BufferTooSmall = 9,
    ComputationError = 10,
    Panic = 11,
}

/// A wild series over `F_p`.
pub struct WrSeries {
    inner: WildSeries<Fp>,
}

/// The outcome of a verification suite.
pub struct WrReport {
    inner: SuiteReport,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> WrStatus {
    match e {
        Error::ParseError { .. } | Error::NotPrime(_) => WrStatus::ParseError,
        Error::InvariantViolation(_) => WrStatus::InvariantViolation,
        Error::InsufficientPrecision { .. } => WrStatus::InsufficientPrecision,
        Error::PreconditionViolation(_) | Error::EvenCharacteristic | Error::PrecedingIndexNonzero(_) => {
            WrStatus::PreconditionViolation
        }
        Error::UnknownSuite(_) => WrStatus::UnknownSuite,
        _ => WrStatus::ComputationError,
    }
}

fn fail(status: WrStatus, msg: impl Into<String>) -> WrStatus {
    set_error(msg);
    status
}

/// Run `body`, mapping errors and panics to status codes.
fn guard(body: impl FnOnce() -> Result<(), WrStatus>) -> WrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WrStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(WrStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, WrStatus>;
}

impl<T> OrStatus<T> for wildram::error::Result<T> {
    fn or_status(self) -> Result<T, WrStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, WrStatus> {
    if s.is_null() {
        return Err(fail(WrStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(WrStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, WrStatus> {
    h.as_ref().ok_or_else(|| fail(WrStatus::NullPointer, "handle is null"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, WrStatus> {
    p.as_mut().ok_or_else(|| fail(WrStatus::NullPointer, "output pointer is null"))
}

/// Copy `text` plus a NUL into `buf`; `needed` receives the full size.
unsafe fn copy_out(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), WrStatus> {
    let size = text.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || cap < size {
        return Err(WrStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// A static, NUL-terminated description of `status`.
#[no_mangle]
pub extern "C" fn wr_status_str(status: WrStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        WrStatus::Ok => b"ok\0",
        WrStatus::NullPointer => b"null pointer\0",
        WrStatus::InvalidUtf8 => b"invalid UTF-8\0",
        WrStatus::ParseError => b"parse error\0",
        WrStatus::InvariantViolation => b"invariant violation\0",
        WrStatus::InsufficientPrecision => b"insufficient precision\0",
        WrStatus::PreconditionViolation => b"precondition violation\0",
        WrStatus::UnknownSuite => b"unknown suite\0",
        WrStatus::WrongInputKind => b"wrong input kind\0",
        WrStatus::BufferTooSmall => b"buffer too small\0",
        WrStatus::ComputationError => b"computation error\0",
        WrStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `needed` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn wr_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> WrStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match copy_out(&msg, buf, cap, needed) {
        Ok(()) => WrStatus::Ok,
        Err(s) => s,
    }
}

/// Parse a JSON series spec over `F_p` into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_series` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_from_json(json: *const c_char, out_series: *mut *mut WrSeries) -> WrStatus {
    guard(|| {
        let text = str_arg(json)?;
        let slot = out(out_series)?;
        *slot = ptr::null_mut();
        match parse_series_spec(text).or_status()? {
            ParsedSeries::Wild(inner) => {
                *slot = Box::into_raw(Box::new(WrSeries { inner }));
                Ok(())
            }
            ParsedSeries::Valued(_) => Err(fail(WrStatus::WrongInputKind, "valued specs are not series over F_p")),
        }
    })
}

/// Release a series handle. Null is ignored.
///
/// # Safety
/// `series` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wr_series_free(series: *mut WrSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Serialize a series back to its JSON spec.
///
/// # Safety
/// `series` must be a live handle; `buf`/`needed` as for [`wr_last_error`].
#[no_mangle]
pub unsafe extern "C" fn wr_series_to_json(
    series: *const WrSeries,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        copy_out(&SeriesSpec::from_wild(&s.inner).to_json(), buf, cap, needed)
    })
}

/// The characteristic `p` and the precision of a series.
///
/// # Safety
/// `series` must be a live handle; the outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_info(series: *const WrSeries, p: *mut u32, prec: *mut usize) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        *out(p)? = s.inner.characteristic();
        *out(prec)? = s.inner.prec();
        Ok(())
    })
}

/// `q = mult(f) - 1`.
///
/// # Safety
/// `series` must be a live handle; `q` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_q(series: *const WrSeries, q: *mut usize) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        *out(q)? = s.inner.q_or_err().or_status()?;
        Ok(())
    })
}

/// `pind_j(f)` as an integer in `[0, p)`.
///
/// # Safety
/// `series` must be a live handle; `value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_pind(series: *const WrSeries, j: usize, value: *mut u32) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        *out(value)? = pind_laurent(&s.inner, j).or_status()?.value();
        Ok(())
    })
}

/// `resit(f)`; requires odd `p`.
///
/// # Safety
/// `series` must be a live handle; `value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_resit(series: *const WrSeries, value: *mut u32) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        if s.inner.characteristic() == 2 {
            return Err(fail(WrStatus::PreconditionViolation, Error::EvenCharacteristic.to_string()));
        }
        *out(value)? = iterative_residue(&s.inner).or_status()?.value();
        Ok(())
    })
}

/// The least `j` with `pind_j != 0`, or 0 if every `pind_j` vanishes.
///
/// # Safety
/// `series` must be a live handle; `j` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_smallest_index(series: *const WrSeries, j: *mut usize) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        *out(j)? = match smallest_index_j(&s.inner).or_status()? {
            SmallestIndex::Some(j) => j,
            SmallestIndex::NoneUpTo(_) => 0,
        };
        Ok(())
    })
}

/// Fill `values[0..=n_max]` with `i_0..i_{n_max}` and `exact[n]` with 1 when
/// `i_n` is resolved (otherwise `values[n]` is a lower bound). Both arrays
/// must hold `n_max + 1` entries.
///
/// # Safety
/// `values` and `exact` must be valid for `n_max + 1` writes.
#[no_mangle]
pub unsafe extern "C" fn wr_series_ramification(
    series: *const WrSeries,
    n_max: usize,
    values: *mut u64,
    exact: *mut u8,
) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        if values.is_null() || exact.is_null() {
            return Err(fail(WrStatus::NullPointer, "output array is null"));
        }
        let prof = lower_ramification(&s.inner, n_max).or_status()?;
        for (n, order) in prof.orders().into_iter().enumerate() {
            let (v, e) = match order {
                Order::Finite(k) => (k, 1),
                Order::AtLeast(k) => (k, 0),
            };
            *values.add(n) = v as u64;
            *exact.add(n) = e;
        }
        Ok(())
    })
}

/// Conjugate to the normal form for index `j`; the result is a new handle.
///
/// # Safety
/// `series` must be a live handle; `out_series` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wr_series_normal_form(
    series: *const WrSeries,
    j: usize,
    out_series: *mut *mut WrSeries,
) -> WrStatus {
    guard(|| {
        let s = handle(series)?;
        let slot = out(out_series)?;
        *slot = ptr::null_mut();
        let (g, _) = normal_form(&s.inner, j).or_status()?;
        *slot = Box::into_raw(Box::new(WrSeries { inner: g }));
        Ok(())
    })
}

/// Run a verification suite. `params_json` may be null for defaults, or a
/// JSON object with any of `p`, `q`, `q_max`, `n_max`, `samples`, `cases`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params_json` null or one, and
/// `out_report` valid.
#[no_mangle]
pub unsafe extern "C" fn wr_run_suite(
    name: *const c_char,
    seed: u64,
    params_json: *const c_char,
    out_report: *mut *mut WrReport,
) -> WrStatus {
    guard(|| {
        let name = str_arg(name)?;
        let slot = out(out_report)?;
        *slot = ptr::null_mut();
        let params: SuiteParams = if params_json.is_null() {
            SuiteParams::default()
        } else {
            serde_json::from_str(str_arg(params_json)?).map_err(|e| fail(WrStatus::ParseError, e.to_string()))?
        };
        let inner = run_suite(name, seed, &params).or_status()?;
        let json = inner.to_json();
        *slot = Box::into_raw(Box::new(WrReport { inner, json }));
        Ok(())
    })
}

/// Sample, pass and fail counts; `all_passed` is 1 when nothing failed.
///
/// # Safety
/// `report` must be a live handle; null outputs are skipped.
#[no_mangle]
pub unsafe extern "C" fn wr_report_counts(
    report: *const WrReport,
    samples: *mut usize,
    pass: *mut usize,
    fail_count: *mut usize,
    all_passed: *mut u8,
) -> WrStatus {
    guard(|| {
        let r = &handle(report)?.inner;
        if let Some(s) = samples.as_mut() {
            *s = r.samples;
        }
        if let Some(s) = pass.as_mut() {
            *s = r.pass;
        }
        if let Some(s) = fail_count.as_mut() {
            *s = r.fail;
        }
        if let Some(s) = all_passed.as_mut() {
            *s = u8::from(r.all_passed());
        }
        Ok(())
    })
}

/// Copy the report's JSON into `buf`. Call with a null `buf` to size it.
///
/// # Safety
/// `report` must be a live handle; `buf`/`needed` as for [`wr_last_error`].
#[no_mangle]
pub unsafe extern "C" fn wr_report_json(
    report: *const WrReport,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> WrStatus {
    guard(|| {
        let r = handle(report)?;
        copy_out(&r.json, buf, cap, needed)
    })
}

/// Release a report handle. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wr_report_free(report: *mut WrReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
