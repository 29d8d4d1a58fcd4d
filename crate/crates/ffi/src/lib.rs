//! C ABI for qbrackets: opaque series and report handles, integer status
//! codes, and heap strings released with [`qb_string_free`].
//!
//! Every entry point catches panics and reports them as
//! `QB_STATUS_PANIC`; the message of the most recent failure on the calling
//! thread is available from [`qb_last_error_message`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;
use qbrackets::arith::Prime;
use qbrackets::brackets::{calq, f_correction, Method};
use qbrackets::cli::{Document, SeriesDocument};
use qbrackets::jacobi::{verify_diffexp, verify_eq65, verify_prop21, verify_taylor_chain};
use qbrackets::modforms::{eisenstein, EisensteinVariant};
use qbrackets::report::{Claim, Verdict, VerificationReport};
use qbrackets::series::QExpansion;
use qbrackets::theorems;
use qbrackets::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidArgument = 2,
    NotApplicable = 3,
    Insufficient = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Opaque truncated q-expansion.
pub struct QbSeries {
    series: QExpansion,
    weight: Option<u32>,
}

/// Opaque verification report.
pub struct QbReport {
    report: VerificationReport,
}

/// Parameters for [`qb_verify`]. Zero means "not given" (or the default
/// truncation for `terms` and `units`).
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QbVerifyParams {
    pub p: u64,
    pub r: u32,
    pub k: u32,
    pub k1: u32,
    pub k2: u32,
    pub i_max: u32,
    pub terms: u32,
    pub units: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_for(e: &Error) -> QbStatus {
    match e {
        Error::InsufficientTruncation(_) | Error::NotIntegral { .. } | Error::NotIntegralTerm { .. } => {
            QbStatus::Insufficient
        }
        Error::NotQuasimodular { .. } => QbStatus::VerificationFailed,
        _ => QbStatus::InvalidArgument,
    }
}

fn guarded<F: FnOnce() -> Result<QbStatus, (QbStatus, String)>>(f: F) -> QbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QbStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (QbStatus, String) {
    (status_for(&e), e.to_string())
}

fn optional_prime(p: u64) -> Result<Option<Prime>, (QbStatus, String)> {
    if p == 0 {
        Ok(None)
    } else {
        Prime::new(p).map(Some).map_err(lib_err)
    }
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<QbStatus, (QbStatus, String)> {
    if out.is_null() {
        return Err((QbStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(QbStatus::Ok)
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// `calQ_k` (`p == 0`) or `calQ_k^(p)` through `q^terms`, by the closed
/// double-sum formula.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qb_calq(k: u32, terms: u32, p: u64, out: *mut *mut QbSeries) -> QbStatus {
    guarded(|| {
        let series = calq(k, terms, optional_prime(p)?, Method::Fast).map_err(lib_err)?;
        store(out, QbSeries { series, weight: Some(k) })
    })
}

/// Normalized Eisenstein series `E_k` through `q^terms`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qb_eisenstein(k: u32, terms: u32, out: *mut *mut QbSeries) -> QbStatus {
    guarded(|| {
        let series = eisenstein(k, terms, EisensteinVariant::E).map_err(lib_err)?;
        store(out, QbSeries { series, weight: Some(k) })
    })
}

/// The correction series `f_k^(p)` through `q^terms`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qb_correction(k: u32, p: u64, terms: u32, out: *mut *mut QbSeries) -> QbStatus {
    guarded(|| {
        let prime = optional_prime(p)?.ok_or((QbStatus::InvalidArgument, "p must be an odd prime".to_string()))?;
        let series = f_correction(k, prime, terms).map_err(lib_err)?;
        store(out, QbSeries { series, weight: None })
    })
}

/// Number of known coefficients (`q^0` up to `q^{n-1}`); 0 for null.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_series_len(series: *const QbSeries) -> u64 {
    series.as_ref().map_or(0, |s| s.series.known_q_powers())
}

/// Coefficient of `q^n` as "a" or "a/b"; null when out of range. Free with
/// [`qb_string_free`].
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_series_coefficient(series: *const QbSeries, n: u64) -> *mut c_char {
    match series.as_ref() {
        Some(s) if n < s.series.known_q_powers() => into_c_string(s.series.q_coefficient(n).to_string()),
        _ => ptr::null_mut(),
    }
}

/// JSON document for the series. Free with [`qb_string_free`].
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_series_to_json(series: *const QbSeries) -> *mut c_char {
    let Some(s) = series.as_ref() else {
        set_error("series handle is null");
        return ptr::null_mut();
    };
    match SeriesDocument::from_series(&s.series, s.weight, Default::default()) {
        Ok(doc) => into_c_string(Document::QExpansion(doc).to_json()),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_series_free(series: *mut QbSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

fn verify_claim(claim: Claim, p: &QbVerifyParams) -> qbrackets::Result<VerificationReport> {
    let or = |v: u32, default: u32| if v == 0 { default } else { v };
    let prime = || Prime::new(p.p);
    match claim {
        Claim::ThmA => theorems::check_thm_a(p.p, p.r, p.k1, p.k2, or(p.terms, 60)),
        Claim::ThmB => theorems::check_thm_b(p.p, p.k, p.i_max, or(p.terms, 50)),
        Claim::ThmC => theorems::check_thm_c(p.p, p.k),
        Claim::ThmE => theorems::check_thm_e(p.p, p.k, or(p.terms, 150)),
        Claim::SupportE => theorems::check_support_e(p.p, p.k, or(p.terms, 2000)),
        Claim::EqRemark => theorems::check_eq_remark(p.p, p.k, or(p.terms, 100)),
        Claim::Oracle => theorems::check_oracle(p.k, or(p.terms, 30), (p.p != 0).then_some(p.p)),
        Claim::Eq65 => verify_eq65(if p.units == 0 { 720 } else { p.units }),
        Claim::Prop21 => verify_prop21(prime()?, or(p.terms, 30)),
        Claim::Diffexp => verify_diffexp(prime()?, or(p.terms, 60)),
        Claim::TaylorChain => verify_taylor_chain(p.k, or(p.terms, 40)),
    }
}

/// Runs one check. Returns `QB_STATUS_OK`, `QB_STATUS_VERIFICATION_FAILED` or
/// `QB_STATUS_NOT_APPLICABLE` with a report handle, or an error status
/// without one.
///
/// # Safety
/// `claim` must be a NUL-terminated string, `params` null or valid, and
/// `out` a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qb_verify(
    claim: *const c_char,
    params: *const QbVerifyParams,
    out: *mut *mut QbReport,
) -> QbStatus {
    guarded(|| {
        if claim.is_null() {
            return Err((QbStatus::NullPointer, "claim is null".into()));
        }
        let name = CStr::from_ptr(claim).to_str().map_err(|_| (QbStatus::InvalidArgument, "claim is not UTF-8".to_string()))?;
        let claim: Claim = name.parse().map_err(lib_err)?;
        let params = params.as_ref().copied().unwrap_or_default();
        let report = verify_claim(claim, &params).map_err(lib_err)?;
        let status = match report.verdict {
            Verdict::Pass => QbStatus::Ok,
            Verdict::Fail => QbStatus::VerificationFailed,
            Verdict::NotApplicable => QbStatus::NotApplicable,
        };
        store(out, QbReport { report })?;
        Ok(status)
    })
}

/// JSON document for the report. Free with [`qb_string_free`].
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_report_to_json(report: *const QbReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => into_c_string(Document::Report(r.report.clone()).to_json()),
        None => {
            set_error("report handle is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_report_free(report: *mut QbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
