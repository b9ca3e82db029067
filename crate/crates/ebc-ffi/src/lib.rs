//! C ABI for the generalized Euler-Briggs constant library.
//!
//! Conventions:
//! - an opaque [`EbcContext`] carries precision and cache policy; create with
//!   [`ebc_context_new`], destroy with [`ebc_context_free`];
//! - every fallible call returns an [`EbcStatus`]; on failure,
//!   [`ebc_last_error`] returns a thread-local message valid until the next
//!   failing call on the same thread;
//! - numeric results are decimal strings allocated by the library; free them
//!   with [`ebc_string_free`]. Nothing crosses the boundary as a binary
//!   float.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::ptr;

use ebc::arith::{const_gamma, const_pi, PrecisionContext};
use ebc::cache::CacheConfig;
use ebc::cli::{run, Command, JobSpec, OutputFormat};
use ebc::constants::{
    direct_sum_oracle, gamma_omega_aq, verify_identity, EBCKey, Identity, PrimeSet,
};
use ebc::lfunctions::{l_one_digamma, l_one_series};
use ebc::relations::{
    find_integer_relation, irreducible_family_check, RelationQuery, RelationStatus, SetFamily,
    Witness,
};
use ebc::Error;

/// Status codes for every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EbcStatus {
    EbcOk = 0,
    /// Null pointer, unparsable string, or malformed request.
    EbcInvalidArgument = 1,
    /// Mathematically undefined or out-of-domain request.
    EbcDomainError = 2,
    /// The precision cannot support the requested relation height.
    EbcInsufficientPrecision = 3,
    /// Internal cross-check failure.
    EbcInternalError = 4,
}

/// Opaque evaluation context: precision plus cache policy.
pub struct EbcContext {
    ctx: PrecisionContext,
    cache: CacheConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> EbcStatus {
    match err {
        Error::Usage(_) | Error::InvalidQuery(_) | Error::UnknownIdentity(_) => {
            EbcStatus::EbcInvalidArgument
        }
        Error::InsufficientPrecision { .. } => EbcStatus::EbcInsufficientPrecision,
        Error::CrossCheckFailed(_) => EbcStatus::EbcInternalError,
        _ => EbcStatus::EbcDomainError,
    }
}

fn fail(err: Error) -> EbcStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

fn invalid(msg: &str) -> EbcStatus {
    set_error(msg.to_string());
    EbcStatus::EbcInvalidArgument
}

unsafe fn cstr<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

fn give_string(s: String, out: *mut *mut c_char) -> EbcStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            EbcStatus::EbcOk
        }
        Err(_) => invalid("result contained an interior NUL"),
    }
}

/// Library version string (static storage; do not free).
#[no_mangle]
pub extern "C" fn ebc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Last error message on this thread, or null. Valid until the next failing
/// call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ebc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.as_ptr(),
        None => ptr::null(),
    })
}

/// Creates a context with the given decimal precision (>= 10) and the
/// persistent cache disabled. Returns null on invalid precision.
#[no_mangle]
pub extern "C" fn ebc_context_new(digits: u32) -> *mut EbcContext {
    match PrecisionContext::new(digits) {
        Ok(ctx) => Box::into_raw(Box::new(EbcContext {
            ctx,
            cache: CacheConfig::disabled(),
        })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Like [`ebc_context_new`] but with the persistent digit cache enabled at
/// `cache_dir` (pass null for the platform default location).
///
/// # Safety
/// `cache_dir` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ebc_context_new_cached(
    digits: u32,
    cache_dir: *const c_char,
) -> *mut EbcContext {
    let dir = if cache_dir.is_null() {
        None
    } else {
        match cstr(cache_dir) {
            Some(s) => Some(PathBuf::from(s)),
            None => {
                set_error("cache_dir is not valid UTF-8".into());
                return ptr::null_mut();
            }
        }
    };
    match PrecisionContext::new(digits) {
        Ok(ctx) => Box::into_raw(Box::new(EbcContext {
            ctx,
            cache: CacheConfig::resolve(dir, false),
        })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Frees a context. Null is ignored.
///
/// # Safety
/// `ctx` must be null or a pointer returned by a context constructor, freed
/// at most once.
#[no_mangle]
pub unsafe extern "C" fn ebc_context_free(ctx: *mut EbcContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn ebc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

macro_rules! ctx_or_invalid {
    ($ctx:expr) => {
        match unsafe { $ctx.as_ref() } {
            Some(c) => c,
            None => return invalid("context pointer is null"),
        }
    };
}

fn parse_primes(spec: &str) -> Result<PrimeSet, Error> {
    let t = spec.trim();
    if t.is_empty() {
        return Ok(PrimeSet::empty());
    }
    let mut primes = Vec::new();
    for part in t.split(',') {
        primes.push(
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Usage(format!("'{part}' is not a positive integer")))?,
        );
    }
    PrimeSet::new(primes)
}

/// Euler's constant gamma as a decimal string.
///
/// # Safety
/// `ctx` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ebc_euler_gamma(ctx: *const EbcContext, out: *mut *mut c_char) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if out.is_null() {
        return invalid("out pointer is null");
    }
    match const_gamma(&c.ctx) {
        Ok(v) => give_string(v.to_decimal(), out),
        Err(e) => fail(e),
    }
}

/// Pi as a decimal string.
///
/// # Safety
/// `ctx` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ebc_pi(ctx: *const EbcContext, out: *mut *mut c_char) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if out.is_null() {
        return invalid("out pointer is null");
    }
    match const_pi(&c.ctx) {
        Ok(v) => give_string(v.to_decimal(), out),
        Err(e) => fail(e),
    }
}

/// gamma(Omega, a, q) through the closed form. `omega_csv` is a
/// comma-separated prime list ("" for the empty set).
///
/// # Safety
/// Pointer arguments must be valid; `omega_csv` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ebc_compute(
    ctx: *const EbcContext,
    omega_csv: *const c_char,
    a: u64,
    q: u64,
    out: *mut *mut c_char,
) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if out.is_null() {
        return invalid("out pointer is null");
    }
    let Some(spec) = cstr(omega_csv) else {
        return invalid("omega_csv is null or not UTF-8");
    };
    let omega = match parse_primes(spec) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let key = match EBCKey::new(omega, a, q) {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    match gamma_omega_aq(&key, &c.ctx) {
        Ok(v) => give_string(v.to_decimal(), out),
        Err(e) => fail(e),
    }
}

/// gamma(Omega, a, q) by the defining limit (any residue class). Writes the
/// value and the digits it is guaranteed to.
///
/// # Safety
/// Pointer arguments must be valid; `omega_csv` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ebc_oracle(
    ctx: *const EbcContext,
    omega_csv: *const c_char,
    a: u64,
    q: u64,
    out: *mut *mut c_char,
    achieved_digits: *mut u32,
) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if out.is_null() {
        return invalid("out pointer is null");
    }
    let Some(spec) = cstr(omega_csv) else {
        return invalid("omega_csv is null or not UTF-8");
    };
    let omega = match parse_primes(spec) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    match direct_sum_oracle(&omega, a, q, &c.ctx) {
        Ok(o) => {
            if !achieved_digits.is_null() {
                *achieved_digits = o.achieved_digits;
            }
            give_string(
                o.value.to_decimal_digits(o.achieved_digits.min(c.ctx.digits())),
                out,
            )
        }
        Err(e) => fail(e),
    }
}

/// L(1, chi) for the character of the given enumeration index mod q.
/// `use_series` selects the series oracle route instead of the digamma
/// closed form. Real and imaginary parts as decimal strings.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn ebc_l_value(
    ctx: *const EbcContext,
    q: u64,
    chi_index: u64,
    use_series: i32,
    out_re: *mut *mut c_char,
    out_im: *mut *mut c_char,
) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if out_re.is_null() || out_im.is_null() {
        return invalid("out pointer is null");
    }
    let chars = match ebc::characters::enumerate_characters(q) {
        Ok(ch) => ch,
        Err(e) => return fail(e),
    };
    let Some(chi) = chars.get(chi_index as usize) else {
        return invalid("character index out of range");
    };
    let l = if use_series != 0 {
        l_one_series(chi, &c.ctx)
    } else {
        l_one_digamma(chi, &c.ctx)
    };
    match l {
        Ok(l) => {
            let st = give_string(l.real.to_decimal(), out_re);
            if st != EbcStatus::EbcOk {
                return st;
            }
            give_string(l.imag.to_decimal(), out_im)
        }
        Err(e) => fail(e),
    }
}

/// Verifies one of the named identities (closed_form_vs_oracle,
/// diamond_ford, qq_identity) and reports pass/fail plus |lhs - rhs|.
///
/// # Safety
/// Pointer arguments must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ebc_verify(
    ctx: *const EbcContext,
    identity: *const c_char,
    omega_csv: *const c_char,
    a: u64,
    q: u64,
    pass: *mut i32,
    abs_diff_out: *mut *mut c_char,
) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    let Some(name) = cstr(identity) else {
        return invalid("identity is null or not UTF-8");
    };
    let Some(spec) = cstr(omega_csv) else {
        return invalid("omega_csv is null or not UTF-8");
    };
    let omega = match parse_primes(spec) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let id = match name {
        "closed_form_vs_oracle" => Identity::ClosedFormVsOracle { omega, a, q },
        "diamond_ford" => Identity::DiamondFord { omega },
        "qq_identity" => Identity::QqIdentity { omega, q },
        other => return fail(Error::UnknownIdentity(other.to_string())),
    };
    match verify_identity(&id, &c.ctx) {
        Ok(report) => {
            if !pass.is_null() {
                *pass = report.pass as i32;
            }
            if !abs_diff_out.is_null() {
                return give_string(report.abs_diff.to_decimal_digits(3), abs_diff_out);
            }
            EbcStatus::EbcOk
        }
        Err(e) => fail(e),
    }
}

/// PSLQ over `n` decimal-string values. On success writes `found` (0/1) and,
/// when found, the coefficient vector into `coeffs` (length `n`).
///
/// # Safety
/// `values` must point to `n` valid NUL-terminated strings; `coeffs` must
/// have room for `n` entries.
#[no_mangle]
pub unsafe extern "C" fn ebc_find_relation(
    ctx: *const EbcContext,
    values: *const *const c_char,
    n: usize,
    height: u64,
    coeffs: *mut i64,
    found: *mut i32,
) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if values.is_null() || coeffs.is_null() || found.is_null() {
        return invalid("values, coeffs and found must be non-null");
    }
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let p = *values.add(i);
        let Some(s) = cstr(p) else {
            return invalid("value string is null or not UTF-8");
        };
        match ebc::arith::BigReal::parse_decimal(s, c.ctx) {
            Ok(v) => entries.push((format!("x{i}"), v)),
            Err(e) => return fail(e),
        }
    }
    match find_integer_relation(&RelationQuery {
        entries,
        height,
    }) {
        Ok(result) => {
            match result.status {
                RelationStatus::Found => {
                    *found = 1;
                    let cs = result.coefficients.expect("found result has coefficients");
                    for (i, v) in cs.iter().enumerate() {
                        *coeffs.add(i) = *v;
                    }
                }
                RelationStatus::NoneBelowHeight => {
                    *found = 0;
                }
            }
            EbcStatus::EbcOk
        }
        Err(e) => fail(e),
    }
}

/// Irreducibility of a '|'-separated family, of prime sets ("2|3|2,3") or,
/// with `naturals != 0`, of positive integers ("6|10|15"). Writes the verdict
/// and a witness description.
///
/// # Safety
/// Pointer arguments must be valid; `family` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ebc_irreducible(
    family: *const c_char,
    naturals: i32,
    result: *mut i32,
    witness_out: *mut *mut c_char,
) -> EbcStatus {
    let Some(spec) = cstr(family) else {
        return invalid("family is null or not UTF-8");
    };
    if result.is_null() {
        return invalid("result pointer is null");
    }
    let fam = if naturals != 0 {
        let mut ns = Vec::new();
        for part in spec.split('|') {
            match part.trim().parse::<u64>() {
                Ok(n) => ns.push(n),
                Err(_) => return invalid("naturals must be positive integers"),
            }
        }
        SetFamily::Naturals(ns)
    } else {
        let mut sets = Vec::new();
        for part in spec.split('|') {
            match parse_primes(part) {
                Ok(s) => sets.push(s),
                Err(e) => return fail(e),
            }
        }
        SetFamily::PrimeSets(sets)
    };
    match irreducible_family_check(&fam) {
        Ok(report) => {
            *result = report.irreducible as i32;
            if !witness_out.is_null() {
                let text = match &report.witness {
                    Witness::Violator { member } => format!("{member} has no private prime"),
                    Witness::PrivatePrimes(assignment) => assignment
                        .iter()
                        .map(|(m, p)| format!("{m}:{p}"))
                        .collect::<Vec<_>>()
                        .join(","),
                };
                return give_string(text, witness_out);
            }
            EbcStatus::EbcOk
        }
        Err(e) => fail(e),
    }
}

/// Generic escape hatch: run any CLI-style job and return the JSON document.
/// `command` is one of compute|lvalue|chars|verify|pslq|probe|irreducible;
/// `params_json` is a flat JSON object of string parameters, or null.
///
/// # Safety
/// Pointer arguments must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ebc_run_json(
    ctx: *const EbcContext,
    command: *const c_char,
    params_json: *const c_char,
    out_json: *mut *mut c_char,
) -> EbcStatus {
    let c = ctx_or_invalid!(ctx);
    if out_json.is_null() {
        return invalid("out pointer is null");
    }
    let Some(cmd_str) = cstr(command) else {
        return invalid("command is null or not UTF-8");
    };
    let command: Command = match cmd_str.parse() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let params = if params_json.is_null() {
        Default::default()
    } else {
        let Some(json) = cstr(params_json) else {
            return invalid("params_json is not UTF-8");
        };
        match serde_json::from_str::<std::collections::BTreeMap<String, String>>(json) {
            Ok(m) => m,
            Err(e) => return invalid(&format!("params_json: {e}")),
        }
    };
    let job = JobSpec {
        command,
        params,
        digits: c.ctx.digits(),
        output: OutputFormat::Json,
    };
    match run(&job, &c.cache) {
        Ok(output) => give_string(output.render_json(), out_json),
        Err(e) => fail(e),
    }
}
