//! C ABI over the parahoric library.
//!
//! Every entry point returns a [`PfStatus`]. On failure the message is kept in
//! thread-local storage and read back with [`pf_last_error`]. Strings handed
//! out by the library must be released with [`pf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use parahoric::affine_weyl::Parahoric;
use parahoric::basechange::format_orbit_sums;
use parahoric::cli::{run_suite, Format, RunConfig, Session, Suite};
use parahoric::hecke::CentralElement;
use parahoric::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Unsupported = 4,
    Integrity = 5,
    Arithmetic = 6,
    Io = 7,
    Panic = 8,
}

/// Opaque session: a root datum, an automorphism and the algebras built on them.
pub struct PfSession {
    inner: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PfStatus {
    match e {
        Error::Parse(_) => PfStatus::Parse,
        Error::UnsupportedType(_) => PfStatus::Unsupported,
        Error::Integrity(_) => PfStatus::Integrity,
        Error::Arithmetic(_) | Error::SupportBound(_) => PfStatus::Arithmetic,
        Error::Io(_) => PfStatus::Io,
        _ => PfStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), PfStatus>) -> PfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside the library".into());
            PfStatus::Panic
        }
    }
}

fn fail(e: Error) -> PfStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, PfStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(PfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        PfStatus::Parse
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), PfStatus> {
    if out.is_null() {
        set_error("output pointer is null".into());
        return Err(PfStatus::NullPointer);
    }
    *out = CString::new(s).map_err(|_| PfStatus::Arithmetic)?.into_raw();
    Ok(())
}

unsafe fn session<'a>(s: *const PfSession) -> Result<&'a Session, PfStatus> {
    match s.as_ref() {
        Some(s) => Ok(&s.inner),
        None => {
            set_error("session is null".into());
            Err(PfStatus::NullPointer)
        }
    }
}

unsafe fn parahoric_arg(s: &Session, j: *const c_char) -> Result<Parahoric, PfStatus> {
    if j.is_null() {
        return Ok(Parahoric::IWAHORI);
    }
    Parahoric::parse(read_str(j, "J")?, s.datum().rank()).map_err(fail)
}

/// Message of the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Opens a session for `type_tag` (e.g. "A2", "C2.sc") twisted by `theta`
/// ("id", "flip" or a permutation) of degree `r`.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_session_new(type_tag: *const c_char, theta: *const c_char, r: usize, out: *mut *mut PfSession) -> PfStatus {
    guard(|| {
        if out.is_null() {
            set_error("output pointer is null".into());
            return Err(PfStatus::NullPointer);
        }
        let theta = if theta.is_null() { "id" } else { read_str(theta, "theta")? };
        let cfg = RunConfig { type_tag: read_str(type_tag, "type")?.into(), theta: theta.into(), r, ..Default::default() };
        let inner = Session::new(cfg).map_err(fail)?;
        *out = Box::into_raw(Box::new(PfSession { inner }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live session from [`pf_session_new`].
#[no_mangle]
pub unsafe extern "C" fn pf_session_free(s: *mut PfSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Order of the finite Weyl group.
///
/// # Safety
/// `s` must be a live session and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_weyl_order(s: *const PfSession, out: *mut usize) -> PfStatus {
    guard(|| {
        let s = session(s)?;
        if out.is_null() {
            return Err(PfStatus::NullPointer);
        }
        *out = s.datum().weyl().order();
        Ok(())
    })
}

/// T-basis expansion of `z_μ · 𝕀_J`, one `element<TAB>coefficient` per line.
/// `mu` is comma separated; a null `j` means Iwahori.
///
/// # Safety
/// `s` live, strings NUL-terminated or null where allowed, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_bernstein_function(s: *const PfSession, mu: *const c_char, j: *const c_char, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let s = session(s)?;
        let mu = s.parse_vector(read_str(mu, "mu")?).map_err(fail)?;
        let j = parahoric_arg(s, j)?;
        let alg = s.algebra().map_err(fail)?;
        let (_, h) = alg.bernstein_function(&mu, j).map_err(fail)?;
        write_string(out, alg.format(&h))
    })
}

/// Base change of the orbit sum `z_μ` at `J`, as F-orbit sums.
///
/// # Safety
/// As for [`pf_bernstein_function`].
#[no_mangle]
pub unsafe extern "C" fn pf_base_change(s: *const PfSession, mu: *const c_char, j: *const c_char, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let s = session(s)?;
        let mu = s.parse_vector(read_str(mu, "mu")?).map_err(fail)?;
        let j = parahoric_arg(s, j)?;
        let ctx = s.base_change().map_err(fail)?;
        let bc = ctx.base_change(&CentralElement::orbit_sum(s.datum(), &mu), j).map_err(fail)?;
        write_string(out, format_orbit_sums(&ctx.f_orbit_coefficients(&bc).map_err(fail)?))
    })
}

/// Runs a verification suite ("weyl", "hecke", ..., "all") and renders the
/// report as "text", "csv" or "json". `passed` receives the verdict.
///
/// # Safety
/// `s` live, strings NUL-terminated (format may be null), outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pf_verify(s: *const PfSession, suite: *const c_char, format: *const c_char, out: *mut *mut c_char, passed: *mut bool) -> PfStatus {
    use parahoric::cli::clap_value;
    guard(|| {
        let s = session(s)?;
        let suite: Suite = clap_value(read_str(suite, "suite")?).map_err(fail)?;
        let format: Format = if format.is_null() { Format::Text } else { clap_value(read_str(format, "format")?).map_err(fail)? };
        let report = run_suite(suite, s).map_err(fail)?;
        if !passed.is_null() {
            *passed = report.passed();
        }
        write_string(out, report.render(format))
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
