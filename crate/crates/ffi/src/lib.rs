//! C interface to polystruct.
//!
//! Every function returns a [`PsStatus`]. On failure the message is kept in
//! a thread-local slot readable through [`ps_last_error_message`]. Strings
//! handed out by the library are freed with [`ps_string_free`], polynomial
//! handles with [`ps_poly_free`].

use polystruct::bias::{exact_bias, gowers_norm, Budget};
use polystruct::decompose::{quadratic_rank, PolyRank};
use polystruct::nullstellensatz::{find_certificate, IdealSpec};
use polystruct::variety::count_points_exact;
use polystruct::{parse_poly, Error, FieldCtx, MultiPoly};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    /// Bad input, violated precondition or unsupported request.
    Domain = 1,
    /// A resource cap was exceeded.
    Cap = 2,
    /// An internal consistency check failed.
    Internal = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Opaque polynomial handle.
pub struct PsPoly {
    inner: MultiPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PsStatus {
    match e.exit_code() {
        2 => PsStatus::Cap,
        3 => PsStatus::Internal,
        _ => PsStatus::Domain,
    }
}

/// Run `body`, translating errors and panics into a status.
fn guard<F>(body: F) -> PsStatus
where
    F: FnOnce() -> Result<(), (PsStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside polystruct");
            PsStatus::Panic
        }
    }
}

fn lib<T>(r: polystruct::Result<T>) -> Result<T, (PsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PsStatus, String) {
    (PsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, (PsStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PsStatus::Domain, format!("{what} is not UTF-8")))
}

unsafe fn poly_arg<'a>(p: *const PsPoly, what: &str) -> Result<&'a MultiPoly, (PsStatus, String)> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn poly_slice<'a>(polys: *const *const PsPoly, len: usize) -> Result<Vec<&'a MultiPoly>, (PsStatus, String)> {
    if polys.is_null() {
        return Err(null("polynomial array"));
    }
    (0..len).map(|i| poly_arg(*polys.add(i), "polynomial array entry")).collect()
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (PsStatus, String)> {
    let c = CString::new(s).map_err(|_| (PsStatus::Internal, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Last error message on this thread, or null. Valid until the next call
/// into the library from the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse `text` over `F_p` in `n` variables (`n = 0` infers the arity).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_poly_parse(p: u32, n: usize, text: *const c_char, out: *mut *mut PsPoly) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(text, "text")?;
        let ctx = lib(FieldCtx::new(p))?;
        let inner = lib(parse_poly(ctx, text, (n > 0).then_some(n)))?;
        *out = Box::into_raw(Box::new(PsPoly { inner }));
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a handle from [`ps_poly_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn ps_poly_free(poly: *mut PsPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `poly` must be a live handle and `out_n`, `out_degree` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_poly_shape(poly: *const PsPoly, out_n: *mut usize, out_degree: *mut u32) -> PsStatus {
    guard(|| {
        let f = poly_arg(poly, "poly")?;
        if out_n.is_null() || out_degree.is_null() {
            return Err(null("out"));
        }
        *out_n = f.n();
        *out_degree = f.degree();
        Ok(())
    })
}

/// Canonical string; free with [`ps_string_free`].
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_poly_to_string(poly: *const PsPoly, out: *mut *mut c_char) -> PsStatus {
    guard(|| {
        let f = poly_arg(poly, "poly")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(f.to_canonical_string(), out)
    })
}

/// # Safety
/// `point` must hold `len` values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_poly_eval(poly: *const PsPoly, point: *const u32, len: usize, out: *mut u32) -> PsStatus {
    guard(|| {
        let f = poly_arg(poly, "poly")?;
        if point.is_null() || out.is_null() {
            return Err(null("point or out"));
        }
        *out = lib(f.eval(std::slice::from_raw_parts(point, len)))?;
        Ok(())
    })
}

/// `|E_x e(f(x))|` by enumeration.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_bias_exact(poly: *const PsPoly, enum_cap: u64, out: *mut f64) -> PsStatus {
    guard(|| {
        let f = poly_arg(poly, "poly")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lib(exact_bias(f, enum_cap))?.magnitude();
        Ok(())
    })
}

/// Gowers `U^d` norm by enumeration.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_gowers_exact(poly: *const PsPoly, d: u32, enum_cap: u64, out: *mut f64) -> PsStatus {
    guard(|| {
        let f = poly_arg(poly, "poly")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lib(gowers_norm(f, d, &Budget::exact(enum_cap)))?.norm;
        Ok(())
    })
}

/// Rank of a polynomial of degree at most two; `-1` stands for infinite.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_quadratic_rank(poly: *const PsPoly, out: *mut i64) -> PsStatus {
    guard(|| {
        let f = poly_arg(poly, "poly")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match lib(quadratic_rank(f))? {
            PolyRank::Finite(r) => r as i64,
            PolyRank::Infinite => -1,
        };
        Ok(())
    })
}

/// Common zeros of `len` polynomials on one `F_p^n`.
///
/// # Safety
/// `polys` must point at `len` live handles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_count_points(polys: *const *const PsPoly, len: usize, enum_cap: u64, out: *mut u64) -> PsStatus {
    guard(|| {
        let gens: Vec<MultiPoly> = poly_slice(polys, len)?.into_iter().cloned().collect();
        let first = gens.first().ok_or((PsStatus::Domain, "no polynomials given".to_string()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = lib(count_points_exact(first.ctx(), first.n(), &gens, enum_cap))?;
        *out = r.exact_count.unwrap_or(0);
        Ok(())
    })
}

/// Search for `Q^r = sum R_i P_i`. `*out_json` is the certificate as JSON,
/// or null when none exists within the bounds.
///
/// # Safety
/// `gens` must point at `len` live handles, `query` be live and the out
/// pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ps_nss_find(
    gens: *const *const PsPoly,
    len: usize,
    query: *const PsPoly,
    d_max: u32,
    r_max: u32,
    unknowns_cap: usize,
    out_found: *mut bool,
    out_json: *mut *mut c_char,
) -> PsStatus {
    guard(|| {
        let gens: Vec<MultiPoly> = poly_slice(gens, len)?.into_iter().cloned().collect();
        let q = poly_arg(query, "query")?.clone();
        if out_found.is_null() || out_json.is_null() {
            return Err(null("out"));
        }
        let spec = lib(IdealSpec::new(gens, q))?;
        match lib(find_certificate(&spec, d_max, r_max, unknowns_cap))? {
            Some(cert) => {
                *out_found = true;
                give_string(cert.to_json(&spec).to_string(), out_json)
            }
            None => {
                *out_found = false;
                *out_json = ptr::null_mut();
                Ok(())
            }
        }
    })
}

/// Run the command line with `argv` (program name first). The rendered
/// output goes to `*out_stdout` and the process exit code to `*out_code`.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings and the out pointers be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ps_cli_dispatch(
    argc: usize,
    argv: *const *const c_char,
    out_stdout: *mut *mut c_char,
    out_code: *mut i32,
) -> PsStatus {
    guard(|| {
        if argv.is_null() || out_stdout.is_null() || out_code.is_null() {
            return Err(null("argv or out"));
        }
        let args = (0..argc)
            .map(|i| str_arg(*argv.add(i), "argv entry").map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?;
        let out = polystruct::cli::dispatch(args);
        *out_code = out.code;
        give_string(format!("{}{}", out.stdout, out.stderr), out_stdout)
    })
}
