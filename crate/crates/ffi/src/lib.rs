//! C interface to `qdom`.
//!
//! Functions return a [`QdomStatus`] and write results through pointer
//! arguments. After a failure the message can be fetched with
//! [`qdom_last_error`]; it is kept per thread until the next call.
//! Maps are opaque [`QdomMap`] handles released with [`qdom_map_free`].

#![allow(clippy::missing_safety_doc)]

use qdom::moments::{extract_quadrature_direct, moment_samples};
use qdom::{conformal, continuation, elliptic, growth, Complex64, Error, MapParams, PaperMap};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdomStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Path = 4,
    Cut = 5,
    Resolution = 6,
    Extrapolation = 7,
    NoConvergence = 8,
    OutOfFamily = 9,
    Bracket = 10,
    Branch = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

impl From<&Error> for QdomStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parameter(_) => QdomStatus::InvalidParameter,
            Error::Domain { .. } => QdomStatus::Domain,
            Error::Path { .. } => QdomStatus::Path,
            Error::Cut { .. } => QdomStatus::Cut,
            Error::Resolution(_) => QdomStatus::Resolution,
            Error::Extrapolation(_) => QdomStatus::Extrapolation,
            Error::NoConvergence { .. } => QdomStatus::NoConvergence,
            Error::OutOfFamily(_) => QdomStatus::OutOfFamily,
            Error::Bracket(_) => QdomStatus::Bracket,
            Error::Branch(_) => QdomStatus::Branch,
        }
    }
}

/// A member of the map family with its Taylor coefficients.
pub struct QdomMap {
    map: PaperMap,
    params: MapParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    let c = CString::new(text).expect("NUL bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs `body`, recording any error or panic for `qdom_last_error`.
fn guard(body: impl FnOnce() -> Result<(), (QdomStatus, String)>) -> QdomStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QdomStatus::Ok,
        Ok(Err((status, msg))) => {
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
            QdomStatus::Panic
        }
    }
}

fn lift<T>(r: qdom::Result<T>) -> Result<T, (QdomStatus, String)> {
    r.map_err(|e| (QdomStatus::from(&e), e.to_string()))
}

fn null(name: &str) -> (QdomStatus, String) {
    (QdomStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn write<T>(ptr: *mut T, name: &str, value: T) -> Result<(), (QdomStatus, String)> {
    if ptr.is_null() {
        return Err(null(name));
    }
    ptr.write(value);
    Ok(())
}

unsafe fn borrow<'a>(map: *const QdomMap) -> Result<&'a QdomMap, (QdomStatus, String)> {
    map.as_ref().ok_or_else(|| null("map"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qdom_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length plus
/// one, or 0 when there is no error.
#[no_mangle]
pub unsafe extern "C" fn qdom_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len);
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Builds the map for `0 <= a < 1`, `c > 0`. On success `*out` owns a
/// handle to free with [`qdom_map_free`].
#[no_mangle]
pub unsafe extern "C" fn qdom_map_new(a: f64, c: f64, out: *mut *mut QdomMap) -> QdomStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = lift(MapParams::new(a, c))?;
        let map = lift(PaperMap::new(&params))?;
        out.write(Box::into_raw(Box::new(QdomMap { map, params })));
        Ok(())
    })
}

/// Releases a handle from [`qdom_map_new`]. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdom_map_free(map: *mut QdomMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qdom_map_params(
    map: *const QdomMap,
    out_a: *mut f64,
    out_c: *mut f64,
) -> QdomStatus {
    guard(|| {
        let m = borrow(map)?;
        write(out_a, "out_a", m.params.a)?;
        write(out_c, "out_c", m.params.c)
    })
}

/// `f(w)` for `|w| <= 1`.
#[no_mangle]
pub unsafe extern "C" fn qdom_map_eval(
    map: *const QdomMap,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdomStatus {
    guard(|| {
        let m = borrow(map)?;
        let v = lift(conformal::eval_f(Complex64::new(re, im), &m.map.grid))?;
        write(out_re, "out_re", v.re)?;
        write(out_im, "out_im", v.im)
    })
}

/// Writes `f(e^{2πij/n})` for `j < n` into `out_re`/`out_im`, each of
/// capacity at least `n`, and `min |f'|` over those samples into
/// `out_min_abs_df` when it is not null.
#[no_mangle]
pub unsafe extern "C" fn qdom_map_boundary(
    map: *const QdomMap,
    n: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    capacity: usize,
    out_min_abs_df: *mut f64,
) -> QdomStatus {
    guard(|| {
        let m = borrow(map)?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out_re/out_im"));
        }
        if n < 8 {
            return Err((
                QdomStatus::InvalidParameter,
                format!("need at least 8 samples, got {n}"),
            ));
        }
        if capacity < n {
            return Err((
                QdomStatus::BufferTooSmall,
                format!("capacity {capacity} < {n} samples"),
            ));
        }
        let curve = m.map.boundary(n);
        let re = std::slice::from_raw_parts_mut(out_re, n);
        let im = std::slice::from_raw_parts_mut(out_im, n);
        for ((r, i), z) in re.iter_mut().zip(im.iter_mut()).zip(&curve.zeta) {
            *r = z.re;
            *i = z.im;
        }
        if !out_min_abs_df.is_null() {
            out_min_abs_df.write(curve.min_abs_df);
        }
        Ok(())
    })
}

/// Quadrature coefficients `a0`, `a1` of the rotated domain and the
/// largest normalised residual of the higher moments.
#[no_mangle]
pub unsafe extern "C" fn qdom_map_quadrature(
    map: *const QdomMap,
    out_a0: *mut f64,
    out_a1: *mut f64,
    out_max_residual: *mut f64,
) -> QdomStatus {
    guard(|| {
        let m = borrow(map)?;
        let q = lift(extract_quadrature_direct(
            &m.map.boundary(moment_samples(&m.params)),
        ))?;
        write(out_a0, "out_a0", q.a0)?;
        write(out_a1, "out_a1", q.a1)?;
        if !out_max_residual.is_null() {
            out_max_residual.write(q.max_residual());
        }
        Ok(())
    })
}

/// The principal branch of `F(w)` off the cut `w <= -1/a`.
#[no_mangle]
pub unsafe extern "C" fn qdom_eval_F(
    a: f64,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdomStatus {
    guard(|| {
        let v = lift(continuation::eval_F(Complex64::new(re, im), a))?;
        write(out_re, "out_re", v.re)?;
        write(out_im, "out_im", v.im)
    })
}

/// Complete elliptic integral of the third kind `Π(n, m)`.
#[no_mangle]
pub unsafe extern "C" fn qdom_carlson_pi(n: f64, m: f64, out: *mut f64) -> QdomStatus {
    guard(|| {
        let v = lift(elliptic::carlson_pi(n, m))?;
        write(out, "out", v)
    })
}

/// Bisects for the parameter where the boundary loses univalence.
#[no_mangle]
pub unsafe extern "C" fn qdom_find_cusp_parameter(c: f64, out: *mut f64) -> QdomStatus {
    guard(|| {
        let v = lift(growth::find_cusp_parameter(c))?;
        write(out, "out", v)
    })
}
