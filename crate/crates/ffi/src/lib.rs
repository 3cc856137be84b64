//! C ABI over the `bargmann` crate.
//!
//! Maps and norm certificates are opaque heap handles created by `bg_*_new`
//! style functions and released with the matching `bg_*_free`. Every
//! fallible call returns a [`BgStatus`]; on failure a message is kept per
//! thread and can be read with [`bg_last_error_message`]. Complex numbers
//! cross the boundary as interleaved `re, im` doubles, matrices row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bargmann::affine::{classify_structure, composition_norm};
use bargmann::fock::truncated_norm;
use bargmann::{AffineMap, ComplexMatrix, ComplexVector, Error, NormCertificate, Tolerances, C64};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BgStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Input = 3,
    Precondition = 4,
    Range = 5,
    Resource = 6,
    Unbounded = 7,
    Inconclusive = 8,
    CrossCheck = 9,
    /// A buffer was too short; the required length was written.
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque affine map `z ↦ Az + b`.
pub struct BgMap {
    inner: AffineMap,
}

/// Opaque result of [`bg_composition_norm`].
pub struct BgCertificate {
    inner: NormCertificate,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BgTolerances {
    pub rank_tol: f64,
    pub psd_tol: f64,
    pub boundary_tol: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BgStructure {
    pub compact: bool,
    pub normal: bool,
    pub isometric: bool,
    pub coisometric: bool,
    pub unitary: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BgStatus {
    match e {
        Error::Dimension(_) => BgStatus::Dimension,
        Error::Input(_) => BgStatus::Input,
        Error::Precondition(_) => BgStatus::Precondition,
        Error::Range(_) => BgStatus::Range,
        Error::Resource(_) => BgStatus::Resource,
        Error::Unbounded(_) => BgStatus::Unbounded,
        Error::Inconclusive(_) => BgStatus::Inconclusive,
        Error::CrossCheck(_) => BgStatus::CrossCheck,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (BgStatus, String)>) -> BgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BgStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (BgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BgStatus, String) {
    (BgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn complex_slice(ptr: *const f64, len: usize, what: &str) -> Result<Vec<C64>, (BgStatus, String)> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let raw = std::slice::from_raw_parts(ptr, 2 * len);
    Ok(raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect())
}

unsafe fn tolerances(n: usize, tol: *const BgTolerances) -> Tolerances {
    match tol.as_ref() {
        Some(t) => Tolerances {
            rank_tol: t.rank_tol,
            psd_tol: t.psd_tol,
            boundary_tol: t.boundary_tol,
        },
        None => Tolerances::for_dim(n),
    }
}

/// Message for the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bg_status_string(status: BgStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        BgStatus::Ok => b"ok\0",
        BgStatus::NullPointer => b"null pointer\0",
        BgStatus::Dimension => b"dimension mismatch\0",
        BgStatus::Input => b"invalid input\0",
        BgStatus::Precondition => b"precondition violated\0",
        BgStatus::Range => b"value out of range\0",
        BgStatus::Resource => b"resource limit exceeded\0",
        BgStatus::Unbounded => b"unbounded\0",
        BgStatus::Inconclusive => b"inconclusive\0",
        BgStatus::CrossCheck => b"numerical cross-check failed\0",
        BgStatus::BufferTooSmall => b"buffer too small\0",
        BgStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn bg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default tolerances for dimension `n`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_tolerances_default(n: usize, out: *mut BgTolerances) -> BgStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let t = Tolerances::for_dim(n.max(1));
        *out = BgTolerances {
            rank_tol: t.rank_tol,
            psd_tol: t.psd_tol,
            boundary_tol: t.boundary_tol,
        };
        Ok(())
    })
}

/// Create a map from `a` (`2n²` doubles, row-major, interleaved) and `b`
/// (`2n` doubles).
///
/// # Safety
/// `a` and `b` must point to that many readable doubles; `out` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_map_new(n: usize, a: *const f64, b: *const f64, out: *mut *mut BgMap) -> BgStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        if n == 0 {
            return Err((BgStatus::Input, "dimension must be at least 1".into()));
        }
        let len = n.checked_mul(n).ok_or((BgStatus::Resource, "dimension too large".to_string()))?;
        let a = ComplexMatrix::new(n, n, complex_slice(a, len, "a")?).map_err(lib_err)?;
        let b = ComplexVector::new(complex_slice(b, n, "b")?).map_err(lib_err)?;
        let inner = AffineMap::new(a, b).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BgMap { inner }));
        Ok(())
    })
}

/// `outer ∘ inner`.
///
/// # Safety
/// Handles must be null or live; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_map_compose(outer: *const BgMap, inner: *const BgMap, out: *mut *mut BgMap) -> BgStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let f = outer.as_ref().ok_or_else(|| null("outer"))?;
        let g = inner.as_ref().ok_or_else(|| null("inner"))?;
        let inner = f.inner.compose(&g.inner).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BgMap { inner }));
        Ok(())
    })
}

/// Dimension of the map, 0 for a null handle.
///
/// # Safety
/// `map` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn bg_map_dim(map: *const BgMap) -> usize {
    map.as_ref().map_or(0, |m| m.inner.dim())
}

/// # Safety
/// `map` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bg_map_free(map: *mut BgMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Boundedness verdict and closed-form norm. `tol` may be null for the
/// defaults. An unbounded operator is a successful call; query
/// [`bg_certificate_bounded`].
///
/// # Safety
/// `map` and `tol` must be null or live; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_composition_norm(
    map: *const BgMap,
    tol: *const BgTolerances,
    out: *mut *mut BgCertificate,
) -> BgStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let tol = tolerances(m.inner.dim(), tol);
        let inner = composition_norm(&m.inner, &tol).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BgCertificate { inner }));
        Ok(())
    })
}

/// # Safety
/// `cert` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_free(cert: *mut BgCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `cert` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_bounded(cert: *const BgCertificate) -> bool {
    cert.as_ref().is_some_and(|c| c.inner.bounded)
}

unsafe fn scalar(
    cert: *const BgCertificate,
    out: *mut f64,
    pick: impl FnOnce(&NormCertificate) -> Option<f64>,
    missing: &str,
) -> BgStatus {
    guard(|| {
        let c = cert.as_ref().ok_or_else(|| null("cert"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = pick(&c.inner).ok_or((BgStatus::Unbounded, missing.to_string()))?;
        Ok(())
    })
}

/// `‖C_φ‖`; `BG_STATUS_UNBOUNDED` when there is none.
///
/// # Safety
/// `cert` must be null or live; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_norm(cert: *const BgCertificate, out: *mut f64) -> BgStatus {
    scalar(cert, out, |c| c.norm, "operator is unbounded")
}

/// `‖A‖`.
///
/// # Safety
/// As for [`bg_certificate_norm`].
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_a_norm(cert: *const BgCertificate, out: *mut f64) -> BgStatus {
    scalar(cert, out, |c| Some(c.a_norm), "")
}

/// Residual of the range-membership test; unavailable when `‖A‖ > 1`.
///
/// # Safety
/// As for [`bg_certificate_norm`].
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_membership_residual(cert: *const BgCertificate, out: *mut f64) -> BgStatus {
    scalar(cert, out, |c| c.membership_residual, "‖A‖ > 1: membership is not defined")
}

unsafe fn vector_out(
    cert: *const BgCertificate,
    buf: *mut f64,
    len: *mut usize,
    pick: impl FnOnce(&NormCertificate) -> Option<&ComplexVector>,
) -> BgStatus {
    guard(|| {
        let c = cert.as_ref().ok_or_else(|| null("cert"))?;
        let len = len.as_mut().ok_or_else(|| null("len"))?;
        let v = pick(&c.inner).ok_or((BgStatus::Unbounded, "operator is unbounded".to_string()))?;
        let need = 2 * v.dim();
        if buf.is_null() || *len < need {
            *len = need;
            return Err((BgStatus::BufferTooSmall, format!("need {need} doubles")));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (pair, z) in dst.chunks_exact_mut(2).zip(v.iter()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        *len = need;
        Ok(())
    })
}

/// Minimal-norm vector `v` as interleaved doubles. `*len` holds the buffer
/// capacity in doubles on entry and the number written (or required) on
/// return.
///
/// # Safety
/// `buf` must be null or valid for `*len` writes; `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_v(cert: *const BgCertificate, buf: *mut f64, len: *mut usize) -> BgStatus {
    vector_out(cert, buf, len, |c| c.v.as_ref())
}

/// Extremal point `w₀`, same buffer protocol as [`bg_certificate_v`].
///
/// # Safety
/// As for [`bg_certificate_v`].
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_w0(cert: *const BgCertificate, buf: *mut f64, len: *mut usize) -> BgStatus {
    vector_out(cert, buf, len, |c| c.w0.as_ref())
}

/// Compact / normal / isometric / co-isometric / unitary verdicts.
///
/// # Safety
/// `map` and `tol` must be null or live; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_classify_structure(
    map: *const BgMap,
    tol: *const BgTolerances,
    out: *mut BgStructure,
) -> BgStatus {
    guard(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = classify_structure(&m.inner, &tolerances(m.inner.dim(), tol)).map_err(lib_err)?;
        *out = BgStructure {
            compact: s.compact,
            normal: s.normal,
            isometric: s.isometric,
            coisometric: s.coisometric,
            unitary: s.unitary,
        };
        Ok(())
    })
}

/// Norm of `C_φ` restricted to polynomials of degree `≤ degree`.
///
/// # Safety
/// `map` must be null or live; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_truncated_norm(map: *const BgMap, degree: usize, out: *mut f64) -> BgStatus {
    guard(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = truncated_norm(&m.inner, degree).map_err(lib_err)?;
        Ok(())
    })
}
