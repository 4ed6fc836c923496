//! C ABI for symqudit.
//!
//! Matrices and states are passed as opaque handles created and released by
//! this library. Every fallible call returns an [`SqStatus`]; on failure the
//! message is available from [`sq_last_error`] until the next failing call on
//! the same thread. Strings returned through `char **` out-parameters are
//! owned by the caller and released with [`sq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use symqudit::io::{matrix_from_json, matrix_to_json, state_from_json, state_to_json, State};
use symqudit::jordan::{count_signatures, count_unique_classes, jordan_signature};
use symqudit::matfun::{nth_root, Branch};
use symqudit::stabilizer::{classify, stabilizer_space};
use symqudit::states::{excitation, ghz, multi_block_excitation, unique_representative, BlockLayout};
use symqudit::symmetrize::symmetrize_locals;
use symqudit::symspace::{full_to_sym, SymState};
use symqudit::{CMatrix, Error, C64};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    Singular = 5,
    NotUnitary = 6,
    NotSymmetric = 7,
    ZeroState = 8,
    NoConvergence = 9,
    ScaleExceeded = 10,
    Overflow = 11,
    Parse = 12,
    Numerical = 13,
    Panic = 14,
}

/// Opaque dense complex matrix.
pub struct SqMatrix {
    inner: CMatrix,
}

/// Opaque permutation-symmetric state.
pub struct SqState {
    inner: SymState,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SqStatus {
    match e {
        Error::NotSquare { .. } | Error::DimensionMismatch(_) => SqStatus::DimensionMismatch,
        Error::NonFinite => SqStatus::NonFinite,
        Error::InvalidArgument(_) | Error::InsufficientDerivatives { .. } => SqStatus::InvalidArgument,
        Error::NoConvergence(_) => SqStatus::NoConvergence,
        Error::SingularMatrix { .. } | Error::SingularRoot { .. } => SqStatus::Singular,
        Error::NotUnitary { .. } => SqStatus::NotUnitary,
        Error::ScaleExceeded { .. } => SqStatus::ScaleExceeded,
        Error::Overflow => SqStatus::Overflow,
        Error::NotSymmetric { .. } | Error::NotSymmetricImage { .. } => SqStatus::NotSymmetric,
        Error::ZeroState => SqStatus::ZeroState,
        Error::IllConditionedNodes(_) | Error::ResidualTooLarge { .. } => SqStatus::Numerical,
        Error::Parse { .. } | Error::Format(_) => SqStatus::Parse,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SqStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SqStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SqStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn as_out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn as_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail::Lib(Error::Format(format!("{what} is not UTF-8: {e}"))))
}

unsafe fn as_slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn give_string(out: &mut *mut c_char, s: String) {
    *out = CString::new(s).unwrap_or_default().into_raw();
}

fn give_matrix(out: &mut *mut SqMatrix, m: CMatrix) {
    *out = Box::into_raw(Box::new(SqMatrix { inner: m }));
}

fn give_state(out: &mut *mut SqState, s: SymState) {
    *out = Box::into_raw(Box::new(SqState { inner: s }));
}

/// Message of the most recent failure on this thread. Valid until the next
/// failing call; never NULL.
#[no_mangle]
pub extern "C" fn sq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `rows x cols` matrix from `2 * rows * cols` doubles holding
/// interleaved real and imaginary parts in row-major order.
///
/// # Safety
/// `re_im` must point to `2 * rows * cols` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_new(rows: usize, cols: usize, re_im: *const f64, out: *mut *mut SqMatrix) -> SqStatus {
    guard(|| {
        let out = as_out(out, "out")?;
        let len = rows
            .checked_mul(cols)
            .and_then(|k| k.checked_mul(2))
            .ok_or(Fail::Lib(Error::Overflow))?;
        let raw = as_slice(re_im, len, "re_im")?;
        let data = raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
        let m = CMatrix::new(rows, cols, data)?;
        if !m.is_finite() {
            return Err(Error::NonFinite.into());
        }
        give_matrix(out, m);
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_from_json(json: *const c_char, out: *mut *mut SqMatrix) -> SqStatus {
    guard(|| {
        let out = as_out(out, "out")?;
        give_matrix(out, matrix_from_json(as_str(json, "json")?)?);
        Ok(())
    })
}

/// # Safety
/// `m` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_to_json(m: *const SqMatrix, out: *mut *mut c_char) -> SqStatus {
    guard(|| {
        let m = as_ref(m, "matrix")?;
        give_string(as_out(out, "out")?, matrix_to_json(&m.inner));
        Ok(())
    })
}

/// Shape of a matrix.
///
/// # Safety
/// `m` must be a live matrix handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_shape(m: *const SqMatrix, rows: *mut usize, cols: *mut usize) -> SqStatus {
    guard(|| {
        let m = as_ref(m, "matrix")?;
        *as_out(rows, "rows")? = m.inner.rows();
        *as_out(cols, "cols")? = m.inner.cols();
        Ok(())
    })
}

/// Entry `(i, j)`, zero-based.
///
/// # Safety
/// `m` must be a live matrix handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_get(m: *const SqMatrix, i: usize, j: usize, re: *mut f64, im: *mut f64) -> SqStatus {
    guard(|| {
        let m = as_ref(m, "matrix")?;
        if i >= m.inner.rows() || j >= m.inner.cols() {
            return Err(Error::InvalidArgument(format!("entry ({i}, {j}) out of range")).into());
        }
        let z = m.inner[(i, j)];
        *as_out(re, "re")? = z.re;
        *as_out(im, "im")? = z.im;
        Ok(())
    })
}

/// Releases a matrix. NULL is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_free(m: *mut SqMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Generalized GHZ state. `alpha_re_im` holds `2 d` doubles (interleaved
/// real and imaginary parts) or is NULL for equal weights `1/sqrt(d)`.
///
/// # Safety
/// `alpha_re_im` must be NULL or point to `2 d` doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sq_state_ghz(n: usize, d: usize, alpha_re_im: *const f64, out: *mut *mut SqState) -> SqStatus {
    guard(|| {
        let out = as_out(out, "out")?;
        let alpha: Option<Vec<C64>> = if alpha_re_im.is_null() {
            None
        } else {
            let raw = as_slice(alpha_re_im, 2 * d, "alpha_re_im")?;
            Some(raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect())
        };
        give_state(out, ghz(n, d, alpha.as_deref())?);
        Ok(())
    })
}

/// Excitation state with `j` excitations.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_state_excitation(n: usize, d: usize, j: usize, out: *mut *mut SqState) -> SqStatus {
    guard(|| {
        give_state(as_out(out, "out")?, excitation(n, d, j)?);
        Ok(())
    })
}

/// Unique representative for Jordan blocks of the given sizes.
///
/// # Safety
/// `blocks` must point to `count` sizes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_state_unique(n: usize, blocks: *const usize, count: usize, out: *mut *mut SqState) -> SqStatus {
    guard(|| {
        let out = as_out(out, "out")?;
        let layout = BlockLayout::new(as_slice(blocks, count, "blocks")?.to_vec())?;
        give_state(out, unique_representative(n, &layout)?);
        Ok(())
    })
}

/// Excitation `j` spread over blocks with `weights[b]` particles in block `b`.
///
/// # Safety
/// `blocks` and `weights` must each point to `count` values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sq_state_multi_block(
    n: usize,
    blocks: *const usize,
    weights: *const usize,
    count: usize,
    j: usize,
    out: *mut *mut SqState,
) -> SqStatus {
    guard(|| {
        let out = as_out(out, "out")?;
        let layout = BlockLayout::new(as_slice(blocks, count, "blocks")?.to_vec())?;
        let weights = as_slice(weights, count, "weights")?;
        give_state(out, multi_block_excitation(n, &layout, j, weights)?);
        Ok(())
    })
}

/// Reads a state file (either representation). Full states must be
/// symmetric within `tol`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_state_from_json(json: *const c_char, tol: f64, out: *mut *mut SqState) -> SqStatus {
    guard(|| {
        let out = as_out(out, "out")?;
        let s = match state_from_json(as_str(json, "json")?)? {
            State::Sym(s) => s,
            State::Full(f) => full_to_sym(&f, tol)?,
        };
        give_state(out, s);
        Ok(())
    })
}

/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_state_to_json(s: *const SqState, out: *mut *mut c_char) -> SqStatus {
    guard(|| {
        let s = as_ref(s, "state")?;
        give_string(as_out(out, "out")?, state_to_json(&State::Sym(s.inner.clone())));
        Ok(())
    })
}

/// Releases a state. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sq_state_free(s: *mut SqState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension of the stabilizer space.
///
/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_stabilizer_dimension(s: *const SqState, tol: f64, out: *mut usize) -> SqStatus {
    guard(|| {
        let s = as_ref(s, "state")?;
        *as_out(out, "out")? = stabilizer_space(&s.inner, tol)?.dimension();
        Ok(())
    })
}

/// Classification report as JSON.
///
/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_classify(
    s: *const SqState,
    samples: usize,
    seed: u64,
    tol: f64,
    cluster_tol: f64,
    out: *mut *mut c_char,
) -> SqStatus {
    guard(|| {
        let s = as_ref(s, "state")?;
        let out = as_out(out, "out")?;
        let report = classify(&s.inner, samples, seed, tol, cluster_tol)?;
        give_string(out, serde_json::to_string(&report).map_err(|e| Error::Format(e.to_string()))?);
        Ok(())
    })
}

/// Jordan signature in bracket notation, e.g. `{ { 2 }, { 1 } }`.
///
/// # Safety
/// `m` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_jordan_signature(m: *const SqMatrix, tol: f64, cluster_tol: f64, out: *mut *mut c_char) -> SqStatus {
    guard(|| {
        let m = as_ref(m, "matrix")?;
        let out = as_out(out, "out")?;
        give_string(out, jordan_signature(&m.inner, tol, cluster_tol)?.signature.to_string());
        Ok(())
    })
}

/// Principal `r`-th root, a polynomial in the input.
///
/// # Safety
/// `m` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_nth_root(m: *const SqMatrix, r: u32, tol: f64, cluster_tol: f64, out: *mut *mut SqMatrix) -> SqStatus {
    guard(|| {
        let m = as_ref(m, "matrix")?;
        let out = as_out(out, "out")?;
        give_matrix(out, nth_root(&m.inner, r, &Branch::Principal, tol, cluster_tol)?.root);
        Ok(())
    })
}

/// Homogeneous operation for `count` local operations; the result (A, S,
/// M, residual, unitary flag) is returned as JSON and `A` optionally as a
/// handle through `a_out` (may be NULL).
///
/// # Safety
/// `s` must be a live state handle; `ops` must point to `count` live matrix
/// handles; `json_out` must be writable; `a_out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn sq_symmetrize(
    s: *const SqState,
    ops: *const *const SqMatrix,
    count: usize,
    tol: f64,
    cluster_tol: f64,
    json_out: *mut *mut c_char,
    a_out: *mut *mut SqMatrix,
) -> SqStatus {
    guard(|| {
        let s = as_ref(s, "state")?;
        let json_out = as_out(json_out, "json_out")?;
        let handles = as_slice(ops, count, "ops")?;
        let mats = handles
            .iter()
            .map(|&h| as_ref(h, "ops[i]").map(|m| m.inner.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let result = symmetrize_locals(&s.inner, &mats, tol, cluster_tol)?;
        give_string(json_out, serde_json::to_string(&result).map_err(|e| Error::Format(e.to_string()))?);
        if !a_out.is_null() {
            give_matrix(&mut *a_out, result.a);
        }
        Ok(())
    })
}

/// Number of Jordan signatures of dimension `d` and of those with one block
/// per eigenvalue. Fails with `OVERFLOW` beyond 64 bits.
///
/// # Safety
/// `signatures` and `unique_classes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_count(d: usize, signatures: *mut u64, unique_classes: *mut u64) -> SqStatus {
    guard(|| {
        let signatures = as_out(signatures, "signatures")?;
        let unique_classes = as_out(unique_classes, "unique_classes")?;
        let total = u64::try_from(count_signatures(d)).map_err(|_| Error::Overflow)?;
        let unique = u64::try_from(count_unique_classes(d)).map_err(|_| Error::Overflow)?;
        *signatures = total;
        *unique_classes = unique;
        Ok(())
    })
}
