//! C ABI for `majorant`.
//!
//! Matrices and measures cross the boundary as opaque handles created by
//! `majorant_*_new`/`majorant_*_from_*` or returned by a construction, and
//! released with the matching `_free`. Every fallible function returns a
//! [`MajorantStatus`]; on failure [`majorant_last_error`] holds a message for
//! the calling thread. Outputs are written through caller-provided pointers
//! only on success. Panics never unwind into C: they surface as
//! `MAJORANT_STATUS_PANIC`.
//!
//! Lists are passed as `(pointer, length)` and sorted into decreasing order
//! on entry, except the diagonal given to
//! [`majorant_projection_with_diagonal`], whose order is kept.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use majorant::matrix::{MatrixJson, C64};
use majorant::measure::{moment, Atom, Piece};
use majorant::{
    check_majorization, contraction_diagonal, horn_construct, ky_fan_sum, majorize_measure,
    normalize_list, projection_with_diagonal, quantile_transport, realize_finite_rank,
    reduce_to_equality, schur_distribution_check, tail_integral, CompactMeasure, ComplexMatrix,
    EigenList, Error, HermitianMatrix, MajorizationMode, MeasureMethod, TailMode,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorantStatus {
    Ok = 0,
    InvalidInput = 1,
    MajorizationViolation = 2,
    TraceMismatch = 3,
    DistributionMismatch = 4,
    NullPointer = 5,
    Panic = 6,
}

pub const MAJORANT_MODE_EQUALITY: u32 = 0;
pub const MAJORANT_MODE_DOMINANCE: u32 = 1;

pub const MAJORANT_TAIL_SURVIVOR: u32 = 0;
pub const MAJORANT_TAIL_HINGE: u32 = 1;

pub const MAJORANT_METHOD_HINGE: u32 = 0;
pub const MAJORANT_METHOD_SURVIVOR: u32 = 1;
pub const MAJORANT_METHOD_CONVEX_FAMILY: u32 = 2;

/// Dense complex `n × n` matrix.
pub struct MajorantMatrix {
    inner: ComplexMatrix,
}

/// Compactly supported probability measure (atoms plus uniform pieces).
pub struct MajorantMeasure {
    inner: CompactMeasure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(MajorantStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidInput(_) => MajorantStatus::InvalidInput,
            Error::MajorizationViolation(_) => MajorantStatus::MajorizationViolation,
            Error::TraceMismatch(_) => MajorantStatus::TraceMismatch,
            Error::DistributionMismatch(_) => MajorantStatus::DistributionMismatch,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn invalid(msg: &str) -> Failure {
    Failure(MajorantStatus::InvalidInput, msg.to_owned())
}

fn null(name: &str) -> Failure {
    Failure(MajorantStatus::NullPointer, format!("{name} is null"))
}

fn guard(body: impl FnOnce() -> Outcome) -> MajorantStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MajorantStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_last_error(format!("internal panic: {msg}"));
            MajorantStatus::Panic
        }
    }
}

unsafe fn slice<'a>(data: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn list(data: *const f64, len: usize, name: &str) -> Result<EigenList, Failure> {
    Ok(normalize_list(slice(data, len, name)?)?)
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Outcome {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn matrix<'a>(m: *const MajorantMatrix) -> Result<&'a ComplexMatrix, Failure> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null("matrix"))
}

unsafe fn hermitian(m: *const MajorantMatrix) -> Result<HermitianMatrix, Failure> {
    Ok(HermitianMatrix::new(matrix(m)?.clone())?)
}

unsafe fn measure<'a>(m: *const MajorantMeasure) -> Result<&'a CompactMeasure, Failure> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null("measure"))
}

unsafe fn emit_matrix(out: *mut *mut MajorantMatrix, m: ComplexMatrix) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(MajorantMatrix { inner: m })));
    Ok(())
}

unsafe fn emit_measure(out: *mut *mut MajorantMeasure, m: CompactMeasure) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(MajorantMeasure { inner: m })));
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn majorant_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from a `majorant_*` function returning `char *`, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn majorant_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Prefix-sum majorization of `p` by `lambda`. `first_violation` receives
/// the 1-based length of the first failing prefix, or 0.
///
/// # Safety
/// Array arguments must be valid for their lengths; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_check_majorization(
    p: *const f64,
    p_len: usize,
    lambda: *const f64,
    lambda_len: usize,
    mode: u32,
    tol: f64,
    holds: *mut bool,
    first_violation: *mut usize,
) -> MajorantStatus {
    guard(|| {
        let mode = match mode {
            MAJORANT_MODE_EQUALITY => MajorizationMode::Equality,
            MAJORANT_MODE_DOMINANCE => MajorizationMode::Dominance,
            _ => return Err(invalid("unknown majorization mode")),
        };
        if !(tol >= 0.0) {
            return Err(invalid("tolerance must be nonnegative"));
        }
        let report = check_majorization(
            &list(p, p_len, "p")?,
            &list(lambda, lambda_len, "lambda")?,
            mode,
            tol,
        );
        write(holds, report.holds, "holds")?;
        if !first_violation.is_null() {
            first_violation.write(report.first_violation.unwrap_or(0));
        }
        Ok(())
    })
}

/// Equality-majorant `mu` of `p` below `lambda`; writes `p_len` values.
///
/// # Safety
/// Array arguments must be valid for their lengths; `mu` must hold `p_len`
/// values.
#[no_mangle]
pub unsafe extern "C" fn majorant_reduce_to_equality(
    p: *const f64,
    p_len: usize,
    lambda: *const f64,
    lambda_len: usize,
    mu: *mut f64,
) -> MajorantStatus {
    guard(|| {
        let out = reduce_to_equality(&list(p, p_len, "p")?, &list(lambda, lambda_len, "lambda")?)?;
        if mu.is_null() {
            return Err(null("mu"));
        }
        ptr::copy_nonoverlapping(out.values().as_ptr(), mu, out.len());
        Ok(())
    })
}

/// Hermitian `n × n` matrix with spectrum `lambda` and diagonal `p`.
///
/// # Safety
/// `lambda` and `p` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_horn_construct(
    lambda: *const f64,
    p: *const f64,
    n: usize,
    out: *mut *mut MajorantMatrix,
) -> MajorantStatus {
    guard(|| {
        let a = horn_construct(&list(lambda, n, "lambda")?, &list(p, n, "p")?)?;
        emit_matrix(out, a.into_matrix())
    })
}

/// Positive `n × n` matrix with finite-rank spectrum `lambda` and diagonal
/// `p`, both zero-padded to `n`.
///
/// # Safety
/// Array arguments must be valid for their lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_realize_finite_rank(
    lambda: *const f64,
    lambda_len: usize,
    p: *const f64,
    p_len: usize,
    n: usize,
    out: *mut *mut MajorantMatrix,
) -> MajorantStatus {
    guard(|| {
        let a = realize_finite_rank(
            &list(lambda, lambda_len, "lambda")?,
            &list(p, p_len, "p")?,
            n,
        )?;
        emit_matrix(out, a.into_matrix())
    })
}

/// Rank-`m` projection in `M_n` with diagonal `p` (in the given order).
///
/// # Safety
/// `p` must hold `p_len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_projection_with_diagonal(
    p: *const f64,
    p_len: usize,
    m: usize,
    n: usize,
    out: *mut *mut MajorantMatrix,
) -> MajorantStatus {
    guard(|| {
        let q = projection_with_diagonal(slice(p, p_len, "p")?, m, n)?;
        emit_matrix(out, q.into_matrix())
    })
}

/// Contraction `L` with `diag(L* A L) = (p, 0, ...)` for positive `a`.
///
/// # Safety
/// `a` must be a live handle; `p` must hold `p_len` values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_contraction_diagonal(
    a: *const MajorantMatrix,
    p: *const f64,
    p_len: usize,
    out: *mut *mut MajorantMatrix,
) -> MajorantStatus {
    guard(|| {
        let l = contraction_diagonal(&hermitian(a)?, &list(p, p_len, "p")?)?;
        emit_matrix(out, l)
    })
}

/// Sum of the `k` largest eigenvalues of a Hermitian matrix.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_ky_fan_sum(
    a: *const MajorantMatrix,
    k: usize,
    out: *mut f64,
) -> MajorantStatus {
    guard(|| write(out, ky_fan_sum(&hermitian(a)?, k)?, "out"))
}

/// Matrix from row-major real and imaginary parts (`im` may be NULL for a
/// real matrix).
///
/// # Safety
/// `re` (and `im` if non-NULL) must hold `n * n` values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_from_entries(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut MajorantMatrix,
) -> MajorantStatus {
    guard(|| {
        if n == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let len = n
            .checked_mul(n)
            .ok_or_else(|| invalid("dimension too large"))?;
        let re = slice(re, len, "re")?;
        let im = if im.is_null() {
            None
        } else {
            Some(slice(im, len, "im")?)
        };
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            C64::new(re[i * n + j], im.map_or(0.0, |v| v[i * n + j]))
        });
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("entries must be finite"));
        }
        emit_matrix(out, m)
    })
}

/// Number of rows; 0 for NULL.
///
/// # Safety
/// `a` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_dim(a: *const MajorantMatrix) -> usize {
    a.as_ref().map_or(0, |h| h.inner.nrows())
}

/// # Safety
/// `a` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_get(
    a: *const MajorantMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> MajorantStatus {
    guard(|| {
        let m = matrix(a)?;
        let z = *m.get((i, j)).ok_or_else(|| invalid("index out of range"))?;
        write(re, z.re, "re")?;
        write(im, z.im, "im")
    })
}

/// Copy all entries row-major into `re` and `im` (`im` may be NULL).
///
/// # Safety
/// `a` must be a live handle; `re` (and `im` if non-NULL) must hold
/// `dim * dim` values.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_copy_entries(
    a: *const MajorantMatrix,
    re: *mut f64,
    im: *mut f64,
) -> MajorantStatus {
    guard(|| {
        let m = matrix(a)?;
        if re.is_null() {
            return Err(null("re"));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                re.add(i * n + j).write(m[(i, j)].re);
                if !im.is_null() {
                    im.add(i * n + j).write(m[(i, j)].im);
                }
            }
        }
        Ok(())
    })
}

/// Decreasing eigenvalues of a Hermitian matrix; writes `dim` values.
///
/// # Safety
/// `a` must be a live handle; `out` must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_eigenvalues(
    a: *const MajorantMatrix,
    out: *mut f64,
) -> MajorantStatus {
    guard(|| {
        let values = hermitian(a)?.eigenvalues();
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        Ok(())
    })
}

/// JSON form `{"dim": n, "entries": [[[re, im], ...], ...]}`; free with
/// [`majorant_string_free`]. NULL on failure.
///
/// # Safety
/// `a` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_to_json(a: *const MajorantMatrix) -> *mut c_char {
    let mut text = None;
    let status = guard(|| {
        let json = serde_json::to_string(&MatrixJson::from_matrix(matrix(a)?))
            .map_err(|e| invalid(&e.to_string()))?;
        text = Some(CString::new(json).expect("JSON has no NUL"));
        Ok(())
    });
    match (status, text) {
        (MajorantStatus::Ok, Some(c)) => c.into_raw(),
        _ => ptr::null_mut(),
    }
}

/// # Safety
/// `a` must come from this library and not be freed twice; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn majorant_matrix_free(a: *mut MajorantMatrix) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Measure with atoms `(atom_x[k], atom_mass[k])` and uniform pieces
/// `[piece_a[k], piece_b[k]]` of mass `piece_mass[k]`; total mass 1.
///
/// # Safety
/// Each array must hold the matching count of values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_new(
    atom_x: *const f64,
    atom_mass: *const f64,
    n_atoms: usize,
    piece_a: *const f64,
    piece_b: *const f64,
    piece_mass: *const f64,
    n_pieces: usize,
    out: *mut *mut MajorantMeasure,
) -> MajorantStatus {
    guard(|| {
        let (xs, ms) = (
            slice(atom_x, n_atoms, "atom_x")?,
            slice(atom_mass, n_atoms, "atom_mass")?,
        );
        let (pa, pb, pm) = (
            slice(piece_a, n_pieces, "piece_a")?,
            slice(piece_b, n_pieces, "piece_b")?,
            slice(piece_mass, n_pieces, "piece_mass")?,
        );
        let atoms = xs
            .iter()
            .zip(ms)
            .map(|(&x, &mass)| Atom { x, mass })
            .collect();
        let pieces = (0..n_pieces)
            .map(|k| Piece {
                a: pa[k],
                b: pb[k],
                mass: pm[k],
            })
            .collect();
        emit_measure(out, CompactMeasure::new(atoms, pieces)?)
    })
}

/// Spectral distribution of a Hermitian matrix under the normalized trace.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_from_matrix(
    a: *const MajorantMatrix,
    out: *mut *mut MajorantMeasure,
) -> MajorantStatus {
    guard(|| emit_measure(out, CompactMeasure::from_matrix(&hermitian(a)?)?))
}

/// `∫ x^k dm`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_moment(
    m: *const MajorantMeasure,
    k: u32,
    out: *mut f64,
) -> MajorantStatus {
    guard(|| write(out, moment(measure(m)?, k), "out"))
}

/// `∫_t^∞ m([s, ∞)) ds` by the survivor or hinge route.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_tail(
    m: *const MajorantMeasure,
    t: f64,
    mode: u32,
    out: *mut f64,
) -> MajorantStatus {
    guard(|| {
        let mode = match mode {
            MAJORANT_TAIL_SURVIVOR => TailMode::Survivor,
            MAJORANT_TAIL_HINGE => TailMode::Hinge,
            _ => return Err(invalid("unknown tail mode")),
        };
        if !t.is_finite() {
            return Err(invalid("threshold must be finite"));
        }
        write(out, tail_integral(measure(m)?, t, mode), "out")
    })
}

/// Decide `m ⪯ n`.
///
/// # Safety
/// `m` and `n` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_majorize(
    m: *const MajorantMeasure,
    n: *const MajorantMeasure,
    method: u32,
    out: *mut bool,
) -> MajorantStatus {
    guard(|| {
        let method = match method {
            MAJORANT_METHOD_HINGE => MeasureMethod::Hinge,
            MAJORANT_METHOD_SURVIVOR => MeasureMethod::Survivor,
            MAJORANT_METHOD_CONVEX_FAMILY => MeasureMethod::ConvexFamily,
            _ => return Err(invalid("unknown method")),
        };
        write(
            out,
            majorize_measure(measure(m)?, measure(n)?, method)?,
            "out",
        )
    })
}

/// Quantile transport onto `cells` equal cells; writes `cells` values.
///
/// # Safety
/// `m` must be a live handle; `out` must hold `cells` values.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_transport(
    m: *const MajorantMeasure,
    cells: usize,
    out: *mut f64,
) -> MajorantStatus {
    guard(|| {
        let f = quantile_transport(measure(m)?, cells)?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(f.values().as_ptr(), out, cells);
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library and not be freed twice; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn majorant_measure_free(m: *mut MajorantMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Distributional Schur check `m_{E(A)} ⪯ m_A` for a Hermitian matrix.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn majorant_schur_distribution_check(
    a: *const MajorantMatrix,
    out: *mut bool,
) -> MajorantStatus {
    guard(|| write(out, schur_distribution_check(&hermitian(a)?)?, "out"))
}
