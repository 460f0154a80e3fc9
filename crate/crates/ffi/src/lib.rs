//! C ABI for `gegenpsd`.
//!
//! Every fallible function returns a [`GpStatus`] and writes its result
//! through an out pointer. On failure the message is kept per thread and
//! can be read with [`gp_last_error`]. Objects cross the boundary as opaque
//! handles that the caller releases with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use gegenpsd::codebounds::{delsarte_bound, delsarte_lp, q_omega, PartitionPattern};
use gegenpsd::constraints::{delta_member, lambda_member, make_pair, FeasiblePair};
use gegenpsd::gegenbauer::{eval_1d, eval_mv_raw};
use gegenpsd::poly::Poly1;
use gegenpsd::spherical::{kernel_matrix, named_code, sample_sphere, PointConfiguration};
use gegenpsd::symlin::{DenseMatrix, SymmetricMatrix};
use gegenpsd::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Infeasible = 4,
    CertificateRejected = 5,
    LpFailed = 6,
    Parse = 7,
    UnknownCode = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Symmetric matrix handle.
pub struct GpMatrix(SymmetricMatrix);

/// Point configuration handle.
pub struct GpPoints(PointConfiguration);

/// Feasible pair `(T, U)` handle.
pub struct GpPair(FeasiblePair);

/// Summary of an eigenvalue check.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GpPsdResult {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub matrix_scale: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(GpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch { .. } => GpStatus::DimensionMismatch,
            Error::InfeasiblePair(_) | Error::InfeasiblePattern(_) | Error::NotPsd { .. } => GpStatus::Infeasible,
            Error::CertificateRejected(_) => GpStatus::CertificateRejected,
            Error::Lp(_) => GpStatus::LpFailed,
            Error::Parse(_) | Error::Json(_) => GpStatus::Parse,
            Error::UnknownCode(_) => GpStatus::UnknownCode,
            _ => GpStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> GpStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            GpStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(GpStatus::NullPointer, format!("`{name}` is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(GpStatus::InvalidArgument, msg.into())
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn input<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn array<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

fn rows_of(data: &[f64], rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|i| data[i * cols..(i + 1) * cols].to_vec()).collect()
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn gp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `G_k^{(n)}(t)`.
///
/// # Safety
/// `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_gegenbauer_eval(n: u32, k: u32, t: f64, result: *mut f64) -> GpStatus {
    guard(|| {
        *out(result, "result")? = eval_1d(n, k, t)?;
        Ok(())
    })
}

/// `G_k^{(n,m)}(t, u, v)` with `u`, `v` of length `m`.
///
/// # Safety
/// `u` and `v` must point to `m` doubles; `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_gegenbauer_eval_mv(
    n: u32,
    k: u32,
    t: f64,
    u: *const f64,
    v: *const f64,
    m: usize,
    result: *mut f64,
) -> GpStatus {
    guard(|| {
        let u = array(u, m, "u")?;
        let v = array(v, m, "v")?;
        *out(result, "result")? = eval_mv_raw(n, k, t, u, v)?;
        Ok(())
    })
}

/// Matrix from `dim * dim` row-major entries; the upper triangle is used.
///
/// # Safety
/// `data` must point to `dim * dim` doubles; `matrix` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_new(dim: usize, data: *const f64, matrix: *mut *mut GpMatrix) -> GpStatus {
    guard(|| {
        let len = dim.checked_mul(dim).ok_or_else(|| invalid("dimension overflows"))?;
        let data = array(data, len, "data")?;
        let slot = out(matrix, "matrix")?;
        let m = SymmetricMatrix::from_fn(dim, |i, j| data[i * dim + j])?;
        *slot = boxed(GpMatrix(m));
        Ok(())
    })
}

/// # Safety
/// `matrix` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_free(matrix: *mut GpMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// # Safety
/// `matrix` must be a live handle; `dim` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_dim(matrix: *const GpMatrix, dim: *mut usize) -> GpStatus {
    guard(|| {
        *out(dim, "dim")? = input(matrix, "matrix")?.0.dim();
        Ok(())
    })
}

/// # Safety
/// `matrix` must be a live handle; `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_get(matrix: *const GpMatrix, i: usize, j: usize, value: *mut f64) -> GpStatus {
    guard(|| {
        let m = &input(matrix, "matrix")?.0;
        if i >= m.dim() || j >= m.dim() {
            return Err(invalid(format!("index ({i}, {j}) outside a {0}x{0} matrix", m.dim())));
        }
        *out(value, "value")? = m.get(i, j);
        Ok(())
    })
}

/// Copy all entries row-major into `data`, which holds `capacity` doubles.
///
/// # Safety
/// `matrix` must be a live handle; `data` must be valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_copy(matrix: *const GpMatrix, data: *mut f64, capacity: usize) -> GpStatus {
    guard(|| {
        let dense = input(matrix, "matrix")?.0.to_dense();
        if capacity < dense.len() {
            return Err(Failure(GpStatus::BufferTooSmall, format!("need {} entries, got {capacity}", dense.len())));
        }
        if data.is_null() {
            return Err(null("data"));
        }
        slice::from_raw_parts_mut(data, dense.len()).copy_from_slice(&dense);
        Ok(())
    })
}

/// Eigenvalue check with threshold `-tol * max(|lambda|_max, 1)`.
///
/// # Safety
/// `matrix` must be a live handle; `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_is_psd(matrix: *const GpMatrix, tol: f64, result: *mut GpPsdResult) -> GpStatus {
    guard(|| {
        if tol.is_nan() || tol < 0.0 {
            return Err(invalid("tolerance must be nonnegative"));
        }
        let report = input(matrix, "matrix")?.0.is_psd(tol);
        *out(result, "result")? = GpPsdResult {
            is_psd: report.is_psd,
            min_eigenvalue: report.min_eigenvalue,
            matrix_scale: report.matrix_scale,
        };
        Ok(())
    })
}

/// `r` points of `S^{n-1}` from `r * n` row-major coordinates. With
/// `normalize` set, each point is scaled to unit length first.
///
/// # Safety
/// `data` must point to `r * n` doubles; `points` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_points_new(
    n: usize,
    r: usize,
    data: *const f64,
    normalize: bool,
    points: *mut *mut GpPoints,
) -> GpStatus {
    guard(|| {
        let len = n.checked_mul(r).ok_or_else(|| invalid("size overflows"))?;
        let data = array(data, len, "data")?;
        let slot = out(points, "points")?;
        let rows = rows_of(data, r, n);
        let config =
            if normalize { PointConfiguration::normalized(n, rows)? } else { PointConfiguration::new_sphere(n, rows)? };
        *slot = boxed(GpPoints(config));
        Ok(())
    })
}

/// `simplex(n)`, `cross_polytope(n)` or `icosahedron`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `points` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_points_named(name: *const c_char, points: *mut *mut GpPoints) -> GpStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name).to_str().map_err(|_| invalid("name is not UTF-8"))?;
        let slot = out(points, "points")?;
        *slot = boxed(GpPoints(named_code(name)?));
        Ok(())
    })
}

/// `r` uniform points on `S^{n-1}` from the seeded stream.
///
/// # Safety
/// `points` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_points_sample(n: usize, r: usize, seed: u64, points: *mut *mut GpPoints) -> GpStatus {
    guard(|| {
        let slot = out(points, "points")?;
        *slot = boxed(GpPoints(sample_sphere(n, r, seed)?));
        Ok(())
    })
}

/// # Safety
/// `points` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gp_points_free(points: *mut GpPoints) {
    if !points.is_null() {
        drop(Box::from_raw(points));
    }
}

/// # Safety
/// `points` must be a live handle; `n` and `r` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_points_shape(points: *const GpPoints, n: *mut usize, r: *mut usize) -> GpStatus {
    guard(|| {
        let p = &input(points, "points")?.0;
        *out(n, "n")? = p.n();
        *out(r, "r")? = p.len();
        Ok(())
    })
}

/// `(G_k^{(n,m)}(<p_i,p_j>, p_i^(m), p_j^(m)))`.
///
/// # Safety
/// `points` must be a live handle; `matrix` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_kernel_matrix(
    points: *const GpPoints,
    m: u32,
    k: u32,
    matrix: *mut *mut GpMatrix,
) -> GpStatus {
    guard(|| {
        let p = &input(points, "points")?.0;
        let slot = out(matrix, "matrix")?;
        *slot = boxed(GpMatrix(kernel_matrix(p, m, k)?.base));
        Ok(())
    })
}

/// Pair from `T` (`r * r` row-major) and `U` (`r * (n - 1)` row-major).
///
/// # Safety
/// `t` and `u` must hold the stated number of doubles; `pair` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_new(
    n: usize,
    r: usize,
    t: *const f64,
    u: *const f64,
    pair: *mut *mut GpPair,
) -> GpStatus {
    guard(|| {
        if n < 2 {
            return Err(invalid(format!("ambient dimension n = {n} must be at least 2")));
        }
        let t_len = r.checked_mul(r).ok_or_else(|| invalid("size overflows"))?;
        let u_len = r.checked_mul(n - 1).ok_or_else(|| invalid("size overflows"))?;
        let t = array(t, t_len, "t")?;
        let u = array(u, u_len, "u")?;
        let slot = out(pair, "pair")?;
        let tm = SymmetricMatrix::from_fn(r, |i, j| t[i * r + j])?;
        let um = DenseMatrix::from_fn(r, n - 1, |i, j| u[i * (n - 1) + j]);
        *slot = boxed(GpPair(make_pair(tm, um, n)?));
        Ok(())
    })
}

/// Pair realized by a point configuration.
///
/// # Safety
/// `points` must be a live handle; `pair` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_from_points(points: *const GpPoints, pair: *mut *mut GpPair) -> GpStatus {
    guard(|| {
        let p = &input(points, "points")?.0;
        let slot = out(pair, "pair")?;
        *slot = boxed(GpPair(FeasiblePair::from_points(p)?));
        Ok(())
    })
}

/// # Safety
/// `pair` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_free(pair: *mut GpPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Membership of the pair in level `m` for degrees `1..=d`.
///
/// # Safety
/// `pair` must be a live handle; `member` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_lambda_member(
    pair: *const GpPair,
    m: usize,
    d: u32,
    tol: f64,
    member: *mut bool,
) -> GpStatus {
    guard(|| {
        let p = &input(pair, "pair")?.0;
        *out(member, "member")? = lambda_member(p, m, d, tol)?.member;
        Ok(())
    })
}

/// # Safety
/// `pair` must be a live handle; `member` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_delta_member(pair: *const GpPair, tol: f64, member: *mut bool) -> GpStatus {
    guard(|| {
        let p = &input(pair, "pair")?.0;
        *out(member, "member")? = delta_member(p, tol)?.member;
        Ok(())
    })
}

/// Bound `f(1) / f_0` for the polynomial with monomial coefficients
/// `coeffs[0..len]`, after verifying the certificate.
///
/// # Safety
/// `coeffs` must point to `len` doubles; `bound` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_delsarte_bound(
    coeffs: *const f64,
    len: usize,
    n: u32,
    theta: f64,
    bound: *mut f64,
) -> GpStatus {
    guard(|| {
        let c = array(coeffs, len, "coeffs")?;
        if c.is_empty() {
            return Err(invalid("polynomial has no coefficients"));
        }
        *out(bound, "bound")? = delsarte_bound(&Poly1::new(c.to_vec()), n, theta)?.bound;
        Ok(())
    })
}

/// Best certificate of the given degree found by the linear program. The
/// Gegenbauer coefficients `f_0..f_degree` are written to `coeffs` when it
/// is not NULL, which then must hold `degree + 1` doubles.
///
/// # Safety
/// `bound` must be valid for writes; `coeffs` is NULL or valid for
/// `degree + 1` writes.
#[no_mangle]
pub unsafe extern "C" fn gp_delsarte_lp(
    n: u32,
    theta: f64,
    degree: u32,
    grid: usize,
    bound: *mut f64,
    coeffs: *mut f64,
) -> GpStatus {
    guard(|| {
        let slot = out(bound, "bound")?;
        let cert = delsarte_lp(n, theta, degree, grid)?;
        *slot = cert.bound;
        if !coeffs.is_null() {
            let dst = slice::from_raw_parts_mut(coeffs, degree as usize + 1);
            dst.fill(0.0);
            for (d, c) in dst.iter_mut().zip(&cert.coefficients) {
                *d = *c;
            }
        }
        Ok(())
    })
}

/// `q_omega(N)` for the pattern with block sizes `parts[0..len]`.
///
/// # Safety
/// `parts` must point to `len` integers; `count` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gp_q_omega(parts: *const u32, len: usize, big_n: u64, count: *mut u64) -> GpStatus {
    guard(|| {
        if len > 0 && parts.is_null() {
            return Err(null("parts"));
        }
        let parts = if len == 0 { Vec::new() } else { slice::from_raw_parts(parts, len).to_vec() };
        let omega = PartitionPattern::new(parts)?;
        let value = q_omega(&omega, big_n)?;
        *out(count, "count")? =
            u64::try_from(value).map_err(|_| invalid(format!("q_omega = {value} does not fit in 64 bits")))?;
        Ok(())
    })
}
