//! C ABI over `nonlocal-wave`.
//!
//! Objects cross the boundary as opaque heap handles (`NlwKernel`,
//! `NlwTable`, `NlwField`), each released by its own `*_free` function.
//! Every fallible call returns an [`NlwStatus`] and writes results through
//! out-pointers; on failure a description is available from
//! [`nlw_last_error_message`] on the same thread. Panics never unwind into C
//! and are reported as `NLW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nonlocal_wave::multiplier::{
    build_table, multiplier, multiplier_asymptotic, multiplier_extended_quadrature,
    multiplier_hypergeometric, multiplier_quadrature, multiplier_radial_series, scaling_constant,
    KernelParams, MultiplierTable,
};
use nonlocal_wave::specfun::SeriesControl;
use nonlocal_wave::torus::{synthetic_field, SpectralField};
use nonlocal_wave::wave::{solve, WaveProblem};
use nonlocal_wave::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlwStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    NonConvergence = 3,
    Shape = 4,
    InsufficientData = 5,
    CorruptedTable = 6,
    Parse = 7,
    Panic = 8,
}

/// Evaluation path for [`nlw_multiplier`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlwPath {
    Routed = 0,
    Hypergeometric = 1,
    Quadrature = 2,
    ExtendedQuadrature = 3,
    RadialSeries = 4,
    Asymptotic = 5,
}

/// Kernel parameters (n, δ, β).
pub struct NlwKernel(KernelParams);

/// Multiplier values on every attained |k|² of a box.
pub struct NlwTable(MultiplierTable);

/// Fourier coefficients on the box [−K, K]^n.
pub struct NlwField(SpectralField);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Core(Error),
    Utf8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn status_of(e: &Error) -> NlwStatus {
    match e {
        Error::Domain(_) | Error::Usage(_) => NlwStatus::Domain,
        Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::Cancellation { .. } => {
            NlwStatus::NonConvergence
        }
        Error::TableEntry { source, .. } => status_of(source),
        Error::Shape(_) => NlwStatus::Shape,
        Error::InsufficientData(_) => NlwStatus::InsufficientData,
        Error::CorruptedTable { .. } => NlwStatus::CorruptedTable,
        Error::Io(_) | Error::Json(_) => NlwStatus::Parse,
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NlwStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NlwStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            NlwStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Utf8)) => {
            set_last_error("input string is not valid UTF-8".into());
            NlwStatus::Parse
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            NlwStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the most recent failure on this thread, or NULL after a
/// successful call. Valid until the next `nlw_*` call on the same thread.
#[no_mangle]
pub extern "C" fn nlw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nlw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create kernel parameters. Requires n ≥ 1, δ > 0 and finite β.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nlw_kernel_new(n: u32, delta: f64, beta: f64, out: *mut *mut NlwKernel) -> NlwStatus {
    guard(|| {
        let params = KernelParams::new(n, delta, beta)?;
        write(out, boxed(NlwKernel(params)), "out")
    })
}

/// # Safety
/// `kernel` must be NULL or a live handle from [`nlw_kernel_new`].
#[no_mangle]
pub unsafe extern "C" fn nlw_kernel_free(kernel: *mut NlwKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Normalization constant of the kernel.
///
/// # Safety
/// `kernel` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn nlw_scaling_constant(kernel: *const NlwKernel, out: *mut f64) -> NlwStatus {
    guard(|| {
        let k = deref(kernel, "kernel")?;
        write(out, scaling_constant(&k.0), "out")
    })
}

/// Multiplier m(r) at frequency magnitude r ≥ 0 along the requested path.
///
/// # Safety
/// `kernel` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn nlw_multiplier(
    kernel: *const NlwKernel,
    r: f64,
    path: NlwPath,
    out: *mut f64,
) -> NlwStatus {
    guard(|| {
        let p = &deref(kernel, "kernel")?.0;
        let value = match path {
            NlwPath::Routed => multiplier(p, r)?.value,
            NlwPath::Hypergeometric => multiplier_hypergeometric(p, r)?,
            NlwPath::Quadrature => multiplier_quadrature(p, r)?,
            NlwPath::ExtendedQuadrature => multiplier_extended_quadrature(p, r)?,
            NlwPath::RadialSeries => multiplier_radial_series(p, r, &SeriesControl::default())?,
            NlwPath::Asymptotic => multiplier_asymptotic(p, r)?,
        };
        write(out, value, "out")
    })
}

/// Tabulate the multiplier over the box [−K, K]^n.
///
/// # Safety
/// `kernel` must be a live handle and `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nlw_table_build(
    kernel: *const NlwKernel,
    box_radius: u32,
    out: *mut *mut NlwTable,
) -> NlwStatus {
    guard(|| {
        let k = deref(kernel, "kernel")?;
        let table = build_table(&k.0, box_radius)?;
        write(out, boxed(NlwTable(table)), "out")
    })
}

/// Table value at |k|² = `norm_sq`; `NLW_STATUS_DOMAIN` if not attained.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn nlw_table_get(table: *const NlwTable, norm_sq: u64, out: *mut f64) -> NlwStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let value = t.0.get(norm_sq).ok_or_else(|| {
            Error::Domain(format!("|k|^2 = {norm_sq} is not attained in the table"))
        })?;
        write(out, value, "out")
    })
}

/// Number of tabulated |k|² values; 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nlw_table_len(table: *const NlwTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `table` must be NULL or a live handle from [`nlw_table_build`].
#[no_mangle]
pub unsafe extern "C" fn nlw_table_free(table: *mut NlwTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Real random field with |f̂_k| ~ (1+|k|)^−decay, reproducible from `seed`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nlw_field_synthetic(
    dim: u32,
    box_radius: u32,
    decay: f64,
    seed: u64,
    out: *mut *mut NlwField,
) -> NlwStatus {
    guard(|| {
        let f = synthetic_field(dim, box_radius, decay, seed)?;
        write(out, boxed(NlwField(f)), "out")
    })
}

/// Parse a field from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn nlw_field_from_json(json: *const c_char, out: *mut *mut NlwField) -> NlwStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Failure::Utf8)?;
        let f = SpectralField::from_json(text)?;
        write(out, boxed(NlwField(f)), "out")
    })
}

/// Serialize a field to JSON. Free the result with [`nlw_string_free`].
///
/// # Safety
/// `field` must be a live handle and `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nlw_field_to_json(field: *const NlwField, out: *mut *mut c_char) -> NlwStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let text = f.0.to_json()?;
        let c = CString::new(text).map_err(|_| Failure::Utf8)?;
        write(out, c.into_raw(), "out")
    })
}

/// Sobolev norm ‖f‖_{H^q} over the box.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn nlw_field_sobolev_norm(field: *const NlwField, q: f64, out: *mut f64) -> NlwStatus {
    guard(|| {
        let f = deref(field, "field")?;
        write(out, f.0.sobolev_norm(q), "out")
    })
}

/// Coefficient at multi-index `k` (length must equal the field dimension).
///
/// # Safety
/// `field` must be a live handle, `k` must point to `len` integers, and
/// `re`, `im` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn nlw_field_coeff(
    field: *const NlwField,
    k: *const i64,
    len: usize,
    re: *mut f64,
    im: *mut f64,
) -> NlwStatus {
    guard(|| {
        let f = deref(field, "field")?;
        if k.is_null() {
            return Err(Failure::Null("k"));
        }
        let idx = std::slice::from_raw_parts(k, len);
        let c = f.0.get(idx)?;
        write(re, c.re, "re")?;
        write(im, c.im, "im")
    })
}

/// # Safety
/// `field` must be NULL or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn nlw_field_free(field: *mut NlwField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// p-th time derivative of the solution at time t.
///
/// With `b` NULL the problem is homogeneous (f, g required); with `f` and `g`
/// NULL it is forced (b required); otherwise all three are superposed.
///
/// # Safety
/// Non-NULL handles must be live and `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nlw_solve(
    table: *const NlwTable,
    f: *const NlwField,
    g: *const NlwField,
    b: *const NlwField,
    t: f64,
    p: u32,
    out: *mut *mut NlwField,
) -> NlwStatus {
    guard(|| {
        let table = deref(table, "table")?.0.clone();
        let problem = match (f.as_ref(), g.as_ref(), b.as_ref()) {
            (Some(f), Some(g), None) => WaveProblem::homogeneous(table, f.0.clone(), g.0.clone())?,
            (None, None, Some(b)) => WaveProblem::forced(table, b.0.clone())?,
            (Some(f), Some(g), Some(b)) => WaveProblem::combined(table, f.0.clone(), g.0.clone(), b.0.clone())?,
            (None, _, _) => return Err(Failure::Null("f")),
            (_, None, _) => return Err(Failure::Null("g")),
        };
        let snap = solve(&problem, t, p)?;
        write(out, boxed(NlwField(snap.field)), "out")
    })
}
