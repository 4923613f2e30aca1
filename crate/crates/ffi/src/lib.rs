//! C interface to `qpc`.
//!
//! Processes are opaque `QpcProcess` handles owned by the caller and released
//! with `qpc_process_free`. Every fallible function returns a `QpcStatus`
//! and writes its result through an out-pointer; on failure
//! `qpc_last_error_message` describes the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qpc::capabilities::{self, CapabilityKind};
use qpc::processes::{self, NoiseModel, ProcessMatrix};
use qpc::qmath::{c, ComplexMatrix};
use qpc::QpcError;

/// Opaque process matrix.
pub struct QpcProcess {
    inner: ProcessMatrix,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPhysical = 3,
    Infeasible = 4,
    SolverFailure = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

pub const QPC_KIND_NON_CLASSICAL: u32 = 0;
pub const QPC_KIND_ENTANGLEMENT: u32 = 1;
pub const QPC_KIND_COHERENCE_CREATION: u32 = 2;
pub const QPC_KIND_COHERENCE_PRESERVATION: u32 = 3;
/// Superposition with `h_0 = |0>`, `h_j = (|0> + |j>)/sqrt2`.
pub const QPC_KIND_SUPERPOSITION: u32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn status_of(e: &QpcError) -> QpcStatus {
    match e {
        QpcError::Infeasible => QpcStatus::Infeasible,
        QpcError::Solver(_) => QpcStatus::SolverFailure,
        QpcError::NotHermitian { .. } | QpcError::NotPhysical(_) => QpcStatus::NotPhysical,
        _ => QpcStatus::InvalidArgument,
    }
}

/// Run `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (QpcStatus, String)>) -> QpcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QpcStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QpcStatus::Panic
        }
    }
}

fn lib<T>(r: qpc::Result<T>) -> Result<T, (QpcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QpcStatus, String) {
    (QpcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn process_ref<'a>(p: *const QpcProcess, what: &str) -> Result<&'a ProcessMatrix, (QpcStatus, String)> {
    p.as_ref().map(|p| &p.inner).ok_or_else(|| null(what))
}

unsafe fn emit(out: *mut *mut QpcProcess, inner: ProcessMatrix) -> Result<(), (QpcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(QpcProcess { inner }));
    Ok(())
}

unsafe fn emit_value(out: *mut f64, value: f64) -> Result<(), (QpcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = value;
    Ok(())
}

fn kind_of(kind: u32, dim: usize) -> Result<CapabilityKind, (QpcStatus, String)> {
    match kind {
        QPC_KIND_NON_CLASSICAL => Ok(CapabilityKind::NonClassical),
        QPC_KIND_ENTANGLEMENT => Ok(CapabilityKind::EntanglementGeneration),
        QPC_KIND_COHERENCE_CREATION => Ok(CapabilityKind::coherence_creation(dim)),
        QPC_KIND_COHERENCE_PRESERVATION => Ok(CapabilityKind::coherence_preservation(dim)),
        QPC_KIND_SUPERPOSITION => Ok(CapabilityKind::superposition(dim)),
        other => Err((QpcStatus::InvalidArgument, format!("unknown capability kind {other}"))),
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qpc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Build a process from `2 * dim^4` doubles: the `dim^2 x dim^2` matrix,
/// row-major, as interleaved `(re, im)` pairs. The matrix must be Hermitian
/// and of unit trace within `tolerance`.
///
/// # Safety
/// `entries` must point to `2 * dim^4` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_from_entries(
    dim: usize,
    entries: *const f64,
    tolerance: f64,
    out: *mut *mut QpcProcess,
) -> QpcStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        if dim == 0 || dim > 64 {
            return Err((QpcStatus::InvalidArgument, format!("unsupported dimension {dim}")));
        }
        let n = dim * dim;
        let raw = std::slice::from_raw_parts(entries, 2 * n * n);
        let choi = ComplexMatrix::from_fn(n, n, |i, j| c(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1]));
        let p = lib(ProcessMatrix::with_tolerance(dim, choi, tolerance))?;
        emit(out, p)
    })
}

/// The Ising demonstration process at time `t` with depolarisation rate
/// `gamma` on the second qubit.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_demo(t: f64, gamma: f64, out: *mut *mut QpcProcess) -> QpcStatus {
    guard(|| {
        let noise = lib(NoiseModel::with_gamma(gamma))?;
        emit(out, lib(processes::demo_process(t, &noise))?)
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_cz(out: *mut *mut QpcProcess) -> QpcStatus {
    guard(|| emit(out, processes::cz_process()))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_identity(dim: usize, out: *mut *mut QpcProcess) -> QpcStatus {
    guard(|| {
        if dim == 0 || dim > 64 {
            return Err((QpcStatus::InvalidArgument, format!("unsupported dimension {dim}")));
        }
        emit(out, ProcessMatrix::identity(dim))
    })
}

/// `later` applied after `earlier`.
///
/// # Safety
/// Handles must be valid or null; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_compose(
    later: *const QpcProcess,
    earlier: *const QpcProcess,
    out: *mut *mut QpcProcess,
) -> QpcStatus {
    guard(|| {
        let l = process_ref(later, "later")?;
        let e = process_ref(earlier, "earlier")?;
        emit(out, lib(processes::compose(l, e))?)
    })
}

/// `p * a + (1 - p) * b`.
///
/// # Safety
/// Handles must be valid or null; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_mix(
    p: f64,
    a: *const QpcProcess,
    b: *const QpcProcess,
    out: *mut *mut QpcProcess,
) -> QpcStatus {
    guard(|| {
        let a = process_ref(a, "a")?.clone();
        let b = process_ref(b, "b")?.clone();
        emit(out, lib(processes::mix(&[p, 1.0 - p], &[a, b]))?)
    })
}

/// # Safety
/// `process` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_free(process: *mut QpcProcess) {
    if !process.is_null() {
        drop(Box::from_raw(process));
    }
}

/// Input dimension `d` of the process, or 0 for a null handle.
///
/// # Safety
/// `process` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_dim(process: *const QpcProcess) -> usize {
    process.as_ref().map_or(0, |p| p.inner.dim())
}

/// Copy the matrix into `buffer` as interleaved `(re, im)` pairs, row-major;
/// `len` is the buffer length in doubles and must be at least `2 * dim^4`.
///
/// # Safety
/// `buffer` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_entries(process: *const QpcProcess, buffer: *mut f64, len: usize) -> QpcStatus {
    guard(|| {
        let p = process_ref(process, "process")?;
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        let m = p.choi();
        let n = m.nrows();
        if len < 2 * n * n {
            return Err((QpcStatus::BufferTooSmall, format!("buffer holds {len} doubles, {} needed", 2 * n * n)));
        }
        let out = std::slice::from_raw_parts_mut(buffer, 2 * n * n);
        for i in 0..n {
            for j in 0..n {
                out[2 * (i * n + j)] = m[(i, j)].re;
                out[2 * (i * n + j) + 1] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Capability composition of `process` for one of the `QPC_KIND_*` kinds.
///
/// # Safety
/// `process` must be valid or null; `value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_alpha(process: *const QpcProcess, kind: u32, value: *mut f64) -> QpcStatus {
    guard(|| {
        let p = process_ref(process, "process")?;
        let k = kind_of(kind, p.dim())?;
        emit_value(value, lib(capabilities::alpha(p, &k))?.value)
    })
}

/// Capability robustness of `process`.
///
/// # Safety
/// `process` must be valid or null; `value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_beta(process: *const QpcProcess, kind: u32, value: *mut f64) -> QpcStatus {
    guard(|| {
        let p = process_ref(process, "process")?;
        let k = kind_of(kind, p.dim())?;
        emit_value(value, lib(capabilities::beta(p, &k))?.value)
    })
}

/// Largest fidelity with `target` reachable by incapable processes.
///
/// # Safety
/// `target` must be valid or null; `value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_fidelity_threshold(target: *const QpcProcess, kind: u32, value: *mut f64) -> QpcStatus {
    guard(|| {
        let p = process_ref(target, "target")?;
        let k = kind_of(kind, p.dim())?;
        emit_value(value, lib(capabilities::fidelity_threshold(p, &k))?.value)
    })
}

/// `tr(chi target)`.
///
/// # Safety
/// Handles must be valid or null; `value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_process_fidelity(
    process: *const QpcProcess,
    target: *const QpcProcess,
    value: *mut f64,
) -> QpcStatus {
    guard(|| {
        let p = process_ref(process, "process")?;
        let t = process_ref(target, "target")?;
        emit_value(value, lib(capabilities::process_fidelity(p, t))?)
    })
}
