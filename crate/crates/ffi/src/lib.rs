//! C ABI for the metric-depth library.
//!
//! Handles are opaque pointers created and freed here; every fallible call
//! returns an [`MdStatus`] and writes its result through out-pointers. On
//! failure a human-readable message is stored per thread and can be read
//! with [`md_last_error_message`] until the next failing call on the same
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use metric_depth::depth::{empirical_depth, subsampled_depth, Sample};
use metric_depth::metrics::{DistanceMatrix, Minkowski};
use metric_depth::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Inputs failed validation (bad matrix, exponent, index, budget, ...).
    InvalidArgument = 2,
    /// The sample holds fewer than two points.
    InsufficientSample = 3,
    /// The computation itself failed (non-finite distance, panic, ...).
    ComputeFailed = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn fail(error: &Error) -> MdStatus {
    set_last_error(&error.to_string());
    match error {
        Error::InsufficientSample { .. } => MdStatus::InsufficientSample,
        e if e.is_validation() => MdStatus::InvalidArgument,
        _ => MdStatus::ComputeFailed,
    }
}

fn null_pointer(what: &str) -> MdStatus {
    set_last_error(&format!("{what} must not be null"));
    MdStatus::NullPointer
}

fn guard<F: FnOnce() -> MdStatus>(body: F) -> MdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            MdStatus::ComputeFailed
        }
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn md_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn md_status_name(status: MdStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        MdStatus::Ok => b"ok\0",
        MdStatus::NullPointer => b"null pointer\0",
        MdStatus::InvalidArgument => b"invalid argument\0",
        MdStatus::InsufficientSample => b"insufficient sample\0",
        MdStatus::ComputeFailed => b"compute failed\0",
    };
    name.as_ptr() as *const c_char
}

/// Opaque validated distance matrix over `n` items.
pub struct MdMatrix {
    matrix: DistanceMatrix,
}

/// Create a distance matrix from a row-major `n * n` buffer. The matrix
/// must be symmetric (within 1e-12), nonnegative and zero on the diagonal.
///
/// # Safety
/// `entries` must point to `n * n` readable doubles; `out` must be a valid
/// destination for one pointer.
#[no_mangle]
pub unsafe extern "C" fn md_matrix_new(
    entries: *const f64,
    n: usize,
    out: *mut *mut MdMatrix,
) -> MdStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if entries.is_null() {
        return null_pointer("entries");
    }
    let values = std::slice::from_raw_parts(entries, n * n);
    guard(|| {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| values[i * n..(i + 1) * n].to_vec()).collect();
        match DistanceMatrix::new(labels, rows) {
            Ok(matrix) => {
                unsafe { *out = Box::into_raw(Box::new(MdMatrix { matrix })) };
                MdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Free a matrix handle; a null handle is ignored.
///
/// # Safety
/// `handle` must come from [`md_matrix_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn md_matrix_free(handle: *mut MdMatrix) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of items the matrix covers; zero for a null handle.
///
/// # Safety
/// `handle` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn md_matrix_len(handle: *const MdMatrix) -> usize {
    if handle.is_null() {
        0
    } else {
        (*handle).matrix.n()
    }
}

/// Depth of item `query_index` with respect to all items of the matrix.
///
/// # Safety
/// `handle` must be valid; `out_depth` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn md_matrix_depth(
    handle: *const MdMatrix,
    query_index: usize,
    out_depth: *mut f64,
) -> MdStatus {
    if handle.is_null() {
        return null_pointer("handle");
    }
    if out_depth.is_null() {
        return null_pointer("out_depth");
    }
    let matrix = &(*handle).matrix;
    guard(|| {
        let sample = Sample::new((0..matrix.n()).collect(), matrix);
        match empirical_depth(&query_index, &sample) {
            Ok(depth) => {
                unsafe { *out_depth = depth.value };
                MdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Depth of every item with respect to the full matrix, written to
/// `out_depths[0..n]`.
///
/// # Safety
/// `handle` must be valid; `out_depths` must hold `md_matrix_len(handle)`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn md_matrix_depths(
    handle: *const MdMatrix,
    out_depths: *mut f64,
) -> MdStatus {
    if handle.is_null() {
        return null_pointer("handle");
    }
    if out_depths.is_null() {
        return null_pointer("out_depths");
    }
    let matrix = &(*handle).matrix;
    let out = std::slice::from_raw_parts_mut(out_depths, matrix.n());
    guard(|| {
        let sample = Sample::new((0..matrix.n()).collect(), matrix);
        for (index, slot) in out.iter_mut().enumerate() {
            match empirical_depth(&index, &sample) {
                Ok(depth) => *slot = depth.value,
                Err(e) => return fail(&e),
            }
        }
        MdStatus::Ok
    })
}

/// Opaque point set in `dim` dimensions with a Minkowski metric.
pub struct MdPoints {
    points: Vec<Vec<f64>>,
    metric: Minkowski,
    dim: usize,
}

/// Create a point set from a row-major `n * dim` coordinate buffer with the
/// Minkowski exponent `p >= 1` (use `INFINITY` for the maximum norm, `2`
/// for Euclidean).
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles; `out` must be a valid
/// destination for one pointer.
#[no_mangle]
pub unsafe extern "C" fn md_points_new(
    coords: *const f64,
    n: usize,
    dim: usize,
    p: f64,
    out: *mut *mut MdPoints,
) -> MdStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if coords.is_null() {
        return null_pointer("coords");
    }
    if dim == 0 {
        set_last_error("dim must be at least 1");
        return MdStatus::InvalidArgument;
    }
    let values = std::slice::from_raw_parts(coords, n * dim);
    guard(|| {
        let metric = match Minkowski::new(p) {
            Ok(metric) => metric,
            Err(e) => return fail(&e),
        };
        let points: Vec<Vec<f64>> = (0..n)
            .map(|i| values[i * dim..(i + 1) * dim].to_vec())
            .collect();
        unsafe { *out = Box::into_raw(Box::new(MdPoints { points, metric, dim })) };
        MdStatus::Ok
    })
}

/// Free a point-set handle; a null handle is ignored.
///
/// # Safety
/// `handle` must come from [`md_points_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn md_points_free(handle: *mut MdPoints) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn read_query(handle: &MdPoints, query: *const f64) -> Vec<f64> {
    std::slice::from_raw_parts(query, handle.dim).to_vec()
}

/// Exact depth of `query` (a `dim`-vector) with respect to the point set.
///
/// # Safety
/// `handle` must be valid; `query` must hold `dim` readable doubles;
/// `out_depth` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn md_points_depth(
    handle: *const MdPoints,
    query: *const f64,
    out_depth: *mut f64,
) -> MdStatus {
    if handle.is_null() {
        return null_pointer("handle");
    }
    if query.is_null() {
        return null_pointer("query");
    }
    if out_depth.is_null() {
        return null_pointer("out_depth");
    }
    let set = &*handle;
    let query = read_query(set, query);
    guard(|| {
        let sample = Sample::new(set.points.clone(), set.metric);
        match empirical_depth(&query, &sample) {
            Ok(depth) => {
                unsafe { *out_depth = depth.value };
                MdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Subsampled depth estimate over `budget` seeded pair draws; equals the
/// exact depth when `budget` covers every pair.
///
/// # Safety
/// As [`md_points_depth`].
#[no_mangle]
pub unsafe extern "C" fn md_points_depth_subsampled(
    handle: *const MdPoints,
    query: *const f64,
    budget: u64,
    seed: u64,
    out_depth: *mut f64,
) -> MdStatus {
    if handle.is_null() {
        return null_pointer("handle");
    }
    if query.is_null() {
        return null_pointer("query");
    }
    if out_depth.is_null() {
        return null_pointer("out_depth");
    }
    let set = &*handle;
    let query = read_query(set, query);
    guard(|| {
        let sample = Sample::new(set.points.clone(), set.metric);
        match subsampled_depth(&query, &sample, budget, seed) {
            Ok(depth) => {
                unsafe { *out_depth = depth.value };
                MdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
