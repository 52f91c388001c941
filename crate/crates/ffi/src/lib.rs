//! C ABI over the `transversal` crate.
//!
//! Objects cross the boundary as opaque handles (`TvConfiguration`,
//! `TvSolution`) that the caller releases with the matching `*_free`
//! function. Every fallible call returns a [`TvStatus`]; on failure a
//! human-readable message is kept per thread and can be copied out with
//! [`tv_last_error_message`]. Polygon indices are 0-based here.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use transversal::factor::{correcting_factor, Contact};
use transversal::geom::{Configuration, ConvexPolygon, GeomError, Line, Point};
use transversal::io::{parse_instance, write_instance, write_result, IoError};
use transversal::oracle::brute_force_c_m;
use transversal::solver::{solve_minimal_expansion, Classification, SolveError, SolverOptions};

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ValidationError = 4,
    SolveFailed = 5,
    OutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TvContact {
    Vertex = 0,
    Edge = 1,
    None = 2,
}

/// Solver settings; obtain defaults from [`tv_solver_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvSolverOptions {
    pub grid_size: usize,
    pub angle_tol: f64,
    pub value_tol: f64,
    pub collinear_tol: f64,
    pub certificate_tol: f64,
}

impl From<TvSolverOptions> for SolverOptions {
    fn from(o: TvSolverOptions) -> Self {
        SolverOptions {
            grid_size: o.grid_size,
            angle_tol: o.angle_tol,
            value_tol: o.value_tol,
            collinear_tol: o.collinear_tol,
            certificate_tol: o.certificate_tol,
        }
    }
}

/// One tangent polygon of a certificate.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvTangency {
    pub polygon: usize,
    /// -1 or +1: side of the line holding the centroid.
    pub side: i8,
    pub contact: TvContact,
    pub residual: f64,
}

/// Opaque configuration of convex polygons.
pub struct TvConfiguration(Configuration);

/// Opaque solver result.
pub struct TvSolution(transversal::solver::Solution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(status: TvStatus, msg: impl Into<String>) -> TvStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TvStatus) -> TvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TvStatus::Panic, "internal panic"),
    }
}

fn io_status(e: &IoError) -> TvStatus {
    match e {
        IoError::Parse { .. } => TvStatus::ParseError,
        _ => TvStatus::ValidationError,
    }
}

fn solve_status(e: &SolveError) -> TvStatus {
    match e {
        SolveError::InvalidOptions(_) => TvStatus::InvalidArgument,
        SolveError::Geom(_) | SolveError::EmptyConfiguration => TvStatus::ValidationError,
        SolveError::CertificateInvalid(_) => TvStatus::SolveFailed,
    }
}

fn geom_fail(polygon: Option<usize>, e: GeomError) -> TvStatus {
    let msg = match polygon {
        Some(k) => format!("polygon {k}: {e}"),
        None => e.to_string(),
    };
    fail(TvStatus::ValidationError, msg)
}

fn hand_out<T>(value: T, out: *mut *mut T) -> TvStatus {
    // SAFETY: callers check `out` for null before calling.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    TvStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated
/// and NUL-terminated) and returns the full message length in bytes,
/// excluding the terminator. Returns 0 when there is no message.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tv_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

#[no_mangle]
pub extern "C" fn tv_solver_options_default() -> TvSolverOptions {
    let d = SolverOptions::default();
    TvSolverOptions {
        grid_size: d.grid_size,
        angle_tol: d.angle_tol,
        value_tol: d.value_tol,
        collinear_tol: d.collinear_tol,
        certificate_tol: d.certificate_tol,
    }
}

/// Builds a configuration from flat arrays. Polygon `k` has
/// `vertex_counts[k]` vertices; all coordinates are packed as
/// `x0, y0, x1, y1, ...` in `coords`, which holds `2 * sum(vertex_counts)`
/// values.
///
/// # Safety
/// `vertex_counts` must point to `n_polygons` values, `coords` to
/// `2 * sum(vertex_counts)` values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_configuration_from_arrays(
    n_polygons: usize,
    vertex_counts: *const usize,
    coords: *const f64,
    out: *mut *mut TvConfiguration,
) -> TvStatus {
    guard(|| {
        if out.is_null() || vertex_counts.is_null() || coords.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        if n_polygons == 0 {
            return fail(TvStatus::ValidationError, "configuration has no polygons");
        }
        let counts = slice::from_raw_parts(vertex_counts, n_polygons);
        let Some(total) = counts.iter().try_fold(0usize, |a, &c| a.checked_add(c)) else {
            return fail(TvStatus::InvalidArgument, "vertex count overflow");
        };
        let Some(n_coords) = total.checked_mul(2) else {
            return fail(TvStatus::InvalidArgument, "vertex count overflow");
        };
        let xy = slice::from_raw_parts(coords, n_coords);
        let mut polygons = Vec::with_capacity(n_polygons);
        let mut at = 0;
        for (k, &count) in counts.iter().enumerate() {
            let pts = xy[2 * at..2 * (at + count)]
                .chunks_exact(2)
                .map(|p| Point::new(p[0], p[1]))
                .collect();
            at += count;
            match ConvexPolygon::new(pts) {
                Ok(p) => polygons.push(p),
                Err(e) => return geom_fail(Some(k), e),
            }
        }
        match Configuration::new(polygons) {
            Ok(c) => hand_out(TvConfiguration(c), out),
            Err(e) => geom_fail(None, e),
        }
    })
}

/// Parses an instance document (UTF-8 JSON).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_configuration_from_json(
    json: *const c_char,
    out: *mut *mut TvConfiguration,
) -> TvStatus {
    guard(|| {
        if out.is_null() || json.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(TvStatus::ParseError, "instance is not valid UTF-8");
        };
        match parse_instance(text) {
            Ok(c) => hand_out(TvConfiguration(c), out),
            Err(e) => fail(io_status(&e), e.to_string()),
        }
    })
}

/// Serializes the configuration as an instance document. Release the
/// string with [`tv_string_free`].
///
/// # Safety
/// `config` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_configuration_to_json(
    config: *const TvConfiguration,
    out: *mut *mut c_char,
) -> TvStatus {
    guard(|| {
        if out.is_null() || config.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        *out = into_c_string(write_instance(&(&*config).0));
        TvStatus::Ok
    })
}

/// Number of polygons, or 0 for a null handle.
///
/// # Safety
/// `config` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_configuration_len(config: *const TvConfiguration) -> usize {
    config.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `config` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tv_configuration_free(config: *mut TvConfiguration) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Solves for the minimal homothety ratio. `options` may be null for
/// defaults.
///
/// # Safety
/// `config` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_solve(
    config: *const TvConfiguration,
    options: *const TvSolverOptions,
    out: *mut *mut TvSolution,
) -> TvStatus {
    guard(|| {
        if out.is_null() || config.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let opts = options
            .as_ref()
            .map_or_else(SolverOptions::default, |o| SolverOptions::from(*o));
        match solve_minimal_expansion(&(&*config).0, &opts) {
            Ok(s) => hand_out(TvSolution(s), out),
            Err(e) => fail(solve_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_free(solution: *mut TvSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Minimal ratio, or NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_c_m(solution: *const TvSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.0.c_m)
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_is_degenerate(solution: *const TvSolution) -> bool {
    solution.as_ref().is_some_and(|s| s.0.degenerate)
}

/// True when the original configuration already has a transversal.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_has_transversal(solution: *const TvSolution) -> bool {
    solution
        .as_ref()
        .is_some_and(|s| s.0.classification == Classification::HasTransversal)
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_line_count(solution: *const TvSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.0.lines.len())
}

/// Line `index` as normal angle `theta` in `[0, pi)` and offset: the set of
/// points `p` with `cos(theta) p.x + sin(theta) p.y = offset`.
///
/// # Safety
/// `solution` must be a live handle; `theta` and `offset` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_line(
    solution: *const TvSolution,
    index: usize,
    theta: *mut f64,
    offset: *mut f64,
) -> TvStatus {
    guard(|| {
        if solution.is_null() || theta.is_null() || offset.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        let Some(line) = (&*solution).0.lines.get(index) else {
            return fail(TvStatus::OutOfRange, format!("no line {index}"));
        };
        *theta = line.theta();
        *offset = line.offset();
        TvStatus::Ok
    })
}

/// Number of tangent polygons in the certificate of line `index`.
/// Degenerate solutions carry no certificates.
///
/// # Safety
/// `solution` must be a live handle and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_certificate_len(
    solution: *const TvSolution,
    index: usize,
    count: *mut usize,
) -> TvStatus {
    guard(|| {
        if solution.is_null() || count.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        let Some(cert) = (&*solution).0.certificates.get(index) else {
            return fail(TvStatus::OutOfRange, format!("no certificate {index}"));
        };
        *count = cert.tangent_indices.len();
        TvStatus::Ok
    })
}

/// Entry `entry` of the certificate of line `index`.
///
/// # Safety
/// `solution` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_certificate_entry(
    solution: *const TvSolution,
    index: usize,
    entry: usize,
    out: *mut TvTangency,
) -> TvStatus {
    guard(|| {
        if solution.is_null() || out.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        let Some(cert) = (&*solution).0.certificates.get(index) else {
            return fail(TvStatus::OutOfRange, format!("no certificate {index}"));
        };
        if entry >= cert.tangent_indices.len() {
            return fail(TvStatus::OutOfRange, format!("no entry {entry}"));
        }
        *out = TvTangency {
            polygon: cert.tangent_indices[entry],
            side: cert.sides[entry].value(),
            contact: match cert.contacts[entry] {
                Contact::Vertex => TvContact::Vertex,
                Contact::Edge => TvContact::Edge,
                Contact::None => TvContact::None,
            },
            residual: cert.residuals[entry],
        };
        TvStatus::Ok
    })
}

/// Result document for `solution`, computed on `config`. Release the
/// string with [`tv_string_free`].
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_solution_to_json(
    solution: *const TvSolution,
    config: *const TvConfiguration,
    out: *mut *mut c_char,
) -> TvStatus {
    guard(|| {
        if solution.is_null() || config.is_null() || out.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        *out = into_c_string(write_result(&(&*solution).0, &(&*config).0));
        TvStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Correcting factor of polygon `polygon` for the line with normal angle
/// `theta` and offset `offset`.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_correcting_factor(
    config: *const TvConfiguration,
    polygon: usize,
    theta: f64,
    offset: f64,
    out: *mut f64,
) -> TvStatus {
    guard(|| {
        if config.is_null() || out.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        if !theta.is_finite() || !offset.is_finite() {
            return fail(TvStatus::InvalidArgument, "line parameters must be finite");
        }
        let Some(p) = (&*config).0.polygons().get(polygon) else {
            return fail(TvStatus::OutOfRange, format!("no polygon {polygon}"));
        };
        *out = correcting_factor(p, &Line::from_angle(theta, offset));
        TvStatus::Ok
    })
}

/// Independent estimate of the minimal ratio by exhaustive angle scan.
///
/// # Safety
/// `config` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tv_brute_force_c_m(
    config: *const TvConfiguration,
    angle_steps: usize,
    c_tol: f64,
    out: *mut f64,
) -> TvStatus {
    guard(|| {
        if config.is_null() || out.is_null() {
            return fail(TvStatus::NullPointer, "null argument");
        }
        if angle_steps < 2 || !(c_tol > 0.0 && c_tol.is_finite()) {
            return fail(TvStatus::InvalidArgument, "need angle_steps >= 2 and c_tol > 0");
        }
        *out = brute_force_c_m(&(&*config).0, angle_steps, c_tol);
        TvStatus::Ok
    })
}
