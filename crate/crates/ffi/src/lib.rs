//! C interface to `aztec_dimers`.
//!
//! Objects are opaque handles created by `*_new`/`*_from_*` functions and
//! released with the matching `*_free`. Every fallible function returns an
//! [`AztecStatus`]; on failure a message is available from
//! [`aztec_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use aztec_dimers::error::Error;
use aztec_dimers::kasteleyn::{ln_partition_function, KasteleynMatrix};
use aztec_dimers::lattice::{AztecGraph, HeightPlan, WeightScheme};
use aztec_dimers::sampler::Sampler;
use aztec_dimers::spectral::{period_genus1, theta, ThetaParams};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AztecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidWeights = 3,
    BufferTooSmall = 4,
    Singular = 5,
    Domain = 6,
    Internal = 7,
}

/// A periodic weight scheme.
pub struct AztecWeights(WeightScheme);

/// An Aztec diamond with precomputed shuffling tables.
pub struct AztecSampler {
    sampler: Sampler,
    plan: HeightPlan,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(message: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(message.bytes().filter(|&b| b != 0));
        e.push(0);
    });
}

fn fail(status: AztecStatus, message: impl AsRef<str>) -> AztecStatus {
    set_error(message.as_ref());
    status
}

fn from_error(e: Error) -> AztecStatus {
    let status = match e {
        Error::InvalidWeights(_) => AztecStatus::InvalidWeights,
        Error::InvalidArgument(_) | Error::Json(_) | Error::EmptyGrid(_) => AztecStatus::InvalidArgument,
        Error::Singular => AztecStatus::Singular,
        Error::Degenerate(_) | Error::PoleProximity { .. } | Error::NoPrediction(_) => AztecStatus::Domain,
        _ => AztecStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> AztecStatus) -> AztecStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(AztecStatus::Internal, "panic inside aztec_dimers"))
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(AztecStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

macro_rules! out {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(v) => v,
            None => return fail(AztecStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn aztec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full length including the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn aztec_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if e.is_empty() {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        }
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len);
            ptr::copy_nonoverlapping(e.as_ptr().cast(), buf, n);
            *buf.add(n - 1) = 0;
        }
        e.len()
    })
}

/// Parses a weight scheme from JSON `{"k","l","alpha","beta","gamma"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aztec_weights_from_json(json: *const c_char, out: *mut *mut AztecWeights) -> AztecStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        if json.is_null() {
            return fail(AztecStatus::NullPointer, "json is null");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(AztecStatus::InvalidArgument, "json is not UTF-8");
        };
        match WeightScheme::from_json(text) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(AztecWeights(w)));
                AztecStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// The symmetric 2x2 family with parameter `a`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aztec_weights_symmetric(a: f64, out: *mut *mut AztecWeights) -> AztecStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        match WeightScheme::symmetric_two_by_two(a) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(AztecWeights(w)));
                AztecStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `w` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aztec_weights_free(w: *mut AztecWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// `ln |det K|` for the diamond of the given order.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aztec_ln_partition_function(w: *const AztecWeights, order: usize, out: *mut f64) -> AztecStatus {
    guard(|| {
        let w = deref!(w);
        let out = out!(out);
        let graph = match AztecGraph::with_order(order, w.0.clone()) {
            Ok(g) => g,
            Err(e) => return from_error(e),
        };
        match ln_partition_function(&KasteleynMatrix::build(&graph)) {
            Ok(v) => {
                *out = v;
                AztecStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// A sampler for the diamond of order `k l periods`.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aztec_sampler_new(w: *const AztecWeights, periods: usize, out: *mut *mut AztecSampler) -> AztecStatus {
    guard(|| {
        let w = deref!(w);
        let out = out!(out);
        *out = ptr::null_mut();
        let graph = match AztecGraph::new(periods, w.0.clone()) {
            Ok(g) => g,
            Err(e) => return from_error(e),
        };
        let plan = HeightPlan::new(&graph, graph.default_base_face());
        match Sampler::new(graph) {
            Ok(sampler) => {
                *out = Box::into_raw(Box::new(AztecSampler { sampler, plan }));
                AztecStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aztec_sampler_free(s: *mut AztecSampler) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Order of the diamond, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aztec_sampler_order(s: *const AztecSampler) -> usize {
    s.as_ref().map_or(0, |s| s.sampler.graph().order())
}

/// Number of white vertices (and of matched edges).
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aztec_sampler_num_white(s: *const AztecSampler) -> usize {
    s.as_ref().map_or(0, |s| s.sampler.graph().num_white())
}

/// Number of faces (length of a height array).
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aztec_sampler_num_faces(s: *const AztecSampler) -> usize {
    s.as_ref().map_or(0, |s| s.sampler.graph().faces().len())
}

/// Plane positions `(x, y)` of the faces, interleaved into `xy[2 * len]`.
///
/// # Safety
/// `s` must be a live handle; `xy` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn aztec_sampler_face_positions(s: *const AztecSampler, xy: *mut i64, len: usize) -> AztecStatus {
    guard(|| {
        let s = deref!(s);
        let faces = s.sampler.graph().faces();
        if xy.is_null() {
            return fail(AztecStatus::NullPointer, "xy is null");
        }
        if len < 2 * faces.len() {
            return fail(AztecStatus::BufferTooSmall, format!("need {} values, got {len}", 2 * faces.len()));
        }
        let out = std::slice::from_raw_parts_mut(xy, len);
        for (i, p) in faces.iter().enumerate() {
            out[2 * i] = p.x;
            out[2 * i + 1] = p.y;
        }
        AztecStatus::Ok
    })
}

/// Sample `index` of the batch keyed by `seed`: `partners[w]` receives the
/// black vertex matched to white `w`, and `heights` (if non-null) the
/// height of every face. Results depend only on `(seed, index)`.
///
/// # Safety
/// `s` must be a live handle; `partners` must hold `num_white` values and
/// `heights`, if non-null, `num_faces` values.
#[no_mangle]
pub unsafe extern "C" fn aztec_sample(
    s: *const AztecSampler,
    seed: u64,
    index: u64,
    partners: *mut u32,
    partners_len: usize,
    heights: *mut i64,
    heights_len: usize,
) -> AztecStatus {
    guard(|| {
        let s = deref!(s);
        let graph = s.sampler.graph();
        if partners.is_null() {
            return fail(AztecStatus::NullPointer, "partners is null");
        }
        if partners_len < graph.num_white() {
            return fail(AztecStatus::BufferTooSmall, format!("partners needs {} entries", graph.num_white()));
        }
        if !heights.is_null() && heights_len < graph.faces().len() {
            return fail(AztecStatus::BufferTooSmall, format!("heights needs {} entries", graph.faces().len()));
        }
        let m = s.sampler.sample_indexed(seed, index);
        std::slice::from_raw_parts_mut(partners, partners_len)[..graph.num_white()].copy_from_slice(m.partners());
        if !heights.is_null() {
            match s.plan.heights(&m) {
                Ok(h) => std::slice::from_raw_parts_mut(heights, heights_len)[..h.values().len()].copy_from_slice(h.values()),
                Err(e) => return from_error(e),
            }
        }
        AztecStatus::Ok
    })
}

/// `Im B` of the genus-1 curve of the symmetric 2x2 family (`Re B = 0`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aztec_period_genus1(a: f64, out: *mut f64) -> AztecStatus {
    guard(|| {
        let out = out!(out);
        match period_genus1(a) {
            Ok(d) => {
                *out = d.period.map_or(f64::NAN, |b| b.im);
                AztecStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Genus-1 theta function `theta(z; b)`.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aztec_theta(z_re: f64, z_im: f64, b_re: f64, b_im: f64, out_re: *mut f64, out_im: *mut f64) -> AztecStatus {
    guard(|| {
        let re = out!(out_re);
        let im = out!(out_im);
        match ThetaParams::scalar(Complex64::new(b_re, b_im)) {
            Ok(p) => {
                let t = theta(&[Complex64::new(z_re, z_im)], &p);
                *re = t.re;
                *im = t.im;
                AztecStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
