//! C interface to `dispersive-lab`.
//!
//! Objects are opaque handles created by `dl_*_new`-style functions and
//! released with the matching `dl_*_free`. Every fallible call returns a
//! [`DlStatus`]; on failure [`dl_last_error_message`] describes the cause for
//! the calling thread. Array outputs are written into caller buffers whose
//! length is passed alongside; query the length first with `dl_*_len`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dispersive_lab::maximal::{maximal_profile, MaximalProfile};
use dispersive_lab::propagator::evolve;
use dispersive_lab::sequences::{generate_sequence, lorentz_quasinorm, Generator, TimeSequence};
use dispersive_lab::spectral::{build_grid, SpectralFunction};
use dispersive_lab::LabError;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    NonConvergence = 4,
    Precondition = 5,
    BufferTooSmall = 6,
    Panic = 7,
    Other = 8,
}

/// Band-limited function on a periodic grid.
pub struct DlFunction(SpectralFunction);

/// Nonincreasing time sequence in `(0, 1]`.
pub struct DlSequence(TimeSequence);

/// Maximal function sampled on a grid.
pub struct DlProfile(MaximalProfile);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut buf = e.borrow_mut();
        buf.clear();
        buf.extend_from_slice(msg.as_bytes());
    });
}

fn status_of(err: &LabError) -> DlStatus {
    match err {
        LabError::InvalidGrid(_)
        | LabError::InvalidInput(_)
        | LabError::InvalidSequence(_)
        | LabError::Parse { .. } => DlStatus::InvalidInput,
        LabError::Domain { .. } | LabError::OutOfRange(_) => DlStatus::Domain,
        LabError::NonConvergence { .. } | LabError::BudgetExceeded(_) => DlStatus::NonConvergence,
        LabError::Precondition(_) => DlStatus::Precondition,
        LabError::Config(_) | LabError::Io(_) => DlStatus::Other,
    }
}

fn fail(status: DlStatus, msg: &str) -> DlStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), DlStatus>>(body: F) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(DlStatus::Panic, "internal panic"),
    }
}

fn lab<T>(r: dispersive_lab::Result<T>) -> Result<T, DlStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, DlStatus> {
    p.as_ref().ok_or_else(|| fail(DlStatus::NullPointer, "null handle"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], DlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(DlStatus::NullPointer, "null input array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, need: usize) -> Result<&'a mut [T], DlStatus> {
    if len < need {
        return Err(fail(
            DlStatus::BufferTooSmall,
            &format!("buffer holds {len} values, {need} needed"),
        ));
    }
    if p.is_null() {
        return Err(fail(DlStatus::NullPointer, "null output array"));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), DlStatus> {
    if out.is_null() {
        return Err(fail(DlStatus::NullPointer, "null output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put(out: *mut f64, v: f64) -> Result<(), DlStatus> {
    if out.is_null() {
        return Err(fail(DlStatus::NullPointer, "null output pointer"));
    }
    *out = v;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// without the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Function with the given Fourier coefficients (FFT order, `n_points`
/// of them) on the grid of `n_points` points over `[0, period)`.
///
/// # Safety
/// `re` and `im` must point to `n_points` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_function_new(
    n_points: usize,
    period: f64,
    re: *const f64,
    im: *const f64,
    out: *mut *mut DlFunction,
) -> DlStatus {
    guard(|| {
        let grid = lab(build_grid(n_points, period))?;
        let (re, im) = (slice(re, n_points)?, slice(im, n_points)?);
        let coeffs = re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        let f = lab(SpectralFunction::new(grid, coeffs))?;
        store(out, DlFunction(f))
    })
}

/// Seeded random function: Gaussian coefficients damped by
/// `(1+ξ²)^{-decay/2}` on `|ξ| <= max_freq`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_function_random(
    n_points: usize,
    period: f64,
    max_freq: f64,
    decay: f64,
    seed: u64,
    out: *mut *mut DlFunction,
) -> DlStatus {
    guard(|| {
        let grid = lab(build_grid(n_points, period))?;
        if !(max_freq.is_finite() && max_freq >= 0.0 && decay.is_finite()) {
            return Err(fail(DlStatus::InvalidInput, "max_freq and decay must be finite, max_freq >= 0"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        store(out, DlFunction(SpectralFunction::random(grid, max_freq, decay, &mut rng)))
    })
}

/// Number of grid points (and coefficients); 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_function_len(f: *const DlFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.grid().n_points())
}

/// Writes the coefficients into `re`/`im`, each holding `len` values.
///
/// # Safety
/// `f` must be a live handle; `re`, `im` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn dl_function_coeffs(
    f: *const DlFunction,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DlStatus {
    guard(|| {
        let f = deref(f)?;
        let c = f.0.coeffs();
        let (re, im) = (slice_mut(re, len, c.len())?, slice_mut(im, len, c.len())?);
        for (k, v) in c.iter().enumerate() {
            re[k] = v.re;
            im[k] = v.im;
        }
        Ok(())
    })
}

/// Samples `f(x_j)` into `re`/`im`.
///
/// # Safety
/// As for [`dl_function_coeffs`].
#[no_mangle]
pub unsafe extern "C" fn dl_function_samples(
    f: *const DlFunction,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DlStatus {
    guard(|| {
        let f = deref(f)?;
        let s = f.0.synthesize();
        let (re, im) = (slice_mut(re, len, s.len())?, slice_mut(im, len, s.len())?);
        for (j, v) in s.iter().enumerate() {
            re[j] = v.re;
            im[j] = v.im;
        }
        Ok(())
    })
}

/// `‖f‖_{H^s}`; `s = 0` gives the L² norm.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_function_sobolev_norm(f: *const DlFunction, s: f64, out: *mut f64) -> DlStatus {
    guard(|| {
        let f = deref(f)?;
        if !s.is_finite() {
            return Err(fail(DlStatus::Domain, "s must be finite"));
        }
        put(out, f.0.sobolev_norm(s))
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_function_free(f: *mut DlFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// New function `e^{it|D|^a} f`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_evolve(f: *const DlFunction, t: f64, a: f64, out: *mut *mut DlFunction) -> DlStatus {
    guard(|| {
        let f = deref(f)?;
        let g = lab(evolve(&f.0, t, a))?;
        store(out, DlFunction(g))
    })
}

/// `t_n = n^{-gamma}`, `n = 1..=n_terms`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_sequence_power(gamma: f64, n_terms: usize, out: *mut *mut DlSequence) -> DlStatus {
    guard(|| {
        let seq = lab(generate_sequence(Generator::Power { gamma }, n_terms))?;
        store(out, DlSequence(seq))
    })
}

/// Custom sequence from `len` nonincreasing values in `(0, 1]`.
///
/// # Safety
/// `values` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_sequence_from_values(
    values: *const f64,
    len: usize,
    out: *mut *mut DlSequence,
) -> DlStatus {
    guard(|| {
        let v = slice(values, len)?.to_vec();
        let seq = lab(TimeSequence::new(v))?;
        store(out, DlSequence(seq))
    })
}

/// Number of terms; 0 for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_sequence_len(seq: *const DlSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `seq` must be a live handle; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn dl_sequence_values(seq: *const DlSequence, buf: *mut f64, len: usize) -> DlStatus {
    guard(|| {
        let seq = deref(seq)?;
        let v = seq.0.values();
        slice_mut(buf, len, v.len())?.copy_from_slice(v);
        Ok(())
    })
}

/// `sup_k t_k^r · #{n : t_n >= t_k}`.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_lorentz_quasinorm(seq: *const DlSequence, r: f64, out: *mut f64) -> DlStatus {
    guard(|| {
        let seq = deref(seq)?;
        if !(r.is_finite() && r > 0.0) {
            return Err(fail(DlStatus::Domain, "r must be positive"));
        }
        put(out, lorentz_quasinorm(&seq.0, r))
    })
}

/// # Safety
/// `seq` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_sequence_free(seq: *mut DlSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// `sup_n |e^{i t_n |D|^a} f|` on the grid of `f`.
///
/// # Safety
/// `f`, `seq` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_maximal_profile(
    f: *const DlFunction,
    seq: *const DlSequence,
    a: f64,
    out: *mut *mut DlProfile,
) -> DlStatus {
    guard(|| {
        let (f, seq) = (deref(f)?, deref(seq)?);
        let p = lab(maximal_profile(&f.0, &seq.0, a))?;
        store(out, DlProfile(p))
    })
}

/// Number of grid points; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_profile_len(p: *const DlProfile) -> usize {
    p.as_ref().map_or(0, |p| p.0.values.len())
}

/// Profile values and, when `argmax` is not null, the 0-based index of the
/// attaining time.
///
/// # Safety
/// `p` must be a live handle; `values` (and `argmax` when given) must point
/// to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn dl_profile_values(
    p: *const DlProfile,
    values: *mut f64,
    argmax: *mut usize,
    len: usize,
) -> DlStatus {
    guard(|| {
        let p = deref(p)?;
        let n = p.0.values.len();
        slice_mut(values, len, n)?.copy_from_slice(&p.0.values);
        if !argmax.is_null() {
            slice_mut(argmax, len, n)?.copy_from_slice(&p.0.argmax);
        }
        Ok(())
    })
}

/// `‖profile‖_{L²}` over the period.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_profile_l2_norm(p: *const DlProfile, out: *mut f64) -> DlStatus {
    guard(|| put(out, deref(p)?.0.l2_norm()))
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_profile_free(p: *mut DlProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}
