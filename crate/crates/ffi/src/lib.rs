//! C interface to the `arc-lebesgue` library.
//!
//! Node families live behind the opaque `AlFamily` handle. Every fallible
//! call returns an [`AlStatus`]; the message of the most recent failure on
//! the calling thread is available through [`al_last_error_message`].

use arc_lebesgue::electrostatics::{total_energy, ChargeConfig, EnergyOptions};
use arc_lebesgue::geometry::psi0;
use arc_lebesgue::lebesgue::lebesgue_constant;
use arc_lebesgue::mz::{worst_mz_ratio_with, WitnessSet};
use arc_lebesgue::nodes::{build_family, FeketeOptions};
use arc_lebesgue::{BarycentricBasis, Curve, CurveKind, Error, FamilyKind, LebesgueOptions, NodeFamily};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NotOnCurve = 4,
    NoConvergence = 5,
    DuplicateNodes = 6,
    Ambiguous = 7,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlFamilyKind {
    Chebyshev = 0,
    Equispaced = 1,
    FejerGamma0 = 2,
    AdjustedFejerGamma0 = 3,
    FeketeCircle = 4,
    FeketeGamma0 = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlCurve {
    Gamma0 = 0,
    UnitCircle = 1,
    Interval = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlWitness {
    Lagrange = 0,
    Random = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AlLebesgueResult {
    pub value: f64,
    pub argmax_param: f64,
    pub samples_used: usize,
    pub refinement_gap: f64,
}

/// Opaque node family with its barycentric basis.
pub struct AlFamily {
    family: NodeFamily,
    basis: BarycentricBasis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AlStatus {
    match e {
        Error::Domain(_) => AlStatus::Domain,
        Error::NotOnArc { .. } => AlStatus::NotOnCurve,
        Error::NoConvergence { .. } => AlStatus::NoConvergence,
        Error::DuplicateNodes(..) | Error::AtCharge(_) => AlStatus::DuplicateNodes,
        Error::AmbiguousAdjustment { .. } => AlStatus::Ambiguous,
        _ => AlStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (AlStatus, String)>>(f: F) -> AlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AlStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            AlStatus::Internal
        }
    }
}

fn lib<T>(r: arc_lebesgue::Result<T>) -> Result<T, (AlStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (AlStatus, String) {
    (AlStatus::NullPointer, format!("{what} is null"))
}

fn kind_of(k: AlFamilyKind) -> FamilyKind {
    match k {
        AlFamilyKind::Chebyshev => FamilyKind::Chebyshev,
        AlFamilyKind::Equispaced => FamilyKind::Equispaced,
        AlFamilyKind::FejerGamma0 => FamilyKind::FejerGamma0,
        AlFamilyKind::AdjustedFejerGamma0 => FamilyKind::AdjustedFejerGamma0,
        AlFamilyKind::FeketeCircle => FamilyKind::FeketeCircle,
        AlFamilyKind::FeketeGamma0 => FamilyKind::FeketeGamma0,
    }
}

fn curve_of(c: AlCurve) -> CurveKind {
    match c {
        AlCurve::Gamma0 => CurveKind::Gamma0,
        AlCurve::UnitCircle => CurveKind::UnitCircle,
        AlCurve::Interval => CurveKind::Interval,
    }
}

fn boxed(family: NodeFamily) -> *mut AlFamily {
    let basis = BarycentricBasis::from_family(&family);
    Box::into_raw(Box::new(AlFamily { family, basis }))
}

/// Builds a generated family of degree `n` and stores a new handle in
/// `*out`. Release it with [`al_family_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn al_family_new(kind: AlFamilyKind, n: usize, out: *mut *mut AlFamily) -> AlStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = std::ptr::null_mut();
        let family = lib(build_family(kind_of(kind), n, &FeketeOptions::default()))?;
        *out = boxed(family);
        Ok(())
    })
}

/// Builds a custom family from `len` points on `curve`.
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn al_family_from_points(
    curve: AlCurve,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut AlFamily,
) -> AlStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = std::ptr::null_mut();
        if re.is_null() || im.is_null() {
            return Err(null("coordinate array"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let kind = curve_of(curve);
        let c = Curve::new(kind);
        let points: Vec<Complex64> = re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect();
        if let Some(k) = points.iter().position(|&z| !c.contains(z)) {
            return Err((AlStatus::NotOnCurve, format!("point {k} is not on the curve")));
        }
        let family = lib(NodeFamily::new(FamilyKind::Custom, kind, points, None, None))?;
        *out = boxed(family);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `family` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn al_family_free(family: *mut AlFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of nodes, `n + 1`; zero for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn al_family_len(family: *const AlFamily) -> usize {
    family.as_ref().map_or(0, |f| f.family.len())
}

/// Copies the node coordinates into `re` and `im`, each of capacity `len`.
///
/// # Safety
/// `family` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn al_family_points(
    family: *const AlFamily,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> AlStatus {
    guard(|| {
        let f = family.as_ref().ok_or_else(|| null("family"))?;
        if re.is_null() || im.is_null() {
            return Err(null("output array"));
        }
        let pts = &f.family.points;
        if len < pts.len() {
            return Err((
                AlStatus::InvalidArgument,
                format!("buffer holds {len} values, need {}", pts.len()),
            ));
        }
        let re = std::slice::from_raw_parts_mut(re, pts.len());
        let im = std::slice::from_raw_parts_mut(im, pts.len());
        for (k, z) in pts.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Lebesgue function `Σ |ℓ_k(z)|` at `z = re + i im`.
///
/// # Safety
/// `family` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn al_lebesgue_function(
    family: *const AlFamily,
    re: f64,
    im: f64,
    out: *mut f64,
) -> AlStatus {
    guard(|| {
        let f = family.as_ref().ok_or_else(|| null("family"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = f.basis.lebesgue(Complex64::new(re, im));
        Ok(())
    })
}

/// Lebesgue constant on the family's curve. Zero arguments select the
/// defaults (40 samples per gap, tolerance `1e-9`).
///
/// # Safety
/// `family` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn al_lebesgue_constant(
    family: *const AlFamily,
    samples_per_gap: usize,
    refine_tol: f64,
    out: *mut AlLebesgueResult,
) -> AlStatus {
    guard(|| {
        let f = family.as_ref().ok_or_else(|| null("family"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let mut opts = LebesgueOptions::default();
        if samples_per_gap > 0 {
            opts.samples_per_gap = samples_per_gap;
        }
        if refine_tol > 0.0 {
            opts.refine_tol = refine_tol;
        }
        let r = lib(lebesgue_constant(&f.family, &opts))?;
        *out = AlLebesgueResult {
            value: r.l,
            argmax_param: r.argmax_param,
            samples_used: r.samples_used,
            refinement_gap: r.refinement_gap,
        };
        Ok(())
    })
}

/// Largest modified MZ ratio over the chosen witness set.
///
/// # Safety
/// `family` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn al_worst_mz_ratio(
    family: *const AlFamily,
    p: f64,
    witness: AlWitness,
    seed: u64,
    out: *mut f64,
) -> AlStatus {
    guard(|| {
        let f = family.as_ref().ok_or_else(|| null("family"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let set = match witness {
            AlWitness::Lagrange => WitnessSet::Lagrange,
            AlWitness::Random => WitnessSet::Random,
            AlWitness::Both => WitnessSet::Both,
        };
        *out = lib(worst_mz_ratio_with(&f.family, f.family.n, p, set, seed))?.ratio;
        Ok(())
    })
}

/// Field energy over the unit disk of unit charges at `e^{i angles[k]}`.
///
/// # Safety
/// `angles` must point to `len` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn al_total_energy(angles: *const f64, len: usize, out: *mut f64) -> AlStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if angles.is_null() {
            return Err(null("angles"));
        }
        let a = std::slice::from_raw_parts(angles, len);
        let config = lib(ChargeConfig::from_angles(a, "ffi"))?;
        *out = lib(total_energy(&config, &EnergyOptions::default()))?.energy;
        Ok(())
    })
}

/// The exterior map `psi0` at `w = re + i im`, `|w| >= 1`.
///
/// # Safety
/// `out_re` and `out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn al_psi0(re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> AlStatus {
    guard(|| {
        let out_re = out_re.as_mut().ok_or_else(|| null("out_re"))?;
        let out_im = out_im.as_mut().ok_or_else(|| null("out_im"))?;
        let z = lib(psi0(Complex64::new(re, im)))?;
        *out_re = z.re;
        *out_im = z.im;
        Ok(())
    })
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// without the terminator, or 0 when the last call succeeded.
///
/// # Safety
/// `buf` must be null or hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn al_last_error_message(buf: *mut c_char, len: usize) -> usize {
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
            let k = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
            *buf.add(k) = 0;
        }
        bytes.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn al_status_string(status: AlStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        AlStatus::Ok => b"ok\0",
        AlStatus::NullPointer => b"null pointer\0",
        AlStatus::InvalidArgument => b"invalid argument\0",
        AlStatus::Domain => b"domain error\0",
        AlStatus::NotOnCurve => b"point not on curve\0",
        AlStatus::NoConvergence => b"no convergence\0",
        AlStatus::DuplicateNodes => b"duplicate nodes\0",
        AlStatus::Ambiguous => b"ambiguous adjustment\0",
        AlStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Library version as a NUL-terminated string.
#[no_mangle]
pub extern "C" fn al_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
