//! Closed-form geometry of the L-shaped arc: its exterior conformal map,
//! the boundary parameterization, the fold map pairing the two preimages of
//! each arc point, and the level curves around the arc.
//!
//! The arc consists of two segments of length `27^(1/4)` leaving the origin
//! along the rays `arg z = ±3π/4`. Its exterior map is
//!
//! ```text
//! psi0(w) = (w - 1/w) * sqrt((w - 1) / (w + 1)),   |w| >= 1,
//! ```
//!
//! with the principal square root. `w = 1` lands on the corner from the
//! reflex side, `w = -1` from the other side, and `w = e^{±2πi/3}` are the
//! two free ends.

mod curve;
mod fold;
mod level;

pub use curve::{Curve, CurveKind, Segment};
pub(crate) use fold::fold_from_gap;
pub use fold::{fold_j, fold_j_asymptotic, fold_j_closed_form, fold_j_inverse, fold_j_signed, FoldMapTable};
pub use level::{dist_to_level, level_point, level_radius, LevelCurve};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Length of each of the two straight pieces of the arc.
pub fn segment_length() -> f64 {
    27f64.powf(0.25)
}

/// `e^{i 3π/4}`, direction of the upper segment.
pub fn upper_direction() -> Complex64 {
    Complex64::from_polar(1.0, 0.75 * PI)
}

/// Parameter of the upper free end on the unit circle.
pub const END_PARAM: f64 = 2.0 * PI / 3.0;

const DOMAIN_SLACK: f64 = 1e-12;

/// Exterior conformal map of the arc, extended continuously to `|w| = 1`.
pub fn psi0(w: Complex64) -> Result<Complex64> {
    if w.norm() < 1.0 - DOMAIN_SLACK {
        return Err(Error::Domain(format!(
            "psi0 requires |w| >= 1, got |w| = {}",
            w.norm()
        )));
    }
    Ok(psi0_unchecked(w))
}

#[inline]
pub(crate) fn psi0_unchecked(w: Complex64) -> Complex64 {
    let wp1 = w + 1.0;
    if wp1.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let u = (w - 1.0) / wp1;
    (w - w.inv()) * u.sqrt()
}

/// Analytic derivative `psi0'(w) = sqrt((w-1)/(w+1)) * (1 + 1/w + 1/w^2)`,
/// evaluated strictly outside the unit circle.
pub fn psi0_prime(w: Complex64) -> Result<Complex64> {
    if w.norm() <= 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain(format!(
            "psi0_prime requires |w| > 1, got |w| = {}",
            w.norm()
        )));
    }
    Ok(psi0_prime_unchecked(w))
}

#[inline]
pub(crate) fn psi0_prime_unchecked(w: Complex64) -> Complex64 {
    let u = (w - 1.0) / (w + 1.0);
    let iw = w.inv();
    u.sqrt() * (1.0 + iw + iw * iw)
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Modulus of the boundary point for `θ ∈ [0, π]`:
/// `2 sinθ sqrt(tan(θ/2)) = 4 sin^{3/2}(θ/2) cos^{1/2}(θ/2)`.
fn boundary_modulus(theta_abs: f64) -> f64 {
    let s = (0.5 * theta_abs).sin();
    // cos(θ/2) = sin((π-θ)/2); the subtraction is exact near π
    let c = (0.5 * (PI - theta_abs)).sin().max(0.0);
    4.0 * s * s.sqrt() * c.sqrt()
}

/// `psi0(e^{iθ})` in closed form: on the ray `arg = 3π/4` for `θ ∈ (0, π)`,
/// on its mirror image for negative `θ`, and `0` at `θ ∈ {0, ±π}`.
pub fn boundary_point(theta: f64) -> Complex64 {
    let t = wrap_angle(theta);
    let r = boundary_modulus(t.abs());
    let dir = upper_direction();
    if t >= 0.0 {
        dir * r
    } else {
        dir.conj() * r
    }
}

/// Maps any angle onto the injective parameter range `[-2π/3, 2π/3]`:
/// angles beyond the free ends are replaced by their fold partner.
pub fn canonical_parameter(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t.abs() <= END_PARAM {
        t
    } else {
        fold_j_signed(t)
    }
}

/// Euclidean distance from `z` to the arc.
pub fn distance_to_arc(z: Complex64) -> f64 {
    let len = segment_length();
    let dir = upper_direction();
    [dir, dir.conj()]
        .into_iter()
        .map(|d| {
            let s = (z * d.conj()).re.clamp(0.0, len);
            (z - d * s).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Tolerance used to decide whether a point lies on the arc.
pub const ON_ARC_TOL: f64 = 1e-9;

pub fn is_on_arc(z: Complex64) -> bool {
    distance_to_arc(z) <= ON_ARC_TOL
}

pub(crate) fn ensure_on_arc(z: Complex64) -> Result<()> {
    let d = distance_to_arc(z);
    if d > ON_ARC_TOL {
        return Err(Error::NotOnArc {
            re: z.re,
            im: z.im,
            distance: d,
        });
    }
    Ok(())
}

/// Inverse of [`boundary_point`] restricted to `[-2π/3, 2π/3]`.
pub fn arc_parameter_of(z: Complex64) -> Result<f64> {
    ensure_on_arc(z)?;
    let r = z.norm().min(segment_length());
    if r == 0.0 {
        return Ok(0.0);
    }
    let t = crate::numeric::bisect_increasing(|t| boundary_modulus(t) < r, 0.0, END_PARAM);
    Ok(if z.im >= 0.0 { t } else { -t })
}

/// Joukowski map of `|w| >= 1` onto the exterior of `[-1, 1]`.
pub fn interval_map(w: Complex64) -> Complex64 {
    0.5 * (w + w.inv())
}
