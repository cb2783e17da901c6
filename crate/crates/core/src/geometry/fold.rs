//! The fold map `J : [2π/3, π] -> [0, 2π/3]`, defined by
//! `psi0(e^{it}) = psi0(e^{iJ(t)})`, equivalently
//! `sin(J) sin²(J/2) = sin(t) sin²(t/2)`.

use super::END_PARAM;
use crate::error::{Error, Result};
use crate::numeric::bisect_increasing;
use std::f64::consts::PI;

const RANGE_SLACK: f64 = 1e-12;

/// Solves the fold identity given the gap `π - t ∈ [0, π/3]`.
///
/// With `x = sin²(t/2)` and `y = sin²(J/2)` the identity reads
/// `x³(1-x) = y³(1-y)`. Dividing out the trivial root `y = x` leaves
/// `y³ = (1-x)(y² + xy + x²)`, which has exactly one positive root and no
/// double root at the free end, so bisection on it stays well conditioned
/// on the whole range.
pub(crate) fn fold_from_gap(gap: f64) -> f64 {
    let gap = gap.clamp(0.0, PI / 3.0);
    let e = (0.5 * gap).sin().powi(2); // cos²(t/2)
    if e == 0.0 {
        return 0.0;
    }
    let x = (0.5 * gap).cos().powi(2); // sin²(t/2)
    let y = bisect_increasing(|y| y * y * y - e * (y * y + x * y + x * x) < 0.0, 0.0, 1.0);
    2.0 * y.sqrt().min(1.0).asin()
}

fn check_range(t: f64) -> Result<()> {
    let a = t.abs();
    if !(END_PARAM - RANGE_SLACK..=PI + RANGE_SLACK).contains(&a) {
        return Err(Error::Domain(format!(
            "fold map requires 2π/3 <= |t| <= π, got t = {t}"
        )));
    }
    Ok(())
}

/// `J(t)` for `2π/3 <= |t| <= π`, odd in `t`.
pub fn fold_j(t: f64) -> Result<f64> {
    check_range(t)?;
    Ok(fold_j_signed(t))
}

/// Unchecked odd extension of the fold map; `|t|` is clamped to the range.
pub fn fold_j_signed(t: f64) -> f64 {
    let a = t.abs().clamp(END_PARAM, PI);
    let j = if a == END_PARAM {
        END_PARAM
    } else {
        fold_from_gap(PI - a)
    };
    if t < 0.0 {
        -j
    } else {
        j
    }
}

/// Cardano-type closed formula for `J(t)`, `t ∈ [2π/3, π]`. Singular at
/// `t = π`; used as an independent cross-check away from it.
pub fn fold_j_closed_form(t: f64) -> Result<f64> {
    check_range(t)?;
    let a = t.abs().clamp(END_PARAM, PI);
    let s2 = (0.5 * a).sin().powi(2);
    let one_minus = (0.5 * (PI - a)).sin().powi(2);
    let s4 = s2 * s2;
    let inner = 2.0 + 5.0 * s2 + 20.0 * s4 + s2 * (27.0 * (3.0 + 8.0 * s2 + 16.0 * s4)).sqrt();
    let r = (one_minus * inner / 2.0).cbrt();
    if r == 0.0 {
        return Ok(0.0f64.copysign(t));
    }
    let arg = ((one_minus * (1.0 + (1.0 + 2.0 * s2) / r) + r) / 3.0).sqrt();
    let j = 2.0 * arg.min(1.0).asin();
    Ok(if t < 0.0 { -j } else { j })
}

/// Inverse of the fold map: the `t ∈ [2π/3, π]` with `J(t) = s`.
pub fn fold_j_inverse(s: f64) -> Result<f64> {
    if !(-RANGE_SLACK..=END_PARAM + RANGE_SLACK).contains(&s) {
        return Err(Error::Domain(format!(
            "fold inverse requires 0 <= s <= 2π/3, got {s}"
        )));
    }
    let s = s.clamp(0.0, END_PARAM);
    if s == 0.0 {
        return Ok(PI);
    }
    if s == END_PARAM {
        return Ok(END_PARAM);
    }
    // J is decreasing in t, hence increasing in the gap π - t
    let gap = bisect_increasing(|g| fold_from_gap(g) < s, 0.0, PI / 3.0);
    Ok(PI - gap)
}

/// Two-term expansion `4^{1/3}(π-t)^{1/3} + (π-t)/3` near `t = π`.
pub fn fold_j_asymptotic(t: f64) -> f64 {
    let eps = (PI - t).max(0.0);
    4f64.cbrt() * eps.cbrt() + eps / 3.0
}

/// Tabulated `(t, J(t))` pairs on a uniform grid of `[2π/3, π]`, used to
/// seed inverse lookups with a tight bracket. Read-only once built.
#[derive(Debug, Clone)]
pub struct FoldMapTable {
    pairs: Vec<(f64, f64)>,
}

impl FoldMapTable {
    pub fn new(grid: usize) -> Self {
        let grid = grid.max(2);
        let pairs = (0..=grid)
            .map(|i| {
                let t = END_PARAM + (PI - END_PARAM) * i as f64 / grid as f64;
                (t, fold_j_signed(t))
            })
            .collect();
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Inverse fold using the table for the initial bracket.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(-RANGE_SLACK..=END_PARAM + RANGE_SLACK).contains(&s) {
            return Err(Error::Domain(format!(
                "fold inverse requires 0 <= s <= 2π/3, got {s}"
            )));
        }
        let s = s.clamp(0.0, END_PARAM);
        // J decreasing: find first index with J <= s
        let idx = self.pairs.partition_point(|&(_, j)| j > s);
        if idx == 0 {
            return Ok(self.pairs[0].0);
        }
        if idx >= self.pairs.len() {
            return Ok(PI);
        }
        let (t_lo, t_hi) = (self.pairs[idx - 1].0, self.pairs[idx].0);
        let gap = bisect_increasing(|g| fold_from_gap(g) < s, PI - t_hi, PI - t_lo);
        Ok(PI - gap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_residual(t: f64, j: f64) -> f64 {
        (j.sin() * (0.5 * j).sin().powi(2) - t.sin() * (0.5 * t).sin().powi(2)).abs()
    }

    /// Plain bisection on the undeflated identity, kept independent of the
    /// production solver.
    fn bisection_oracle(t: f64) -> f64 {
        let target = t.sin() * (0.5 * t).sin().powi(2);
        let g = |s: f64| s.sin() * (0.5 * s).sin().powi(2) - target;
        let (mut lo, mut hi) = (0.0, 2.0 * PI / 3.0);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn fixed_points() {
        assert_eq!(fold_j(2.0 * PI / 3.0).unwrap(), 2.0 * PI / 3.0);
        assert_eq!(fold_j(PI).unwrap(), 0.0);
        assert_eq!(fold_j(-PI).unwrap(), 0.0);
        assert!(fold_j(2.0).is_err());
        assert!(fold_j(3.2).is_err());
    }

    #[test]
    fn five_sixths_pi_matches_bisection_oracle() {
        let t = 5.0 * PI / 6.0;
        let j = fold_j(t).unwrap();
        let oracle = bisection_oracle(t);
        assert!((j - oracle).abs() < 1e-12, "{j} vs {oracle}");
        assert!(j > 0.0 && j < 2.0 * PI / 3.0);
        assert!(identity_residual(t, j) < 1e-15);
    }

    #[test]
    fn closed_form_agrees_with_root_finder() {
        for i in 0..=400 {
            let t = 2.0 * PI / 3.0 + (PI / 3.0 - 1e-3) * i as f64 / 400.0;
            let a = fold_j(t).unwrap();
            let b = fold_j_closed_form(t).unwrap();
            assert!((a - b).abs() < 1e-10, "t = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn odd_extension() {
        for t in [2.2, 2.5, 3.0, 3.1] {
            assert_eq!(fold_j(-t).unwrap(), -fold_j(t).unwrap());
        }
    }

    #[test]
    fn inverse_reference_values() {
        assert_eq!(fold_j_inverse(2.0 * PI / 3.0).unwrap(), 2.0 * PI / 3.0);
        assert_eq!(fold_j_inverse(0.0).unwrap(), PI);
        let t = 0.9 * PI;
        let back = fold_j_inverse(fold_j(t).unwrap()).unwrap();
        assert!((back - t).abs() < 1e-10);
        for s in [0.05, 0.3, 1.0, 1.9, 2.09] {
            let t = fold_j_inverse(s).unwrap();
            assert!((fold_j(t).unwrap() - s).abs() < 1e-11);
        }
        assert!(fold_j_inverse(2.5).is_err());
    }

    #[test]
    fn table_inverse_matches_plain_inverse() {
        let table = FoldMapTable::new(64);
        for s in [0.0, 1e-4, 0.2, 1.0, 2.0, 2.0 * PI / 3.0] {
            let a = table.inverse(s).unwrap();
            let b = fold_j_inverse(s).unwrap();
            assert!((a - b).abs() < 1e-12, "{s}: {a} vs {b}");
        }
        for &(t, j) in table.pairs() {
            assert!(identity_residual(t, j) < 1e-12);
        }
    }

    #[test]
    fn asymptotic_expansion_error_is_five_thirds_order() {
        assert_eq!(fold_j_asymptotic(PI), 0.0);
        let mut ratios = Vec::new();
        for k in 2..=8 {
            let eps = 10f64.powi(-k);
            let t = PI - eps;
            let j = fold_j(t).unwrap();
            let a = fold_j_asymptotic(t);
            let gap = PI - t;
            let c = (j - a).abs() / gap.powf(5.0 / 3.0);
            assert!(c <= 10.0, "k = {k}: C = {c}");
            ratios.push(j / (4f64.cbrt() * gap.cbrt()));
        }
        for w in ratios.windows(2) {
            assert!((w[1] - 1.0).abs() < (w[0] - 1.0).abs());
        }
        assert!((ratios.last().unwrap() - 1.0).abs() < 1e-3);
    }
}
