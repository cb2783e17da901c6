use super::{FamilyKind, NodeFamily};
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Curve, CurveKind};
use crate::numeric::golden_max;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Optimizer settings for [`fekete_nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeketeOptions {
    pub restarts: usize,
    /// Maximum number of full coordinate sweeps per restart.
    pub iters: usize,
    pub seed: u64,
}

impl Default for FeketeOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            iters: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FeketeResult {
    pub family: NodeFamily,
    /// `Σ_{j<k} ln|x_j - x_k|` at the returned configuration.
    pub log_product: f64,
    /// False when the last sweep of the winning restart still improved the
    /// objective by more than `1e-10`.
    pub converged: bool,
    pub sweeps: usize,
}

/// Largest degree accepted by [`fekete_nodes`].
pub const FEKETE_MAX_N: usize = 16;

const LAST_SWEEP_TOL: f64 = 1e-10;

/// Logarithm of the pairwise distance product.
pub fn log_pair_product(points: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            s += (p - q).norm().ln();
        }
    }
    s
}

/// Approximate Fekete points on the unit circle or the arc by cyclic
/// coordinate ascent in the curve parameter, best of several random starts.
pub fn fekete_nodes(curve: CurveKind, n: usize, opts: &FeketeOptions) -> Result<FeketeResult> {
    if n > FEKETE_MAX_N {
        return Err(Error::Invalid(format!(
            "Fekete optimization supports n <= {FEKETE_MAX_N}, got {n}"
        )));
    }
    let kind = match curve {
        CurveKind::UnitCircle => FamilyKind::FeketeCircle,
        CurveKind::Gamma0 => FamilyKind::FeketeGamma0,
        CurveKind::Interval => {
            return Err(Error::Invalid(
                "Fekete points are only computed on the circle and the arc".into(),
            ))
        }
    };
    let c = Curve::new(curve);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(Vec<f64>, f64, bool, usize)> = None;
    for _ in 0..opts.restarts.max(1) {
        let (lo, hi) = c.parameter_range();
        let mut t: Vec<f64> = (0..=n).map(|_| rng.random_range(lo..hi)).collect();
        let (value, converged, sweeps) = ascend(&c, &mut t, opts.iters.max(1));
        if best.as_ref().is_none_or(|b| value > b.1) {
            best = Some((t, value, converged, sweeps));
        }
    }
    let (mut t, log_product, converged, sweeps) = best.expect("at least one restart");
    t.sort_by(f64::total_cmp);
    let points = t.iter().map(|&x| c.point_at(x)).collect();
    let family = NodeFamily::new(kind, curve, points, Some(t), None)?;
    Ok(FeketeResult {
        family,
        log_product,
        converged,
        sweeps,
    })
}

fn objective(c: &Curve, t: &[f64], i: usize, x: f64) -> f64 {
    let z = c.point_at(x);
    t.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &s)| (z - c.point_at(s)).norm().ln())
        .sum()
}

fn total(c: &Curve, t: &[f64]) -> f64 {
    let pts: Vec<Complex64> = t.iter().map(|&x| c.point_at(x)).collect();
    log_pair_product(&pts)
}

/// Runs coordinate sweeps in place; returns the final objective, the
/// convergence flag and the number of sweeps used.
fn ascend(c: &Curve, t: &mut [f64], max_sweeps: usize) -> (f64, bool, usize) {
    let (lo, hi) = c.parameter_range();
    let periodic = c.is_periodic();
    let mut value = total(c, t);
    let mut last_gain = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        for i in 0..t.len() {
            let mut others: Vec<f64> = t
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &s)| s)
                .collect();
            others.sort_by(f64::total_cmp);
            let mut gaps = Vec::with_capacity(others.len() + 1);
            if others.is_empty() {
                gaps.push((lo, hi));
            } else if periodic {
                for w in others.windows(2) {
                    gaps.push((w[0], w[1]));
                }
                gaps.push((others[others.len() - 1], others[0] + (hi - lo)));
            } else {
                gaps.push((lo, others[0]));
                for w in others.windows(2) {
                    gaps.push((w[0], w[1]));
                }
                gaps.push((others[others.len() - 1], hi));
            }
            let mut cand = (t[i], objective(c, t, i, t[i]));
            for (a, b) in gaps {
                if b - a <= 0.0 {
                    continue;
                }
                let r = golden_max(|x| objective(c, t, i, x), a, b, 1e-12);
                if r.value > cand.1 {
                    cand = (r.x, r.value);
                }
            }
            t[i] = if periodic { wrap_angle(cand.0) } else { cand.0 };
        }
        let next = total(c, t);
        last_gain = next - value;
        value = next;
        if last_gain.abs() < 1e-14 {
            break;
        }
    }
    (value, last_gain <= LAST_SWEEP_TOL, sweeps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::segment_length;
    use std::f64::consts::PI;

    fn grid_brute_force(n: usize, grid: usize) -> f64 {
        // first point fixed at angle 0 by rotation invariance
        fn rec(n: usize, grid: usize, start: usize, chosen: &mut Vec<Complex64>, best: &mut f64) {
            if chosen.len() == n + 1 {
                *best = best.max(log_pair_product(chosen));
                return;
            }
            for g in start..grid {
                chosen.push(Complex64::from_polar(1.0, 2.0 * PI * g as f64 / grid as f64));
                rec(n, grid, g + 1, chosen, best);
                chosen.pop();
            }
        }
        let mut best = f64::NEG_INFINITY;
        let mut chosen = vec![Complex64::new(1.0, 0.0)];
        rec(n, grid, 1, &mut chosen, &mut best);
        best
    }

    #[test]
    fn circle_triangle_and_square() {
        let opts = FeketeOptions::default();
        let tri = fekete_nodes(CurveKind::UnitCircle, 2, &opts).unwrap();
        let p = &tri.family.points;
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(((p[i] - p[j]).norm() - 3f64.sqrt()).abs() < 1e-6);
            }
        }
        assert!((tri.log_product - grid_brute_force(2, 720)).abs() < 1e-6);
        let sq = fekete_nodes(CurveKind::UnitCircle, 3, &opts).unwrap();
        assert!((sq.log_product - grid_brute_force(3, 360)).abs() < 1e-6);
        assert!(tri.converged && sq.converged);
    }

    #[test]
    fn circle_matches_roots_of_unity_optimum() {
        for n in 1..=4usize {
            let r = fekete_nodes(CurveKind::UnitCircle, n, &FeketeOptions::default()).unwrap();
            // product of pairwise distances of the (n+1)-st roots is (n+1)^{(n+1)/2}
            let opt = 0.5 * (n as f64 + 1.0) * (n as f64 + 1.0).ln();
            assert!((r.log_product - opt).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn arc_single_segment_uses_endpoints() {
        let r = fekete_nodes(CurveKind::Gamma0, 1, &FeketeOptions::default()).unwrap();
        let d = (r.family.points[0] - r.family.points[1]).norm();
        assert!((d - 2.0 * segment_length() * (PI / 4.0).sin()).abs() < 1e-9);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let o = FeketeOptions {
            restarts: 3,
            iters: 20,
            seed: 42,
        };
        let a = fekete_nodes(CurveKind::Gamma0, 5, &o).unwrap();
        let b = fekete_nodes(CurveKind::Gamma0, 5, &o).unwrap();
        assert_eq!(a.family.points, b.family.points);
    }

    #[test]
    fn rejects_large_n_and_interval() {
        assert!(fekete_nodes(CurveKind::UnitCircle, 17, &FeketeOptions::default()).is_err());
        assert!(fekete_nodes(CurveKind::Interval, 3, &FeketeOptions::default()).is_err());
    }
}
