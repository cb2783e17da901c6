//! Level curves `Γ_m = psi0(|w| = 1 + 1/(m+1))` and distances to them.

use super::{ensure_on_arc, psi0_unchecked};
use crate::error::Result;
use crate::numeric::golden_min;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Radius `ρ_m = 1 + 1/(m+1)` of the preimage circle of `Γ_m`.
pub fn level_radius(m: usize) -> f64 {
    1.0 + 1.0 / (m as f64 + 1.0)
}

/// `psi0(ρ_m e^{iφ})`.
pub fn level_point(m: usize, phi: f64) -> Complex64 {
    psi0_unchecked(Complex64::from_polar(level_radius(m), phi))
}

/// Sampled level curve, ordered by `φ ∈ (-π, π]`.
#[derive(Debug, Clone)]
pub struct LevelCurve {
    pub m: usize,
    pub rho: f64,
    pub samples: Vec<(f64, Complex64)>,
}

/// Golden-section refinement width in `φ`.
const REFINE_TOL: f64 = 1e-10;

impl LevelCurve {
    /// `sample_count` equally spaced samples, the last one at `φ = π`.
    pub fn new(m: usize, sample_count: usize) -> Self {
        let count = sample_count.max(8);
        let rho = level_radius(m);
        let samples = (0..count)
            .map(|i| {
                let phi = -PI + 2.0 * PI * (i as f64 + 1.0) / count as f64;
                (phi, psi0_unchecked(Complex64::from_polar(rho, phi)))
            })
            .collect();
        Self { m, rho, samples }
    }

    /// Default resolution `32 (m + 1)`.
    pub fn with_default_resolution(m: usize) -> Self {
        Self::new(m, 32 * (m + 1))
    }

    fn spacing(&self) -> f64 {
        2.0 * PI / self.samples.len() as f64
    }

    /// Minimum distance from `z` to the curve: sampled minimum followed by
    /// golden-section refinement around the best few local minima.
    pub fn distance(&self, z: Complex64) -> f64 {
        let n = self.samples.len();
        let d: Vec<f64> = self.samples.iter().map(|(_, p)| (p - z).norm()).collect();
        let mut minima: Vec<usize> = (0..n)
            .filter(|&i| d[i] <= d[(i + n - 1) % n] && d[i] <= d[(i + 1) % n])
            .collect();
        minima.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        minima.truncate(3);
        let h = self.spacing();
        let rho = self.rho;
        let mut best = d.iter().copied().fold(f64::INFINITY, f64::min);
        for i in minima {
            let phi = self.samples[i].0;
            let r = golden_min(
                |p| (psi0_unchecked(Complex64::from_polar(rho, p)) - z).norm(),
                phi - h,
                phi + h,
                REFINE_TOL,
            );
            best = best.min(r.value);
        }
        best
    }
}

/// Distance from a point of the arc to `Γ_m`.
pub fn dist_to_level(z: Complex64, m: usize) -> Result<f64> {
    ensure_on_arc(z)?;
    Ok(LevelCurve::with_default_resolution(m).distance(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{boundary_point, psi0, psi0_prime};

    #[test]
    fn level_point_symmetries() {
        for m in [1usize, 4, 17] {
            let v = level_point(m, 0.0);
            assert_eq!(v.im, 0.0);
            assert!(v.re > 0.0);
            for phi in [0.3, 1.7, 3.0] {
                let a = level_point(m, phi);
                let b = level_point(m, -phi).conj();
                assert!((a - b).norm() < 1e-15);
            }
        }
        let direct = psi0(Complex64::new(0.0, 1.5)).unwrap();
        assert!((level_point(1, PI / 2.0) - direct).norm() < 1e-15);
    }

    #[test]
    fn samples_are_exact_and_ordered() {
        let lc = LevelCurve::new(5, 200);
        for w in lc.samples.windows(2) {
            assert!(w[1].0 > w[0].0);
            assert!(w[1].0 - w[0].0 <= 2.0 * PI / 200.0 + 1e-12);
        }
        for &(phi, p) in &lc.samples {
            let q = psi0(Complex64::from_polar(lc.rho, phi)).unwrap();
            assert!((p - q).norm() <= 1e-12 * q.norm().max(1e-300));
        }
        assert!((lc.samples.last().unwrap().0 - PI).abs() < 1e-15);
    }

    #[test]
    fn level_curves_are_continuous() {
        for m in [1usize, 8, 64] {
            let rho = level_radius(m);
            let mut prev = psi0(Complex64::from_polar(rho, -PI)).unwrap();
            let steps = (2.0 * PI / 1e-4) as usize;
            for i in 1..=steps {
                let phi = -PI + 1e-4 * i as f64;
                let cur = psi0(Complex64::from_polar(rho, phi)).unwrap();
                assert!((cur.norm() - prev.norm()).abs() < 1e-2, "m = {m}, φ = {phi}");
                prev = cur;
            }
        }
    }

    #[test]
    fn corner_distance_positive() {
        for m in 1..=64 {
            assert!(dist_to_level(Complex64::new(0.0, 0.0), m).unwrap() > 0.0);
        }
    }

    #[test]
    fn rejects_points_off_the_arc() {
        assert!(dist_to_level(Complex64::new(0.5, 0.5), 3).is_err());
    }

    #[test]
    fn distance_shrinks_with_m() {
        for i in 0..100 {
            let theta = -2.0 * PI / 3.0 + 4.0 * PI / 3.0 * (i as f64 + 0.5) / 100.0;
            let z = boundary_point(theta);
            for m in [4usize, 8, 16] {
                let a = dist_to_level(z, m).unwrap();
                let b = dist_to_level(z, 2 * m).unwrap();
                assert!(b < a, "θ = {theta}, m = {m}: {b} !< {a}");
            }
        }
    }

    #[test]
    fn distance_tracks_derivative_surrogate() {
        for n in [16usize, 64, 256, 512] {
            let rho = level_radius(n);
            let lc = LevelCurve::with_default_resolution(n);
            for i in 0..24 {
                // stay away from the corner θ = 0 and the ends ±2π/3
                let theta = 0.15 + (2.0 * PI / 3.0 - 0.3) * i as f64 / 23.0;
                let z = boundary_point(theta);
                let d = lc.distance(z);
                let surrogate = (rho - 1.0) * psi0_prime(Complex64::from_polar(rho, theta)).unwrap().norm();
                let ratio = d / surrogate;
                assert!((0.1..=10.0).contains(&ratio), "n = {n}, θ = {theta}: {ratio}");
            }
        }
    }

    #[test]
    fn refined_distance_beats_dense_sampling() {
        let lc = LevelCurve::with_default_resolution(10);
        let dense = LevelCurve::new(10, 200_000);
        for theta in [0.0, 0.01, 0.5, 1.2, 2.0, -0.7] {
            let z = boundary_point(theta);
            let d = lc.distance(z);
            let brute = dense
                .samples
                .iter()
                .map(|(_, p)| (p - z).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(d <= brute + 1e-12, "θ = {theta}: {d} vs {brute}");
            assert!(brute - d < 1e-6 * brute.max(1e-3));
        }
    }
}
