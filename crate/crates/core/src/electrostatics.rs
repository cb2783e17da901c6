//! Unit point charges on the unit circle: field, total field energy over
//! the disk and neutrality profiles.

use crate::error::{Error, Result};
use crate::nodes::closest_pair;
use crate::numeric::{CompensatedSum, GaussLegendre};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `π/18`, the lower bound for the disk energy of any circle configuration.
pub const NEWMAN_BOUND: f64 = PI / 18.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeConfig {
    pub points: Vec<Complex64>,
    pub label: String,
}

impl ChargeConfig {
    pub fn new(points: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("a charge configuration needs a charge".into()));
        }
        if let (d, Some((i, j))) = closest_pair(&points) {
            if d == 0.0 {
                return Err(Error::DuplicateNodes(i.min(j), i.max(j)));
            }
        }
        Ok(Self {
            points,
            label: label.into(),
        })
    }

    /// `n + 1` charges at the `(n+1)`-st roots of unity.
    pub fn roots_of_unity(n: usize) -> Self {
        let m = n as f64 + 1.0;
        let points = (0..=n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m))
            .collect();
        Self {
            points,
            label: format!("roots-of-unity-{n}"),
        }
    }

    /// Charges at the given polar angles.
    pub fn from_angles(angles: &[f64], label: impl Into<String>) -> Result<Self> {
        Self::new(
            angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect(),
            label,
        )
    }

    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn rotated(&self, alpha: f64) -> Self {
        let r = Complex64::from_polar(1.0, alpha);
        Self {
            points: self.points.iter().map(|&p| p * r).collect(),
            label: self.label.clone(),
        }
    }

    fn field_unchecked(&self, z: Complex64) -> Complex64 {
        self.points.iter().map(|&p| (z - p).inv()).sum()
    }
}

/// `F(z) = Σ 1/(z - z_k)`.
pub fn field(config: &ChargeConfig, z: Complex64) -> Result<Complex64> {
    if let Some(k) = config.points.iter().position(|&p| p == z) {
        return Err(Error::AtCharge(k));
    }
    Ok(config.field_unchecked(z))
}

/// Quadrature settings for [`total_energy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyOptions {
    /// Relative difference between successive refinement levels at which
    /// the estimate is accepted.
    pub tol: f64,
    /// Uniform angular panels per charge before grading.
    pub angular_panels: usize,
    /// Gauss-Legendre points per panel in each direction.
    pub order: usize,
    pub start_level: usize,
    pub max_level: usize,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            angular_panels: 4,
            order: 8,
            start_level: 4,
            max_level: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub label: String,
    pub n: usize,
    pub energy: f64,
    pub radial_panels: usize,
    pub angular_panels: usize,
    pub estimated_error: f64,
}

fn sorted_breaks(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    v
}

/// Radial and angular panel breakpoints at grading depth `level`. Both
/// directions are refined geometrically toward each charge, at the angular
/// cluster width `π/(8(n+1))`.
fn panel_breaks(config: &ChargeConfig, opts: &EnergyOptions, level: usize) -> (Vec<f64>, Vec<f64>) {
    let count = config.points.len();
    let width = PI / (8.0 * count as f64);
    let mut radial = vec![0.0, 1.0];
    let mut r = 0.5;
    while 1.0 - r > width {
        radial.push(r);
        r = 0.5 * (1.0 + r);
    }
    for i in 0..=level {
        radial.push(1.0 - width * 0.5f64.powi(i as i32));
    }
    let base = opts.angular_panels.max(1) * count;
    let mut angular: Vec<f64> = (0..=base).map(|i| 2.0 * PI * i as f64 / base as f64).collect();
    for p in &config.points {
        let a = p.arg().rem_euclid(2.0 * PI);
        angular.push(a);
        for i in 0..=level {
            let d = width * 0.5f64.powi(i as i32);
            angular.push((a + d).rem_euclid(2.0 * PI));
            angular.push((a - d).rem_euclid(2.0 * PI));
        }
    }
    (sorted_breaks(radial), sorted_breaks(angular))
}

fn energy_at_level(config: &ChargeConfig, opts: &EnergyOptions, level: usize) -> (f64, usize, usize) {
    let (radial, angular) = panel_breaks(config, opts, level);
    let gl = GaussLegendre::new(opts.order);
    let rnodes: Vec<(f64, f64)> = radial
        .windows(2)
        .flat_map(|w| gl.mapped(w[0], w[1]).collect::<Vec<_>>())
        .collect();
    let parts: Vec<f64> = angular
        .par_windows(2)
        .map(|w| {
            let mut acc = CompensatedSum::new();
            for (phi, wphi) in gl.mapped(w[0], w[1]) {
                let dir = Complex64::from_polar(1.0, phi);
                for &(r, wr) in &rnodes {
                    acc.add(wphi * wr * r * config.field_unchecked(dir * r).norm());
                }
            }
            acc.value()
        })
        .collect();
    let e = parts.into_iter().collect::<CompensatedSum>().value();
    (e, radial.len() - 1, angular.len() - 1)
}

/// `∫∫_{|z|<1} |F(z)| dA` by graded polar tensor Gauss-Legendre
/// quadrature, refined two grading levels at a time until successive
/// estimates agree to `opts.tol`.
pub fn total_energy(config: &ChargeConfig, opts: &EnergyOptions) -> Result<EnergyReport> {
    for (k, p) in config.points.iter().enumerate() {
        if (p.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "charge {k} at {p} is not on the unit circle"
            )));
        }
    }
    let mut level = opts.start_level;
    let (mut prev, _, _) = energy_at_level(config, opts, level);
    loop {
        level += 2;
        let (e, rp, ap) = energy_at_level(config, opts, level);
        let err = (e - prev).abs();
        if err <= opts.tol * e.abs() {
            return Ok(EnergyReport {
                label: config.label.clone(),
                n: config.n(),
                energy: e,
                radial_panels: rp,
                angular_panels: ap,
                estimated_error: err,
            });
        }
        if level >= opts.max_level {
            return Err(Error::NoConvergence {
                doublings: level,
                previous: prev,
                last: e,
            });
        }
        prev = e;
    }
}

/// Grid used by [`neutrality_profile`]: 64 radii from 0 to `r` inclusive
/// times 64 angles from 0.
pub const NEUTRALITY_GRID: usize = 64;

/// `max |F|` over the polar grid of `|z| <= r`.
pub fn max_field_in_disk(config: &ChargeConfig, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Invalid(format!("radius must lie in (0, 1), got {r}")));
    }
    let g = NEUTRALITY_GRID;
    let mut best: f64 = 0.0;
    for i in 0..g {
        let rho = r * i as f64 / (g - 1) as f64;
        for j in 0..g {
            let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / g as f64);
            best = best.max(field(config, z)?.norm());
        }
    }
    Ok(best)
}

/// `(n, max |F| on |z| <= r)` for each `n`, using configurations produced
/// by `generator`.
pub fn neutrality_profile<G>(generator: G, r: f64, n_list: &[usize]) -> Result<Vec<(usize, f64)>>
where
    G: Fn(usize) -> Result<ChargeConfig> + Sync,
{
    n_list
        .par_iter()
        .map(|&n| Ok((n, max_field_in_disk(&generator(n)?, r)?)))
        .collect()
}

/// Energy of randomly perturbed roots of unity compared with the
/// unperturbed configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationProbe {
    pub n: usize,
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
    pub reference_energy: f64,
    pub min_energy: f64,
    pub max_energy: f64,
    /// Perturbed configurations whose energy came out below the reference
    /// by more than the combined quadrature error.
    pub below_reference: usize,
}

/// Moves each root of unity by an angle uniform in `[-sigma, sigma]` and
/// records the energies.
pub fn perturbation_probe(
    n: usize,
    sigma: f64,
    trials: usize,
    seed: u64,
    opts: &EnergyOptions,
) -> Result<PerturbationProbe> {
    let base = ChargeConfig::roots_of_unity(n);
    let reference = total_energy(&base, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<ChargeConfig> = (0..trials)
        .map(|t| {
            let angles: Vec<f64> = (0..=n)
                .map(|k| 2.0 * PI * k as f64 / (n as f64 + 1.0) + rng.random_range(-sigma..=sigma))
                .collect();
            ChargeConfig::from_angles(&angles, format!("perturbed-{n}-{t}"))
        })
        .collect::<Result<_>>()?;
    let reports: Vec<EnergyReport> = configs
        .iter()
        .map(|c| total_energy(c, opts))
        .collect::<Result<_>>()?;
    let energies: Vec<f64> = reports.iter().map(|r| r.energy).collect();
    let below = reports
        .iter()
        .filter(|r| r.energy + r.estimated_error + reference.estimated_error < reference.energy)
        .count();
    Ok(PerturbationProbe {
        n,
        sigma,
        trials,
        seed,
        reference_energy: reference.energy,
        min_energy: energies.iter().copied().fold(f64::INFINITY, f64::min),
        max_energy: energies.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        below_reference: below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn field_reference_values() {
        let one = ChargeConfig::new(vec![c(1.0, 0.0)], "one").unwrap();
        assert_eq!(field(&one, c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert!(matches!(field(&one, c(1.0, 0.0)), Err(Error::AtCharge(0))));
        for n in [3usize, 8, 31] {
            let cfg = ChargeConfig::roots_of_unity(n);
            assert!(field(&cfg, c(0.0, 0.0)).unwrap().norm() < 1e-14);
            for z in [c(0.3, 0.2), c(-0.7, 0.1), c(1.5, -0.4)] {
                let m = n as i32 + 1;
                let want = (m as f64) * z.powi(n as i32) / (z.powi(m) - 1.0);
                let got = field(&cfg, z).unwrap();
                assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
            }
        }
    }

    #[test]
    fn field_conjugation() {
        let cfg = ChargeConfig::roots_of_unity(6);
        let z = c(0.4, 0.3);
        let a = field(&cfg, z.conj()).unwrap();
        let b = field(&cfg, z).unwrap().conj();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(ChargeConfig::new(vec![c(1.0, 0.0), c(1.0, 0.0)], "dup").is_err());
    }

    #[test]
    fn single_charge_energy() {
        // a unit charge on the rim of the unit disk: ∫∫ dA/|z-1| = 4
        let one = ChargeConfig::roots_of_unity(0);
        let r = total_energy(&one, &EnergyOptions::default()).unwrap();
        assert!((r.energy - 4.0).abs() < 1e-3 * 4.0, "{}", r.energy);
        let fine = EnergyOptions {
            angular_panels: 20,
            order: 16,
            ..Default::default()
        };
        let rf = total_energy(&one, &fine).unwrap();
        assert!((rf.energy - r.energy).abs() < 1e-3 * r.energy);
    }

    #[test]
    fn rotation_invariance_and_bound() {
        let cfg = ChargeConfig::roots_of_unity(5);
        let o = EnergyOptions::default();
        let e0 = total_energy(&cfg, &o).unwrap();
        let e1 = total_energy(&cfg.rotated(0.37), &o).unwrap();
        assert!((e0.energy - e1.energy).abs() < 1e-3 * e0.energy);
        assert!(e0.energy >= NEWMAN_BOUND);
        assert!(total_energy(&ChargeConfig::new(vec![c(0.5, 0.0)], "in").unwrap(), &o).is_err());
    }

    #[test]
    fn neutrality_closed_form() {
        let r = 0.5;
        let prof = neutrality_profile(|n| Ok(ChargeConfig::roots_of_unity(n)), r, &[0, 1, 4, 8, 16]).unwrap();
        for (n, v) in prof {
            let m = n as f64 + 1.0;
            let want = m * r.powi(n as i32) / (1.0 - r.powf(m));
            assert!((v - want).abs() < 1e-10, "n = {n}: {v} vs {want}");
        }
        assert!(max_field_in_disk(&ChargeConfig::roots_of_unity(3), 1.0).is_err());
    }

    #[test]
    fn probe_is_deterministic() {
        let o = EnergyOptions {
            tol: 1e-3,
            ..Default::default()
        };
        let a = perturbation_probe(2, 0.2, 3, 9, &o).unwrap();
        let b = perturbation_probe(2, 0.2, 3, 9, &o).unwrap();
        assert_eq!(a, b);
        assert!(a.min_energy >= NEWMAN_BOUND);
    }
}
