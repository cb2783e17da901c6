//! Marcinkiewicz-Zygmund ratios: contour integrals of `|P|^p` against
//! weighted node sums, node separation statistics and the scan for degrees
//! at which a grid angle nearly meets a fold partner.

use crate::error::{Error, Result};
use crate::geometry::{
    fold_from_gap, fold_j_signed, level_point, level_radius, segment_length, Curve, CurveKind, LevelCurve,
    END_PARAM,
};
use crate::lebesgue::BarycentricBasis;
use crate::nodes::{adjust_thetas, fejer_theta, fejer_thetas, FamilyKind, NodeFamily};
use crate::numeric::{CompensatedSum, GaussLegendre, ScaledProduct};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Successive quadrature estimates must agree to this relative tolerance.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Maximum number of panel doublings.
pub const MAX_DOUBLINGS: usize = 12;

/// Identifies a test polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `ℓ_index` of the node family.
    Lagrange { family: FamilyKind, index: usize },
    /// The `draw`-th random polynomial of a seeded stream.
    Random { seed: u64, draw: usize },
    /// Explicit coefficients.
    Monomial { degree: usize },
}

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A polynomial that can be evaluated pointwise, times a constant factor
/// `e^{log_scale}` kept apart so that scaling never overflows.
#[derive(Clone)]
pub struct EvaluablePolynomial {
    pub degree_bound: usize,
    pub witness: Witness,
    pub log_scale: f64,
    eval: Evaluator,
}

impl std::fmt::Debug for EvaluablePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvaluablePolynomial")
            .field("degree_bound", &self.degree_bound)
            .field("witness", &self.witness)
            .field("log_scale", &self.log_scale)
            .finish()
    }
}

impl EvaluablePolynomial {
    /// `Σ c_k (z / radius)^k`, evaluated by Horner's rule.
    pub fn scaled_monomial(coeffs: Vec<Complex64>, radius: f64) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        let eval: Evaluator = Arc::new(move |z: Complex64| {
            let u = z / radius;
            coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
        });
        Self {
            degree_bound: degree,
            witness: Witness::Monomial { degree },
            log_scale: 0.0,
            eval,
        }
    }

    pub fn monomial(coeffs: Vec<Complex64>) -> Self {
        Self::scaled_monomial(coeffs, 1.0)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(vec![c])
    }

    /// `ℓ_index` of the basis.
    pub fn lagrange(basis: Arc<BarycentricBasis>, family: FamilyKind, index: usize) -> Self {
        let degree = basis.nodes().len() - 1;
        let eval: Evaluator = Arc::new(move |z: Complex64| {
            let nodes = basis.nodes();
            if let Some(j) = nodes.iter().position(|&p| p == z) {
                return Complex64::new(if j == index { 1.0 } else { 0.0 }, 0.0);
            }
            let om = basis.omega(z);
            let w = basis.weights()[index];
            (om * w / crate::LogComplex::from_complex(z - nodes[index])).to_complex()
        });
        Self {
            degree_bound: degree,
            witness: Witness::Lagrange { family, index },
            log_scale: 0.0,
            eval,
        }
    }

    /// Multiplies by `c`; the modulus goes into `log_scale`.
    pub fn scaled_by(&self, c: Complex64) -> Self {
        let phase = c / c.norm();
        let inner = self.eval.clone();
        Self {
            degree_bound: self.degree_bound,
            witness: self.witness.clone(),
            log_scale: self.log_scale + c.norm().ln(),
            eval: Arc::new(move |z| phase * inner(z)),
        }
    }

    /// Value without the `e^{log_scale}` factor.
    pub fn eval_unscaled(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_unscaled(z) * self.log_scale.exp()
    }

    pub fn log_abs(&self, z: Complex64) -> f64 {
        self.eval_unscaled(z).norm().ln() + self.log_scale
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Invalid(format!("exponent p must lie in (1, ∞), got {p}")));
    }
    Ok(())
}

/// Panel count per segment at which 16-point Gauss-Legendre integrates
/// `|P|²` exactly on straight pieces, with some margin.
pub fn default_panels(n: usize) -> usize {
    ((2 * n + 1) / 16 + 2).max(2)
}

/// Composite Gauss-Legendre pass over every segment of `curve` with
/// `panels` panels per segment; `f` maps a curve point to a vector of
/// integrand values. Panel sums are combined in panel order.
fn gl_pass<F>(curve: &Curve, panels: usize, width: usize, f: &F) -> Vec<f64>
where
    F: Fn(Complex64, &mut [f64]) + Sync,
{
    let gl = GaussLegendre::sixteen();
    let cells: Vec<(usize, usize)> = (0..curve.segments.len())
        .flat_map(|s| (0..panels).map(move |i| (s, i)))
        .collect();
    let partial: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(s, i)| {
            let seg = &curve.segments[s];
            let (a, b) = seg.param;
            let h = (b - a) / panels as f64;
            let (lo, hi) = (a + h * i as f64, a + h * (i + 1) as f64);
            let mut acc = vec![CompensatedSum::new(); width];
            let mut buf = vec![0.0; width];
            for (x, w) in gl.mapped(lo, hi) {
                f((seg.point)(x), &mut buf);
                let sw = w * (seg.speed)(x);
                for (a, &v) in acc.iter_mut().zip(&buf) {
                    a.add(sw * v);
                }
            }
            acc.iter().map(|a| a.value()).collect()
        })
        .collect();
    (0..width)
        .map(|k| partial.iter().map(|v| v[k]).collect::<CompensatedSum>().value())
        .collect()
}

/// Repeats [`gl_pass`] with doubled panel counts until every component
/// settles to [`QUADRATURE_TOL`].
fn integrate_vec<F>(curve: &Curve, panels: usize, width: usize, f: &F) -> Result<Vec<f64>>
where
    F: Fn(Complex64, &mut [f64]) + Sync,
{
    let rel = |a: f64, b: f64| {
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            0.0
        } else {
            (a - b).abs() / scale
        }
    };
    let mut panels = panels.max(1);
    let mut prev = gl_pass(curve, panels, width, f);
    for doublings in 1..=MAX_DOUBLINGS {
        panels *= 2;
        let next = gl_pass(curve, panels, width, f);
        let worst = (0..width)
            .max_by(|&i, &j| rel(prev[i], next[i]).total_cmp(&rel(prev[j], next[j])))
            .unwrap_or(0);
        if width == 0 || rel(prev[worst], next[worst]) < QUADRATURE_TOL {
            return Ok(next);
        }
        if doublings == MAX_DOUBLINGS {
            return Err(Error::NoConvergence {
                doublings,
                previous: prev[worst],
                last: next[worst],
            });
        }
        prev = next;
    }
    unreachable!("the last doubling returns")
}

/// `∫_curve |P|^p |dz|` without the `e^{p log_scale}` factor.
fn integral_unscaled(poly: &EvaluablePolynomial, curve: &Curve, p: f64, panels: usize) -> Result<f64> {
    let f = |z: Complex64, out: &mut [f64]| out[0] = poly.eval_unscaled(z).norm().powf(p);
    Ok(integrate_vec(curve, panels, 1, &f)?[0])
}

/// `∫_curve |P(z)|^p |dz|` by composite 16-point Gauss-Legendre over
/// `panels` panels per segment, doubled until converged.
pub fn curve_integral_p(poly: &EvaluablePolynomial, curve: &Curve, p: f64, panels: usize) -> Result<f64> {
    check_p(p)?;
    Ok(integral_unscaled(poly, curve, p, panels)? * (p * poly.log_scale).exp())
}

/// `∫ |ℓ_k|^p |dz|` for every basis element at once.
pub fn lagrange_integrals(
    basis: &BarycentricBasis,
    curve: &Curve,
    p: f64,
    panels: usize,
) -> Result<Vec<f64>> {
    check_p(p)?;
    let width = basis.nodes().len();
    let f = |z: Complex64, out: &mut [f64]| {
        basis.log_abs_lagrange_into(z, out);
        for v in out.iter_mut() {
            *v = (p * *v).exp();
        }
    };
    integrate_vec(curve, panels, width, &f)
}

/// Node weights of the discrete side: `dist(z_k, Γ_m)` on the arc,
/// `2π/(n+1)` on the circle and `2/(n+1)` on the interval.
pub fn node_weights(family: &NodeFamily, m: usize) -> Vec<f64> {
    let count = family.len() as f64;
    match family.curve {
        CurveKind::Gamma0 => {
            let level = LevelCurve::with_default_resolution(m);
            family.points.par_iter().map(|&z| level.distance(z)).collect()
        }
        CurveKind::UnitCircle => vec![2.0 * PI / count; family.len()],
        CurveKind::Interval => vec![2.0 / count; family.len()],
    }
}

fn node_sum_unscaled(poly: &EvaluablePolynomial, family: &NodeFamily, weights: &[f64], p: f64) -> f64 {
    family
        .points
        .iter()
        .zip(weights)
        .map(|(&z, &w)| poly.eval_unscaled(z).norm().powf(p) * w)
        .collect::<CompensatedSum>()
        .value()
}

/// `Σ_k |P(z_k)|^p dist(z_k, Γ_n)` (uniform weights off the arc).
pub fn node_sum_p(poly: &EvaluablePolynomial, family: &NodeFamily, n: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let w = node_weights(family, n);
    Ok(node_sum_unscaled(poly, family, &w, p) * (p * poly.log_scale).exp())
}

/// One integral-to-sum comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MZReport {
    pub n: usize,
    pub p: f64,
    pub integral: f64,
    pub node_sum: f64,
    pub ratio: f64,
    pub witness: Witness,
    pub c0: Option<f64>,
    #[serde(rename = "theta_J_gap")]
    pub theta_j_gap: Option<f64>,
}

/// Shared data for many ratios over one node family.
pub struct MzContext<'a> {
    pub family: &'a NodeFamily,
    pub n: usize,
    pub p: f64,
    pub curve: Curve,
    pub weights: Vec<f64>,
    pub panels: usize,
    pub c0: Option<f64>,
    pub theta_j_gap: Option<f64>,
    basis: Arc<BarycentricBasis>,
}

impl<'a> MzContext<'a> {
    /// Uses level index `m = n` for the node weights.
    pub fn new(family: &'a NodeFamily, n: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        let weights = node_weights(family, n);
        let (c0, theta_j_gap) = if family.curve == CurveKind::Gamma0 {
            let c0 = Some(c0_from_weights(&family.points, &weights));
            let gap = match family.kind {
                FamilyKind::FejerGamma0 if family.n >= 2 => Some(theta_j_separation(family.n)?),
                FamilyKind::AdjustedFejerGamma0 => Some(adjusted_theta_separation(family.n)?),
                _ => None,
            };
            (c0, gap)
        } else {
            (None, None)
        };
        Ok(Self {
            family,
            n,
            p,
            curve: family.curve(),
            weights,
            panels: default_panels(family.n),
            c0,
            theta_j_gap,
            basis: Arc::new(BarycentricBasis::from_family(family)),
        })
    }

    fn report(&self, integral: f64, node_sum: f64, log_scale: f64, witness: Witness) -> Result<MZReport> {
        if node_sum <= 0.0 {
            return Err(Error::DegenerateNodeSum);
        }
        let s = (self.p * log_scale).exp();
        Ok(MZReport {
            n: self.n,
            p: self.p,
            integral: integral * s,
            node_sum: node_sum * s,
            ratio: integral / node_sum,
            witness,
            c0: self.c0,
            theta_j_gap: self.theta_j_gap,
        })
    }

    pub fn ratio(&self, poly: &EvaluablePolynomial) -> Result<MZReport> {
        let integral = integral_unscaled(poly, &self.curve, self.p, self.panels)?;
        let sum = node_sum_unscaled(poly, self.family, &self.weights, self.p);
        self.report(integral, sum, poly.log_scale, poly.witness.clone())
    }

    pub fn lagrange(&self, index: usize) -> EvaluablePolynomial {
        EvaluablePolynomial::lagrange(self.basis.clone(), self.family.kind, index)
    }

    /// Ratios for every Lagrange basis element; the node sum of `ℓ_k` is
    /// just the weight of node `k`.
    pub fn lagrange_reports(&self) -> Result<Vec<MZReport>> {
        let ints = lagrange_integrals(&self.basis, &self.curve, self.p, self.panels)?;
        ints.iter()
            .zip(&self.weights)
            .enumerate()
            .map(|(k, (&i, &w))| {
                self.report(
                    i,
                    w,
                    0.0,
                    Witness::Lagrange {
                        family: self.family.kind,
                        index: k,
                    },
                )
            })
            .collect()
    }

    /// `count` random polynomials of degree `n` with coefficients uniform
    /// in the unit square, in the variable `z / R` where `R` bounds the
    /// curve's modulus.
    pub fn random_polynomials(&self, count: usize, seed: u64) -> Vec<EvaluablePolynomial> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radius = match self.family.curve {
            CurveKind::Gamma0 => segment_length(),
            _ => 1.0,
        };
        (0..count)
            .map(|draw| {
                let coeffs = (0..=self.family.n)
                    .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let mut p = EvaluablePolynomial::scaled_monomial(coeffs, radius);
                p.witness = Witness::Random { seed, draw };
                p
            })
            .collect()
    }
}

/// Which candidates [`worst_mz_ratio_with`] tries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSet {
    Lagrange,
    Random,
    Both,
}

/// Number of random witnesses in the default candidate set.
pub const RANDOM_WITNESSES: usize = 20;

pub fn mz_ratio(poly: &EvaluablePolynomial, family: &NodeFamily, n: usize, p: f64) -> Result<MZReport> {
    MzContext::new(family, n, p)?.ratio(poly)
}

/// Largest ratio over all Lagrange basis elements and twenty random
/// polynomials. A lower bound for the operator supremum over `Π_n`.
pub fn worst_mz_ratio(family: &NodeFamily, n: usize, p: f64) -> Result<MZReport> {
    worst_mz_ratio_with(family, n, p, WitnessSet::Both, 0)
}

pub fn worst_mz_ratio_with(
    family: &NodeFamily,
    n: usize,
    p: f64,
    set: WitnessSet,
    seed: u64,
) -> Result<MZReport> {
    let ctx = MzContext::new(family, n, p)?;
    let mut reports = Vec::new();
    if matches!(set, WitnessSet::Lagrange | WitnessSet::Both) {
        reports.extend(ctx.lagrange_reports()?);
    }
    if matches!(set, WitnessSet::Random | WitnessSet::Both) {
        for poly in ctx.random_polynomials(RANDOM_WITNESSES, seed) {
            reports.push(ctx.ratio(&poly)?);
        }
    }
    reports
        .into_iter()
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .ok_or_else(|| Error::Invalid("empty witness set".into()))
}

fn c0_from_weights(points: &[Complex64], weights: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for j in 0..points.len() {
        for k in j + 1..points.len() {
            let v = (points[j] - points[k]).norm() / weights[j].min(weights[k]);
            best = best.min(v);
        }
    }
    best
}

/// `min_{j<k} |z_j - z_k| / min(dist(z_j, Γ_n), dist(z_k, Γ_n))`.
pub fn c0_separation(family: &NodeFamily, n: usize) -> f64 {
    let w = node_weights(
        &NodeFamily {
            curve: CurveKind::Gamma0,
            ..family.clone()
        },
        n,
    );
    c0_from_weights(&family.points, &w)
}

/// `(n+1) min |θ_j - J(θ_k)|` over grid angles `|θ_j| < 2π/3` and
/// `|θ_k| >= 2π/3` of the raw grid.
pub fn theta_j_separation(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Invalid("theta separation needs n >= 2".into()));
    }
    let thetas = fejer_thetas(n)?;
    let mut partners: Vec<f64> = thetas
        .iter()
        .filter(|t| t.abs() >= END_PARAM)
        .map(|&t| fold_j_signed(t))
        .collect();
    partners.sort_by(f64::total_cmp);
    let mut best = f64::INFINITY;
    for &t in thetas.iter().filter(|t| t.abs() < END_PARAM) {
        let i = partners.partition_point(|&s| s < t);
        for &s in partners[i.saturating_sub(1)..(i + 1).min(partners.len())].iter() {
            best = best.min((t - s).abs());
        }
    }
    Ok((n as f64 + 1.0) * best)
}

/// `(n+1)` times the smallest gap between adjusted parameters.
pub fn adjusted_theta_separation(n: usize) -> Result<f64> {
    let (mut t, _) = adjust_thetas(n)?;
    t.sort_by(f64::total_cmp);
    let gap = t.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok((n as f64 + 1.0) * gap)
}

/// `J(θ_{n,⌊n/2⌋})`, with the last positive grid angle `π - π/(n+1)`.
pub fn fold_of_last_angle(n: usize) -> f64 {
    fold_from_gap(PI / (n as f64 + 1.0))
}

/// `r_n = (n+1) J(θ_{n,⌊n/2⌋})`.
pub fn r_n(n: usize) -> f64 {
    (n as f64 + 1.0) * fold_of_last_angle(n)
}

/// Leading behaviour `4^{1/3} π^{1/3} (n+1)^{2/3} + π/3` of [`r_n`].
pub fn r_n_asymptotic(n: usize) -> f64 {
    (4.0 * PI).cbrt() * (n as f64 + 1.0).powf(2.0 / 3.0) + PI / 3.0
}

/// Degree at which `θ_{n,j}` comes closest to `J(θ_{n,⌊n/2⌋})` in the
/// scaling `(n+1)^{4/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionOrder {
    pub j: usize,
    pub n: usize,
    pub scaled_gap: f64,
}

/// `J(θ_{n,⌊n/2⌋})` tabulated for every `n <= n_max`; read-only once built.
#[derive(Debug, Clone)]
pub struct CollisionTable {
    folds: Vec<f64>,
}

impl CollisionTable {
    pub fn new(n_max: usize) -> Self {
        let folds = (0..=n_max).into_par_iter().map(fold_of_last_angle).collect();
        Self { folds }
    }

    pub fn n_max(&self) -> usize {
        self.folds.len() - 1
    }

    /// Scans `n` over the degrees where index `j` is an interior grid angle
    /// (`j < ⌊n/2⌋`, `θ_{n,j} <= 2π/3`).
    pub fn order(&self, j: usize) -> Option<CollisionOrder> {
        let mut best: Option<CollisionOrder> = None;
        for n in j.max(2)..=self.n_max() {
            if j >= n / 2 {
                continue;
            }
            let th = fejer_theta(n, j);
            if th > END_PARAM {
                continue;
            }
            let g = (n as f64 + 1.0).powf(4.0 / 3.0) * (self.folds[n] - th).abs();
            if best.is_none_or(|b| g < b.scaled_gap) {
                best = Some(CollisionOrder { j, n, scaled_gap: g });
            }
        }
        best
    }
}

/// Collision order for one index `j`, scanning `n <= n_max`.
pub fn collision_order(j: usize, n_max: usize) -> Result<CollisionOrder> {
    if j == 0 || n_max < j {
        return Err(Error::Invalid(format!(
            "collision scan needs 1 <= j <= n_max, got j = {j}, n_max = {n_max}"
        )));
    }
    CollisionTable::new(n_max)
        .order(j)
        .ok_or_else(|| Error::Invalid(format!("no admissible degree for j = {j} up to {n_max}")))
}

/// Approximate `A_p` constant of `|ω_n|` on the preimage circle
/// `|w| = 1 + 1/(n+1)` (mapped onto the level curve for arc families).
///
/// The supremum over all arcs is replaced by a maximum over the dyadic arcs
/// of `[-π, π)` down to `levels` halvings, each averaged on a uniform
/// sample grid. This only approximates the true constant from below.
pub fn ap_dyadic_diagnostic(family: &NodeFamily, p: f64, levels: u32) -> Result<f64> {
    check_p(p)?;
    let n = family.n;
    let q = p / (p - 1.0);
    let cells = 1usize << levels;
    let per_cell = (64 * (n + 1)).div_ceil(cells).max(8);
    let m = cells * per_cell;
    let rho = level_radius(n);
    let logs: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let phi = -PI + 2.0 * PI * (i as f64 + 0.5) / m as f64;
            let z = match family.curve {
                CurveKind::Gamma0 => level_point(n, phi),
                _ => Complex64::from_polar(rho, phi),
            };
            let mut prod = ScaledProduct::new();
            for &zk in &family.points {
                prod.mul((z - zk).norm());
            }
            prod.ln()
        })
        .collect();
    let shift = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best: f64 = 0.0;
    for level in 0..=levels {
        let parts = 1usize << level;
        let len = m / parts;
        for c in 0..parts {
            let slice = &logs[c * len..(c + 1) * len];
            let mp: f64 = slice.iter().map(|&l| (p * (l - shift)).exp()).sum::<f64>() / len as f64;
            let mq: f64 = slice.iter().map(|&l| (-q * (l - shift)).exp()).sum::<f64>() / len as f64;
            best = best.max(mp.powf(1.0 / p) * mq.powf(1.0 / q));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::{adjusted_fejer_nodes, chebyshev_nodes, fejer_nodes_gamma0};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn roots_of_unity(n: usize) -> NodeFamily {
        let pts = (0..=n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / (n as f64 + 1.0)))
            .collect();
        NodeFamily::new(FamilyKind::Custom, CurveKind::UnitCircle, pts, None, None).unwrap()
    }

    #[test]
    fn reference_integrals() {
        let one = EvaluablePolynomial::constant(c(1.0, 0.0));
        let len = curve_integral_p(&one, &Curve::gamma0(), 2.0, 2).unwrap();
        assert!((len - 2.0 * 27f64.powf(0.25)).abs() < 1e-13);
        let len3 = curve_integral_p(&one, &Curve::gamma0(), 3.5, 2).unwrap();
        assert!((len3 - len).abs() < 1e-13);
        let z = EvaluablePolynomial::monomial(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let circ = curve_integral_p(&z, &Curve::unit_circle(), 2.0, 4).unwrap();
        assert!((circ - 2.0 * PI).abs() < 1e-12);
        let mut co = vec![c(0.0, 0.0); 6];
        co[5] = c(1.0, 0.0);
        let z5 = EvaluablePolynomial::monomial(co);
        let iv = curve_integral_p(&z5, &Curve::interval(), 2.0, 1).unwrap();
        assert!((iv - 2.0 / 11.0).abs() < 1e-14);
        assert!(curve_integral_p(&one, &Curve::gamma0(), 1.0, 2).is_err());
    }

    #[test]
    fn single_panel_is_exact_for_even_powers() {
        // |z|^{2m} on a segment from the origin integrates to L^{2m+1}/(2m+1)
        let l = segment_length();
        for m in 0..=15usize {
            let mut co = vec![c(0.0, 0.0); m + 1];
            co[m] = c(1.0, 0.0);
            let poly = EvaluablePolynomial::monomial(co);
            let got = gl_pass(&Curve::gamma0(), 1, 1, &|z, out: &mut [f64]| {
                out[0] = poly.eval(z).norm().powi(2)
            })[0];
            let want = 2.0 * l.powi(2 * m as i32 + 1) / (2 * m + 1) as f64;
            assert!((got - want).abs() <= 1e-12 * want, "m = {m}");
        }
    }

    #[test]
    fn node_sums() {
        let f = adjusted_fejer_nodes(8).unwrap();
        let zero = EvaluablePolynomial::constant(c(0.0, 0.0));
        assert_eq!(node_sum_p(&zero, &f, 8, 2.0).unwrap(), 0.0);
        let one = EvaluablePolynomial::constant(c(1.0, 0.0));
        let s = node_sum_p(&one, &f, 8, 2.0).unwrap();
        assert!(s > 0.0);
        assert!(matches!(
            mz_ratio(&zero, &f, 8, 2.0),
            Err(Error::DegenerateNodeSum)
        ));

        let single = NodeFamily::new(
            FamilyKind::Custom,
            CurveKind::Gamma0,
            vec![crate::geometry::boundary_point(0.7)],
            None,
            None,
        )
        .unwrap();
        let p = EvaluablePolynomial::constant(c(3.0, 0.0));
        let d = crate::geometry::dist_to_level(single.points[0], 0).unwrap();
        let s = node_sum_p(&p, &single, 0, 2.0).unwrap();
        assert!((s - 9.0 * d).abs() < 1e-12);
        let r = worst_mz_ratio(&single, 0, 2.0).unwrap();
        assert!((r.ratio - 2.0 * segment_length() / d).abs() < 1e-9 * r.ratio);
    }

    #[test]
    fn parseval_on_the_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [4usize, 16, 64] {
            let fam = roots_of_unity(n);
            let ctx = MzContext::new(&fam, n, 2.0).unwrap();
            for _ in 0..50 {
                let coeffs = (0..=n)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let r = ctx.ratio(&EvaluablePolynomial::monomial(coeffs)).unwrap();
                assert!((r.ratio - 1.0).abs() < 1e-12, "n = {n}: {}", r.ratio);
            }
            let w = worst_mz_ratio(&fam, n, 2.0).unwrap();
            assert!((w.ratio - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_invariance() {
        let f = adjusted_fejer_nodes(12).unwrap();
        let ctx = MzContext::new(&f, 12, 2.0).unwrap();
        let base = ctx.random_polynomials(1, 5).remove(0);
        let r0 = ctx.ratio(&base).unwrap();
        for e in [30, -30] {
            let scaled = base.scaled_by(c(10f64.powi(e), 0.0));
            let r = ctx.ratio(&scaled).unwrap();
            assert_eq!(r.ratio, r0.ratio);
            assert!((r.integral / r0.integral / 10f64.powi(2 * e) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lagrange_batch_matches_single() {
        let f = fejer_nodes_gamma0(10).unwrap();
        let ctx = MzContext::new(&f, 10, 2.0).unwrap();
        let batch = ctx.lagrange_reports().unwrap();
        for k in [0usize, 3, 7] {
            let single = ctx.ratio(&ctx.lagrange(k)).unwrap();
            assert!((single.ratio - batch[k].ratio).abs() < 1e-10 * single.ratio);
        }
    }

    #[test]
    fn lagrange_is_degree_n() {
        // interpolating ℓ_k at n+2 fresh points reproduces it elsewhere
        let f = chebyshev_nodes(6);
        let basis = Arc::new(BarycentricBasis::from_family(&f));
        let l = EvaluablePolynomial::lagrange(basis, f.kind, 2);
        let xs: Vec<Complex64> = (0..8).map(|i| c(-0.95 + 0.27 * i as f64, 0.1)).collect();
        let fresh = BarycentricBasis::new(&xs);
        let vals: Vec<Complex64> = xs.iter().map(|&z| l.eval(z)).collect();
        for z in [c(0.33, -0.2), c(-0.5, 0.4)] {
            let got = fresh.interpolate(&vals, z).unwrap();
            assert!((got - l.eval(z)).norm() < 1e-9);
        }
    }

    #[test]
    fn separations() {
        let far = NodeFamily::new(
            FamilyKind::Custom,
            CurveKind::Gamma0,
            vec![
                crate::geometry::boundary_point(END_PARAM),
                crate::geometry::boundary_point(-END_PARAM),
            ],
            None,
            None,
        )
        .unwrap();
        assert!(c0_separation(&far, 1) > 1.0);
        for n in 2..=200usize {
            assert!(theta_j_separation(n).unwrap() > 0.0);
            assert!(adjusted_theta_separation(n).unwrap() >= 2.0 * PI / 3.0 - 1e-9);
        }
    }

    #[test]
    fn collision_orders_are_increasing_and_bounded() {
        let table = CollisionTable::new(20_000);
        let orders: Vec<CollisionOrder> = (1..=12).map(|j| table.order(j).unwrap()).collect();
        for w in orders.windows(2) {
            assert!(w[1].n > w[0].n);
        }
        for o in &orders {
            assert!(o.scaled_gap <= 50.0, "{o:?}");
        }
        assert_eq!(table.order(5).unwrap().n, 46);
        assert_eq!(collision_order(5, 20_000).unwrap(), orders[4]);
    }

    #[test]
    fn r_n_expansion() {
        for n in [100usize, 1000, 10_000] {
            let d = (r_n(n) - r_n_asymptotic(n)).abs();
            assert!(d < 2.0 * (n as f64 + 1.0).powf(-2.0 / 3.0), "n = {n}");
        }
    }

    #[test]
    fn ap_diagnostic_on_roots_of_unity() {
        let v = ap_dyadic_diagnostic(&roots_of_unity(16), 2.0, 6).unwrap();
        assert!((1.0..10.0).contains(&v));
        let a = ap_dyadic_diagnostic(&adjusted_fejer_nodes(16).unwrap(), 2.0, 6).unwrap();
        assert!(a.is_finite() && a >= 1.0);
    }

    #[test]
    fn report_json_fields() {
        let f = adjusted_fejer_nodes(16).unwrap();
        let r = worst_mz_ratio(&f, 16, 2.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "c0",
                "integral",
                "n",
                "node_sum",
                "p",
                "ratio",
                "theta_J_gap",
                "witness"
            ]
        );
    }
}
