//! Lagrange basis, Lebesgue function and Lebesgue constants.
//!
//! Everything is evaluated through the weights `1/ω'(z_k)` kept in log
//! space, so node counts in the tens of thousands never overflow.

use crate::error::{Error, Result};
use crate::geometry::{ensure_on_arc, fold_j_inverse, level_radius, psi0_unchecked, Curve, CurveKind};
use crate::logspace::LogComplex;
use crate::nodes::{fejer_theta, fejer_thetas, FamilyKind, NodeFamily};
use crate::numeric::{golden_max, CompensatedSum, ScaledProduct};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Weight magnitudes beyond `e^{±700}` are reported as near-collision hints.
const WEIGHT_LOG_LIMIT: f64 = 700.0;

/// Barycentric data for a fixed node set.
#[derive(Debug, Clone)]
pub struct BarycentricBasis {
    nodes: Vec<Complex64>,
    /// `1/ω'(z_k)`.
    weights: Vec<LogComplex>,
    /// `|1/ω'(z_k)| / max_j |1/ω'(z_j)|`.
    scaled: Vec<f64>,
    max_log_weight: f64,
    /// Some scaled weight underflowed; the fast path is then bypassed.
    wide_range: bool,
    flagged: Vec<usize>,
}

impl BarycentricBasis {
    pub fn new(nodes: &[Complex64]) -> Self {
        let weights: Vec<LogComplex> = nodes
            .par_iter()
            .enumerate()
            .map(|(k, &zk)| {
                let others = nodes.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, z)| z);
                LogComplex::product_of_differences(zk, others).recip()
            })
            .collect();
        let max_log_weight = weights
            .iter()
            .map(|w| w.log_mag)
            .fold(f64::NEG_INFINITY, f64::max);
        let scaled: Vec<f64> = weights
            .iter()
            .map(|w| (w.log_mag - max_log_weight).exp())
            .collect();
        let wide_range = scaled.contains(&0.0);
        let flagged = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.log_mag.abs() > WEIGHT_LOG_LIMIT)
            .map(|(k, _)| k)
            .collect();
        Self {
            nodes: nodes.to_vec(),
            weights,
            scaled,
            max_log_weight,
            wide_range,
            flagged,
        }
    }

    pub fn from_family(family: &NodeFamily) -> Self {
        Self::new(&family.points)
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[LogComplex] {
        &self.weights
    }

    /// Indices whose weight magnitude left `e^{±700}`.
    pub fn flagged(&self) -> &[usize] {
        &self.flagged
    }

    fn node_index(&self, z: Complex64) -> Option<usize> {
        self.nodes.iter().position(|&p| p == z)
    }

    /// `ω(z) = Π (z - z_k)`.
    pub fn omega(&self, z: Complex64) -> LogComplex {
        LogComplex::product_of_differences(z, &self.nodes)
    }

    /// `ℓ_k(z)` for every `k`; exactly the Kronecker pattern at a node.
    pub fn lagrange_at(&self, z: Complex64) -> Vec<Complex64> {
        if let Some(j) = self.node_index(z) {
            let mut e = vec![Complex64::new(0.0, 0.0); self.nodes.len()];
            e[j] = Complex64::new(1.0, 0.0);
            return e;
        }
        let om = self.omega(z);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&zk, &wk)| (om * wk / LogComplex::from_complex(z - zk)).to_complex())
            .collect()
    }

    /// `Λ(z) = Σ |ℓ_k(z)|`, summing the individually formed basis values.
    pub fn lebesgue_by_basis(&self, z: Complex64) -> f64 {
        if self.node_index(z).is_some() {
            return 1.0;
        }
        let om = self.omega(z);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&zk, &wk)| (om.log_mag + wk.log_mag - (z - zk).norm().ln()).exp())
            .collect::<CompensatedSum>()
            .value()
    }

    /// `Λ(z) = |ω(z)| Σ 1/(|ω'(z_k)| |z - z_k|)`, the fast path used for
    /// maximization.
    pub fn lebesgue(&self, z: Complex64) -> f64 {
        if self.wide_range {
            return self.lebesgue_by_basis(z);
        }
        let mut prod = ScaledProduct::new();
        let mut sum = 0.0;
        for (&zk, &wk) in self.nodes.iter().zip(&self.scaled) {
            let d = (z - zk).norm();
            if d == 0.0 {
                return 1.0;
            }
            prod.mul(d);
            sum += wk / d;
        }
        (prod.ln() + self.max_log_weight + sum.ln()).exp()
    }

    /// Writes `ln|ℓ_k(z)|` for every `k` into `out`.
    pub fn log_abs_lagrange_into(&self, z: Complex64, out: &mut [f64]) {
        if let Some(j) = self.node_index(z) {
            out.fill(f64::NEG_INFINITY);
            out[j] = 0.0;
            return;
        }
        let mut prod = ScaledProduct::new();
        for &zk in &self.nodes {
            prod.mul((z - zk).norm());
        }
        let lw = prod.ln();
        for ((o, &zk), wk) in out.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *o = lw + wk.log_mag - (z - zk).norm().ln();
        }
    }

    /// `Σ f_k ℓ_k(z)`.
    pub fn interpolate(&self, values: &[Complex64], z: Complex64) -> Result<Complex64> {
        if values.len() != self.nodes.len() {
            return Err(Error::LengthMismatch {
                expected: self.nodes.len(),
                got: values.len(),
            });
        }
        if let Some(j) = self.node_index(z) {
            return Ok(values[j]);
        }
        let om = self.omega(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&zk, &wk), &f) in self.nodes.iter().zip(&self.weights).zip(values) {
            let scaled = LogComplex::from_parts(wk.log_mag - self.max_log_weight, wk.phase);
            acc += f * scaled.to_complex() / (z - zk);
        }
        let total = om * LogComplex::from_parts(self.max_log_weight, Complex64::new(1.0, 0.0));
        Ok(total.to_complex() * acc)
    }
}

/// `1/ω'(z_k)` for each node.
pub fn barycentric_weights(family: &NodeFamily) -> Vec<LogComplex> {
    BarycentricBasis::from_family(family).weights
}

pub fn lagrange_basis_at(family: &NodeFamily, z: Complex64) -> Vec<Complex64> {
    BarycentricBasis::from_family(family).lagrange_at(z)
}

pub fn lebesgue_function(family: &NodeFamily, z: Complex64) -> f64 {
    BarycentricBasis::from_family(family).lebesgue(z)
}

pub fn interpolate(family: &NodeFamily, values: &[Complex64], z: Complex64) -> Result<Complex64> {
    BarycentricBasis::from_family(family).interpolate(values, z)
}

pub fn omega_log(family: &NodeFamily, z: Complex64) -> LogComplex {
    LogComplex::product_of_differences(z, &family.points)
}

/// Settings for [`lebesgue_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LebesgueOptions {
    pub samples_per_gap: usize,
    pub refine_tol: f64,
    /// Number of best sampled candidates (from distinct gaps) that get a
    /// golden-section refinement.
    pub refine_candidates: usize,
}

impl Default for LebesgueOptions {
    fn default() -> Self {
        Self {
            samples_per_gap: 40,
            refine_tol: 1e-9,
            refine_candidates: 4,
        }
    }
}

/// Result of a Lebesgue-constant maximization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LebesgueReport {
    pub n: usize,
    pub family: FamilyKind,
    #[serde(rename = "L")]
    pub l: f64,
    /// Curve parameter of the maximizer: folded angle on the arc, polar
    /// angle on the circle, abscissa on the interval.
    pub argmax_param: f64,
    pub samples_used: usize,
    pub refinement_gap: f64,
    pub warnings: Vec<String>,
}

/// Relative tolerance between the two evaluation paths at the maximizer.
pub const FORMULA_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy)]
struct Candidate {
    t: f64,
    value: f64,
    lo: f64,
    hi: f64,
    gap: usize,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    a.value > b.value || (a.value == b.value && a.t < b.t)
}

/// Breakpoints splitting the parameter range into intervals on which `Λ` is
/// smooth: node parameters, corners and the range ends.
fn breakpoints(curve: &Curve, params: &[f64]) -> (Vec<f64>, Vec<(f64, f64)>) {
    let (lo, hi) = curve.parameter_range();
    let mut pts: Vec<f64> = params.to_vec();
    pts.extend(&curve.corners);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    let mut gaps = Vec::with_capacity(pts.len() + 1);
    let mut fixed = Vec::new();
    if curve.is_periodic() {
        if pts.is_empty() {
            gaps.push((lo, hi));
        } else {
            for w in pts.windows(2) {
                gaps.push((w[0], w[1]));
            }
            gaps.push((pts[pts.len() - 1], pts[0] + (hi - lo)));
        }
    } else {
        fixed.push(lo);
        fixed.push(hi);
        let mut prev = lo;
        for &p in pts.iter().filter(|&&p| p > lo && p < hi) {
            gaps.push((prev, p));
            prev = p;
        }
        gaps.push((prev, hi));
    }
    fixed.extend(&curve.corners);
    gaps.retain(|(a, b)| b > a);
    (fixed, gaps)
}

/// Maximizes `Λ` over the family's curve.
///
/// Each interval between consecutive node parameters (split further at
/// corners) is sampled at `samples_per_gap` interior points; curve ends and
/// corners are evaluated as well. The best few candidates are refined by
/// golden-section search down to `refine_tol`, and the maximizer is
/// re-evaluated through the basis-sum formula as a cross-check.
pub fn lebesgue_constant(family: &NodeFamily, opts: &LebesgueOptions) -> Result<LebesgueReport> {
    let curve = family.curve();
    let basis = BarycentricBasis::from_family(family);
    let params = family.curve_parameters()?;
    lebesgue_constant_with(&basis, &curve, &params, family.kind, family.warnings(), opts)
}

pub(crate) fn lebesgue_constant_with(
    basis: &BarycentricBasis,
    curve: &Curve,
    params: &[f64],
    kind: FamilyKind,
    mut warnings: Vec<String>,
    opts: &LebesgueOptions,
) -> Result<LebesgueReport> {
    let n = basis.nodes().len() - 1;
    let spg = opts.samples_per_gap.max(1);
    let (fixed, gaps) = breakpoints(curve, params);
    let eval = |t: f64| basis.lebesgue(curve.point_at(t));

    let per_gap: Vec<Candidate> = gaps
        .par_iter()
        .enumerate()
        .map(|(g, &(a, b))| {
            let h = (b - a) / (spg as f64 + 1.0);
            let mut best = Candidate {
                t: a,
                value: f64::NEG_INFINITY,
                lo: a,
                hi: b,
                gap: g,
            };
            for i in 1..=spg {
                let t = a + h * i as f64;
                let c = Candidate {
                    t,
                    value: eval(t),
                    lo: (t - h).max(a),
                    hi: (t + h).min(b),
                    gap: g,
                };
                if better(&c, &best) {
                    best = c;
                }
            }
            best
        })
        .collect();
    let mut samples_used = gaps.len() * spg;

    let mut candidates = per_gap;
    for &t in &fixed {
        samples_used += 1;
        let (lo, hi) = gaps
            .iter()
            .map(|&(a, b)| {
                let h = (b - a) / (spg as f64 + 1.0);
                (a, b, h)
            })
            .find(|&(a, b, _)| t >= a && t <= b)
            .map(|(a, b, h)| ((t - h).max(a), (t + h).min(b)))
            .unwrap_or((t, t));
        candidates.push(Candidate {
            t,
            value: eval(t),
            lo,
            hi,
            gap: usize::MAX,
        });
    }
    candidates.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.t.total_cmp(&b.t)));

    let mut used_gaps = Vec::new();
    let mut best: Option<(Candidate, f64)> = None;
    for c in candidates.iter() {
        if used_gaps.len() >= opts.refine_candidates.max(1) {
            break;
        }
        if c.gap != usize::MAX && used_gaps.contains(&c.gap) {
            continue;
        }
        used_gaps.push(c.gap);
        let r = golden_max(eval, c.lo, c.hi, opts.refine_tol);
        samples_used += r.evaluations;
        let refined = if r.value >= c.value {
            Candidate {
                t: r.x,
                value: r.value,
                ..*c
            }
        } else {
            *c
        };
        if best.as_ref().is_none_or(|(b, _)| better(&refined, b)) {
            best = Some((refined, r.width));
        }
    }
    let (arg, width) = best.ok_or_else(|| Error::Invalid("empty parameter range".into()))?;

    let z = curve.point_at(arg.t);
    let by_basis = basis.lebesgue_by_basis(z);
    let rel = (by_basis - arg.value).abs() / arg.value.abs().max(1.0);
    if rel > FORMULA_AGREEMENT_TOL {
        warnings.push(format!(
            "evaluation paths disagree at the maximizer: relative gap {rel:e}"
        ));
    }
    if !basis.flagged().is_empty() {
        warnings.push(format!(
            "{} barycentric weights beyond e^±{WEIGHT_LOG_LIMIT}",
            basis.flagged().len()
        ));
    }
    let argmax_param = if curve.is_periodic() {
        crate::geometry::wrap_angle(arg.t)
    } else {
        arg.t
    };
    Ok(LebesgueReport {
        n,
        family: kind,
        l: arg.value.max(1.0),
        argmax_param,
        samples_used,
        refinement_gap: width,
        warnings,
    })
}

/// `ω*_n(z) = Π (z - ζ*_k)` with `ζ*_k = psi0(ρ_n e^{iθ_{n,k}})`, the node
/// polynomial of the grid pushed out to the level curve `Γ_n`.
pub fn omega_level_surrogate(n: usize, z: Complex64) -> Result<LogComplex> {
    ensure_on_arc(z)?;
    let zeta = level_images(n)?;
    Ok(LogComplex::product_of_differences(z, &zeta))
}

/// `ζ*_{n,k}` for the raw grid.
pub fn level_images(n: usize) -> Result<Vec<Complex64>> {
    let rho = level_radius(n);
    Ok(fejer_thetas(n)?
        .into_iter()
        .map(|t| psi0_unchecked(Complex64::from_polar(rho, t)))
        .collect())
}

/// Lower and upper bounds on `|ω*_n|` over the arc.
pub fn omega_surrogate_bounds() -> (f64, f64) {
    let e = std::f64::consts::E;
    (
        (-3f64).exp() * (e - 1.0).powi(2),
        5f64.exp() * (1.0 + 2.0 * e) / (e - 1.0),
    )
}

/// Index selectors for the arc point `psi0(e^{it})`, `t ∈ [0, 2π/3)`:
/// the nearest grid angle inside `[0, 2π/3]` to `t`, and the nearest one
/// beyond `2π/3` to the fold partner `J^{-1}(t)`. Ties go to the smaller
/// index.
pub fn nearest_indices(n: usize, t: f64) -> Result<(usize, Option<usize>)> {
    let half = n / 2;
    let end = 2.0 * PI / 3.0;
    let partner = fold_j_inverse(t.clamp(0.0, end))?;
    let pick = |target: f64, pred: &dyn Fn(f64) -> bool| {
        (0..=half).filter(|&k| pred(fejer_theta(n, k))).min_by(|&a, &b| {
            (fejer_theta(n, a) - target)
                .abs()
                .total_cmp(&(fejer_theta(n, b) - target).abs())
                .then(a.cmp(&b))
        })
    };
    let k1 = pick(t, &|th| th <= end).unwrap_or(0);
    let k2 = pick(partner, &|th| th > end && th < PI);
    Ok((k1, k2))
}

/// `|ω_n(z)| |(z-ζ*_{k1})(z-ζ*_{k2})| / |(z-z*_{k1})(z-z*_{k2})|` at
/// `z = psi0(e^{it})` for the raw grid nodes `z*`. Bounded above and below
/// when `z` stays away from the nodes.
pub fn omega_surrogate_ratio(n: usize, t: f64) -> Result<f64> {
    let t = t.abs();
    let z = crate::geometry::boundary_point(t);
    let thetas = fejer_thetas(n)?;
    let nodes: Vec<Complex64> = thetas
        .iter()
        .map(|&s| crate::geometry::boundary_point(s))
        .collect();
    let zeta = level_images(n)?;
    let (k1, k2) = nearest_indices(n, t)?;
    let mut log = LogComplex::product_of_differences(z, &nodes).log_mag;
    for k in std::iter::once(k1).chain(k2) {
        log += (z - zeta[k]).norm().ln() - (z - nodes[k]).norm().ln();
    }
    Ok(log.exp())
}

/// Convenience: Lebesgue constant of a freshly generated family.
pub fn lebesgue_constant_of(kind: FamilyKind, n: usize, opts: &LebesgueOptions) -> Result<LebesgueReport> {
    let family = crate::nodes::build_family(kind, n, &Default::default())?;
    lebesgue_constant(&family, opts)
}

/// Curve kind used for a family kind, defaulting to the arc.
pub fn curve_of(kind: FamilyKind) -> CurveKind {
    kind.curve().unwrap_or(CurveKind::Gamma0)
}
