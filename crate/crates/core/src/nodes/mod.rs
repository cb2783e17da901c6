//! Interpolation node families.

mod adjust;
mod csv_io;
mod fekete;

pub use adjust::{adjust_thetas, adjusted_fejer_nodes, AdjustmentRecord};
pub(crate) use csv_io::fmt_f64;
pub use csv_io::{read_nodes_csv, write_nodes_csv};
pub use fekete::{fekete_nodes, log_pair_product, FeketeOptions, FeketeResult};

use crate::error::{Error, Result};
use crate::geometry::{boundary_point, canonical_parameter, wrap_angle, Curve, CurveKind};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Which construction produced a node family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Chebyshev,
    Equispaced,
    FejerGamma0,
    AdjustedFejerGamma0,
    FeketeCircle,
    FeketeGamma0,
    Custom,
}

impl FamilyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Chebyshev => "chebyshev",
            FamilyKind::Equispaced => "equispaced",
            FamilyKind::FejerGamma0 => "fejer-gamma0",
            FamilyKind::AdjustedFejerGamma0 => "adjusted-fejer-gamma0",
            FamilyKind::FeketeCircle => "fekete-circle",
            FamilyKind::FeketeGamma0 => "fekete-gamma0",
            FamilyKind::Custom => "custom",
        }
    }

    /// Curve the family lives on.
    pub fn curve(&self) -> Option<CurveKind> {
        match self {
            FamilyKind::Chebyshev | FamilyKind::Equispaced => Some(CurveKind::Interval),
            FamilyKind::FejerGamma0 | FamilyKind::AdjustedFejerGamma0 | FamilyKind::FeketeGamma0 => {
                Some(CurveKind::Gamma0)
            }
            FamilyKind::FeketeCircle => Some(CurveKind::UnitCircle),
            FamilyKind::Custom => None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "chebyshev" => FamilyKind::Chebyshev,
            "equispaced" => FamilyKind::Equispaced,
            "fejer-gamma0" => FamilyKind::FejerGamma0,
            "adjusted-fejer-gamma0" => FamilyKind::AdjustedFejerGamma0,
            "fekete-circle" => FamilyKind::FeketeCircle,
            "fekete-gamma0" => FamilyKind::FeketeGamma0,
            "custom" => FamilyKind::Custom,
            other => return Err(Error::Invalid(format!("unknown family '{other}'"))),
        })
    }
}

/// Relative threshold (against the family diameter) below which two nodes
/// are flagged as a near collision.
pub const NEAR_COLLISION_REL: f64 = 1e-13;

/// An ordered set of `n + 1` distinct interpolation nodes.
#[derive(Debug, Clone)]
pub struct NodeFamily {
    pub n: usize,
    pub kind: FamilyKind,
    pub curve: CurveKind,
    /// Provenance parameters; `points[k]` is the image of `thetas[k]`.
    pub thetas: Option<Vec<f64>>,
    pub points: Vec<Complex64>,
    pub adjustment: Option<AdjustmentRecord>,
    /// Set when two nodes are closer than `1e-13 * diameter`.
    pub near_collision: bool,
    pub min_distance: f64,
}

impl NodeFamily {
    /// Assembles a family and derives its collision diagnostics. Exactly
    /// coincident nodes are rejected.
    pub fn new(
        kind: FamilyKind,
        curve: CurveKind,
        points: Vec<Complex64>,
        thetas: Option<Vec<f64>>,
        adjustment: Option<AdjustmentRecord>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("a node family needs at least one node".into()));
        }
        if let Some(t) = &thetas {
            if t.len() != points.len() {
                return Err(Error::LengthMismatch {
                    expected: points.len(),
                    got: t.len(),
                });
            }
        }
        let (min_distance, pair) = closest_pair(&points);
        if min_distance == 0.0 {
            let (i, j) = pair.unwrap_or((0, 0));
            return Err(Error::DuplicateNodes(i.min(j), i.max(j)));
        }
        let near_collision = min_distance < NEAR_COLLISION_REL * bounding_diameter(&points);
        Ok(Self {
            n: points.len() - 1,
            kind,
            curve,
            thetas,
            points,
            adjustment,
            near_collision,
            min_distance,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn curve(&self) -> Curve {
        Curve::new(self.curve)
    }

    /// Node parameters on the curve (folded angle on the arc, polar angle on
    /// the circle, abscissa on the interval).
    pub fn curve_parameters(&self) -> Result<Vec<f64>> {
        match (self.curve, &self.thetas) {
            (CurveKind::Gamma0, Some(t)) => Ok(t.iter().map(|&x| canonical_parameter(x)).collect()),
            (CurveKind::UnitCircle, Some(t)) => Ok(t.iter().map(|&x| wrap_angle(x)).collect()),
            _ => {
                let c = self.curve();
                self.points.iter().map(|&z| c.parameter_of(z)).collect()
            }
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.near_collision {
            w.push(format!(
                "near collision: minimum node distance {:e}",
                self.min_distance
            ));
        }
        w
    }
}

/// Image of a provenance angle on the given curve.
pub fn image_of_theta(curve: CurveKind, theta: f64) -> Complex64 {
    match curve {
        CurveKind::Gamma0 => boundary_point(theta),
        CurveKind::UnitCircle => Complex64::from_polar(1.0, theta),
        CurveKind::Interval => Complex64::new(theta.cos(), 0.0),
    }
}

/// Closest pair (distance and indices) by a sweep over the real parts.
pub fn closest_pair(points: &[Complex64]) -> (f64, Option<(usize, usize)>) {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].re.total_cmp(&points[b].re));
    let mut best = f64::INFINITY;
    let mut pair = None;
    for a in 0..idx.len() {
        let p = points[idx[a]];
        for &j in &idx[a + 1..] {
            let q = points[j];
            if q.re - p.re >= best {
                break;
            }
            let d = (q - p).norm();
            if d < best {
                best = d;
                pair = Some((idx[a], j));
            }
        }
    }
    (best, pair)
}

fn bounding_diameter(points: &[Complex64]) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt()
}

/// Chebyshev points `cos((2j+1)π / (2(n+1)))`, descending.
pub fn chebyshev_nodes(n: usize) -> NodeFamily {
    let thetas: Vec<f64> = (0..=n)
        .map(|j| (2 * j + 1) as f64 * PI / (2.0 * (n as f64 + 1.0)))
        .collect();
    let points = thetas.iter().map(|t| Complex64::new(t.cos(), 0.0)).collect();
    NodeFamily::new(
        FamilyKind::Chebyshev,
        CurveKind::Interval,
        points,
        Some(thetas),
        None,
    )
    .expect("Chebyshev points are distinct")
}

/// Equally spaced points `-1 + 2j/n`.
pub fn equispaced_nodes(n: usize) -> Result<NodeFamily> {
    if n == 0 {
        return Err(Error::Invalid("equispaced nodes need n >= 1".into()));
    }
    let points = (0..=n)
        .map(|j| Complex64::new(-1.0 + 2.0 * j as f64 / n as f64, 0.0))
        .collect();
    NodeFamily::new(FamilyKind::Equispaced, CurveKind::Interval, points, None, None)
}

/// Symmetric angle grid: `2kπ/(n+1)` (even `n`) or `(2k+1)π/(n+1)` (odd `n`)
/// for `k <= ⌊n/2⌋`, mirrored as `θ_k = -θ_{2⌊n/2⌋+1-k}` above.
pub fn fejer_thetas(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Invalid("Fejér grid needs n >= 1".into()));
    }
    let half = n / 2;
    let np1 = n as f64 + 1.0;
    let mut thetas = Vec::with_capacity(n + 1);
    for k in 0..=half {
        let num = if n.is_multiple_of(2) { 2 * k } else { 2 * k + 1 };
        thetas.push(num as f64 * PI / np1);
    }
    for k in half + 1..=n {
        let mirror = thetas[2 * half + 1 - k];
        thetas.push(-mirror);
    }
    Ok(thetas)
}

/// Positive-side grid angle `θ_{n,k}` for `k <= ⌊n/2⌋`.
pub fn fejer_theta(n: usize, k: usize) -> f64 {
    let num = if n.is_multiple_of(2) { 2 * k } else { 2 * k + 1 };
    num as f64 * PI / (n as f64 + 1.0)
}

/// Rotated grid `2kπ/(n+1) + rotation`, wrapped to `(-π, π]`.
pub fn fejer_thetas_rotated(n: usize, rotation: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Invalid("Fejér grid needs n >= 1".into()));
    }
    Ok((0..=n)
        .map(|k| wrap_angle(2.0 * PI * k as f64 / (n as f64 + 1.0) + rotation))
        .collect())
}

/// Fejér points `psi0(e^{iθ_{n,k}})` on the arc.
pub fn fejer_nodes_gamma0(n: usize) -> Result<NodeFamily> {
    fejer_family(fejer_thetas(n)?)
}

/// Fejér points for an explicitly rotated grid.
pub fn fejer_nodes_gamma0_rotated(n: usize, rotation: f64) -> Result<NodeFamily> {
    fejer_family(fejer_thetas_rotated(n, rotation)?)
}

fn fejer_family(thetas: Vec<f64>) -> Result<NodeFamily> {
    let points = thetas.iter().map(|&t| boundary_point(t)).collect();
    NodeFamily::new(
        FamilyKind::FejerGamma0,
        CurveKind::Gamma0,
        points,
        Some(thetas),
        None,
    )
}

/// Builds one of the generated families by kind. Fekete families use the
/// given optimizer options.
pub fn build_family(kind: FamilyKind, n: usize, fekete: &FeketeOptions) -> Result<NodeFamily> {
    match kind {
        FamilyKind::Chebyshev => Ok(chebyshev_nodes(n)),
        FamilyKind::Equispaced => equispaced_nodes(n),
        FamilyKind::FejerGamma0 => fejer_nodes_gamma0(n),
        FamilyKind::AdjustedFejerGamma0 => adjusted_fejer_nodes(n),
        FamilyKind::FeketeCircle => Ok(fekete_nodes(CurveKind::UnitCircle, n, fekete)?.family),
        FamilyKind::FeketeGamma0 => Ok(fekete_nodes(CurveKind::Gamma0, n, fekete)?.family),
        FamilyKind::Custom => Err(Error::Invalid(
            "custom families are read from files, not generated".into(),
        )),
    }
}
