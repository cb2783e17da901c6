use super::{arc_parameter_of, boundary_point, segment_length, upper_direction, END_PARAM};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The supported curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Gamma0,
    UnitCircle,
    Interval,
}

/// One smooth piece of a curve, parameterized over `param`.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub param: (f64, f64),
    pub point: fn(f64) -> Complex64,
    pub speed: fn(f64) -> f64,
}

fn upper_segment(s: f64) -> Complex64 {
    upper_direction() * s
}

fn lower_segment(s: f64) -> Complex64 {
    upper_direction().conj() * s
}

fn circle_point(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn interval_point(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn unit_speed(_: f64) -> f64 {
    1.0
}

/// A piecewise-smooth curve with two parameterizations:
///
/// * `segments`: arclength pieces, used for contour integrals;
/// * the node parameter (`point_at` / `parameter_of`): an injective
///   parameter over `parameter_range`, used to order nodes and to search for
///   maxima. For the arc it is the folded angle `θ ∈ [-2π/3, 2π/3]`, for the
///   circle the polar angle, for the interval `x` itself.
#[derive(Debug, Clone)]
pub struct Curve {
    pub kind: CurveKind,
    pub segments: Vec<Segment>,
    /// Node-parameter values where the tangent jumps.
    pub corners: Vec<f64>,
}

impl Curve {
    pub fn new(kind: CurveKind) -> Self {
        match kind {
            CurveKind::Gamma0 => Self {
                kind,
                segments: vec![
                    Segment {
                        param: (0.0, segment_length()),
                        point: upper_segment,
                        speed: unit_speed,
                    },
                    Segment {
                        param: (0.0, segment_length()),
                        point: lower_segment,
                        speed: unit_speed,
                    },
                ],
                corners: vec![0.0],
            },
            CurveKind::UnitCircle => Self {
                kind,
                segments: vec![Segment {
                    param: (-PI, PI),
                    point: circle_point,
                    speed: unit_speed,
                }],
                corners: vec![],
            },
            CurveKind::Interval => Self {
                kind,
                segments: vec![Segment {
                    param: (-1.0, 1.0),
                    point: interval_point,
                    speed: unit_speed,
                }],
                corners: vec![],
            },
        }
    }

    pub fn gamma0() -> Self {
        Self::new(CurveKind::Gamma0)
    }

    pub fn unit_circle() -> Self {
        Self::new(CurveKind::UnitCircle)
    }

    pub fn interval() -> Self {
        Self::new(CurveKind::Interval)
    }

    /// Total arclength.
    pub fn length(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| (s.param.1 - s.param.0) * (s.speed)(0.5 * (s.param.0 + s.param.1)))
            .sum()
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        match self.kind {
            CurveKind::Gamma0 => (-END_PARAM, END_PARAM),
            CurveKind::UnitCircle => (-PI, PI),
            CurveKind::Interval => (-1.0, 1.0),
        }
    }

    /// Closed curves wrap around their parameter range.
    pub fn is_periodic(&self) -> bool {
        self.kind == CurveKind::UnitCircle
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        match self.kind {
            CurveKind::Gamma0 => boundary_point(t),
            CurveKind::UnitCircle => circle_point(t),
            CurveKind::Interval => interval_point(t),
        }
    }

    /// Node parameter of a point on the curve.
    pub fn parameter_of(&self, z: Complex64) -> Result<f64> {
        match self.kind {
            CurveKind::Gamma0 => arc_parameter_of(z),
            CurveKind::UnitCircle => {
                if (z.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::Invalid(format!("{z} is not on the unit circle")));
                }
                Ok(z.arg())
            }
            CurveKind::Interval => {
                if z.im.abs() > 1e-12 || z.re.abs() > 1.0 + 1e-12 {
                    return Err(Error::Invalid(format!("{z} is not on [-1, 1]")));
                }
                Ok(z.re.clamp(-1.0, 1.0))
            }
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.parameter_of(z).is_ok()
    }
}
