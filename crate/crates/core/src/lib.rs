//! Numerical laboratory for polynomial interpolation on an L-shaped arc.
//!
//! The crate builds interpolation node families (Chebyshev, equispaced,
//! Fejér and adjusted Fejér points on the arc, Fekete points), evaluates
//! Lagrange bases and Lebesgue constants in log space, measures modified
//! Marcinkiewicz-Zygmund ratios, and runs the point-charge experiments on the
//! unit disk. The `arc-lebesgue` binary drives sweeps and writes CSV/JSON.

pub mod electrostatics;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod lebesgue;
pub mod logspace;
pub mod mz;
pub mod nodes;
pub mod numeric;

pub use error::{Error, Result};
pub use geometry::{Curve, CurveKind};
pub use lebesgue::{BarycentricBasis, LebesgueOptions, LebesgueReport};
pub use logspace::LogComplex;
pub use nodes::{FamilyKind, NodeFamily};

pub use num_complex::Complex64;
