//! Sweeps, growth fits, witness evaluations and collision scans, plus the
//! CSV/JSON writers used by the command-line driver.

mod growth;
mod sweep;
mod witness;

pub use growth::*;
pub use sweep::*;
pub use witness::*;

use crate::error::Result;
use crate::geometry::LevelCurve;
use crate::nodes::fmt_f64;
use std::io::Write;

/// Samples of the level curve `Γ_m` as CSV with columns `m,phi,re,im`.
pub fn write_level_curve_csv<W: Write>(m: usize, samples: usize, out: W) -> Result<()> {
    let curve = LevelCurve::new(m, samples);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["m", "phi", "re", "im"])?;
    for (phi, z) in &curve.samples {
        w.write_record([m.to_string(), fmt_f64(*phi), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}
