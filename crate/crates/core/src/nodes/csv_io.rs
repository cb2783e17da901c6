use super::{image_of_theta, FamilyKind, NodeFamily};
use crate::error::{Error, Result};
use crate::geometry::{is_on_arc, CurveKind};
use num_complex::Complex64;
use std::io::{Read, Write};

/// Prints a float with 17 significant digits.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `k,theta,re,im,adjusted_flag`, one row per node.
pub fn write_nodes_csv<W: Write>(family: &NodeFamily, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["k", "theta", "re", "im", "adjusted_flag"])?;
    for (k, p) in family.points.iter().enumerate() {
        let theta = family.thetas.as_ref().map(|t| fmt_f64(t[k])).unwrap_or_default();
        let adjusted = family.adjustment.as_ref().is_some_and(|a| a.is_adjusted(k));
        w.write_record([
            k.to_string(),
            theta,
            fmt_f64(p.re),
            fmt_f64(p.im),
            u8::from(adjusted).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(field: &str, row: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("row {row}: cannot parse '{field}' as a number")))
}

fn infer_curve(points: &[Complex64]) -> CurveKind {
    if points.iter().all(|p| p.im == 0.0 && p.re.abs() <= 1.0) {
        CurveKind::Interval
    } else if points.iter().all(|p| (p.norm() - 1.0).abs() <= 1e-9) {
        CurveKind::UnitCircle
    } else {
        CurveKind::Gamma0
    }
}

/// Reads a node file written by [`write_nodes_csv`]. The curve is inferred
/// when not given; every point must lie on it, points must be distinct, and
/// any `theta` column must map onto its point.
pub fn read_nodes_csv<R: Read>(input: R, curve: Option<CurveKind>) -> Result<NodeFamily> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(re_col), Some(im_col)) = (col("re"), col("im")) else {
        return Err(Error::Invalid("node file needs 're' and 'im' columns".into()));
    };
    let theta_col = col("theta");

    let mut points = Vec::new();
    let mut thetas = Vec::new();
    let mut all_thetas = theta_col.is_some();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        points.push(Complex64::new(
            parse_f64(field(re_col), row + 1)?,
            parse_f64(field(im_col), row + 1)?,
        ));
        match theta_col.map(field) {
            Some(s) if !s.is_empty() => thetas.push(parse_f64(s, row + 1)?),
            _ => all_thetas = false,
        }
    }
    if points.is_empty() {
        return Err(Error::Invalid("node file has no rows".into()));
    }

    let curve = curve.unwrap_or_else(|| infer_curve(&points));
    for (k, &p) in points.iter().enumerate() {
        let ok = match curve {
            CurveKind::Gamma0 => is_on_arc(p),
            CurveKind::UnitCircle => (p.norm() - 1.0).abs() <= 1e-9,
            CurveKind::Interval => p.im.abs() <= 1e-12 && p.re.abs() <= 1.0 + 1e-12,
        };
        if !ok {
            return Err(Error::Invalid(format!("node {k} = {p} is not on the curve")));
        }
    }
    let thetas = if all_thetas {
        for (k, (&t, &p)) in thetas.iter().zip(&points).enumerate() {
            if (image_of_theta(curve, t) - p).norm() > 1e-9 * (1.0 + p.norm()) {
                return Err(Error::Invalid(format!("node {k}: theta {t} does not map to {p}")));
            }
        }
        Some(thetas)
    } else {
        None
    };
    NodeFamily::new(FamilyKind::Custom, curve, points, thetas, None)
}
