use super::growth::{log_log_slope, median, ratio_row};
use crate::error::{Error, Result};
use crate::geometry::boundary_point;
use crate::lebesgue::{lebesgue_constant_with, BarycentricBasis, LebesgueOptions};
use crate::mz::{CollisionOrder, CollisionTable};
use crate::nodes::{fejer_nodes_gamma0, fejer_theta, fmt_f64, FamilyKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Rows whose `L / ln² n` exceeds this multiple of the reference median are
/// flagged as spikes.
pub const SPIKE_FACTOR: f64 = 5.0;

/// Degrees used for the reference median of raw grid nodes.
pub const REFERENCE_DEGREES: [usize; 6] = [64, 128, 256, 512, 1024, 2048];

/// Lebesgue function of the raw grid nodes at `t_0 = (θ_{n,0} + θ_{n,1})/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointWitness {
    pub n: usize,
    pub t0: f64,
    pub lambda: f64,
    pub lambda_over_ln2: f64,
    pub omega_abs: f64,
}

pub fn run_midpoint_witness(n: usize) -> Result<MidpointWitness> {
    if n < 12 || n % 2 == 1 {
        return Err(Error::Invalid(format!("witness needs an even n >= 12, got {n}")));
    }
    let family = fejer_nodes_gamma0(n)?;
    let t0 = 0.5 * (fejer_theta(n, 0) + fejer_theta(n, 1));
    let z0 = boundary_point(t0);
    let basis = BarycentricBasis::from_family(&family);
    let lambda = basis.lebesgue(z0);
    let ln = (n as f64).ln();
    Ok(MidpointWitness {
        n,
        t0,
        lambda,
        lambda_over_ln2: lambda / (ln * ln),
        omega_abs: basis.omega(z0).abs(),
    })
}

/// Lebesgue constants of the raw grid nodes at `degrees`.
pub fn raw_lebesgue_constants(degrees: &[usize], opts: &LebesgueOptions) -> Result<Vec<(usize, f64)>> {
    degrees
        .iter()
        .map(|&n| {
            let f = fejer_nodes_gamma0(n)?;
            let r = crate::lebesgue::lebesgue_constant(&f, opts)?;
            Ok((n, r.l))
        })
        .collect()
}

/// Median of `L / ln² n` over [`REFERENCE_DEGREES`].
pub fn reference_median(opts: &LebesgueOptions) -> Result<f64> {
    let rows = raw_lebesgue_constants(&REFERENCE_DEGREES, opts)?;
    let ratios: Vec<f64> = rows
        .iter()
        .filter_map(|&(n, l)| ratio_row(n, l).over_ln2)
        .collect();
    median(&ratios).ok_or_else(|| Error::Invalid("empty reference set".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionScanOptions {
    pub j_max: usize,
    pub n_max: usize,
    pub lebesgue: LebesgueOptions,
    /// Lebesgue constants are only computed for collision degrees up to
    /// this value.
    pub lebesgue_n_max: usize,
    /// Reference median of `L / ln² n`; computed from
    /// [`REFERENCE_DEGREES`] when absent.
    pub reference_median: Option<f64>,
}

impl CollisionScanOptions {
    pub fn new(j_max: usize, n_max: usize) -> Self {
        Self {
            j_max,
            n_max,
            lebesgue: LebesgueOptions::default(),
            lebesgue_n_max: usize::MAX,
            reference_median: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionRow {
    pub j: usize,
    pub n: usize,
    pub scaled_gap: f64,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub l_over_ln2: Option<f64>,
    /// `Λ` at `psi0(e^{i(θ_{n,j} + 1/n)})`.
    pub witness_lambda: f64,
    pub spike: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionScan {
    pub rows: Vec<CollisionRow>,
    pub reference_median: f64,
    /// Largest scaled gap over all rows.
    pub c2: f64,
    /// Slope of `ln Λ(z_1)` against `ln n(j)` over rows with `j >= 2`.
    pub witness_exponent: Option<f64>,
}

impl CollisionScan {
    pub fn spikes(&self) -> impl Iterator<Item = &CollisionRow> {
        self.rows.iter().filter(|r| r.spike)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record([
            "j",
            "n",
            "scaled_gap",
            "L",
            "L_over_ln2n",
            "witness_lambda",
            "spike",
        ])?;
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.j.to_string(),
                r.n.to_string(),
                fmt_f64(r.scaled_gap),
                opt(r.l),
                opt(r.l_over_ln2),
                fmt_f64(r.witness_lambda),
                u8::from(r.spike).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Collision degrees `n(j)` for `j = 1..=j_max`, with the Lebesgue
/// constant of the raw grid nodes at each and the witness value `Λ(z_1)`.
pub fn run_collision_scan(opts: &CollisionScanOptions) -> Result<CollisionScan> {
    if opts.j_max == 0 || opts.n_max < opts.j_max {
        return Err(Error::Invalid("collision scan needs 1 <= j_max <= n_max".into()));
    }
    let table = CollisionTable::new(opts.n_max);
    let orders: Vec<CollisionOrder> = (1..=opts.j_max).filter_map(|j| table.order(j)).collect();
    let reference = match opts.reference_median {
        Some(m) => m,
        None => reference_median(&opts.lebesgue)?,
    };
    let rows: Vec<CollisionRow> = orders
        .par_iter()
        .map(|o| collision_row(o, opts, reference))
        .collect::<Result<_>>()?;
    let c2 = rows.iter().map(|r| r.scaled_gap).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.j >= 2)
        .map(|r| (r.n as f64, r.witness_lambda))
        .collect();
    Ok(CollisionScan {
        rows,
        reference_median: reference,
        c2,
        witness_exponent: log_log_slope(&pts).ok(),
    })
}

fn collision_row(o: &CollisionOrder, opts: &CollisionScanOptions, reference: f64) -> Result<CollisionRow> {
    let family = fejer_nodes_gamma0(o.n)?;
    let basis = BarycentricBasis::from_family(&family);
    let z1 = boundary_point(fejer_theta(o.n, o.j) + 1.0 / o.n as f64);
    let witness_lambda = basis.lebesgue(z1);
    let l = if o.n <= opts.lebesgue_n_max {
        let params = family.curve_parameters()?;
        let r = lebesgue_constant_with(
            &basis,
            &family.curve(),
            &params,
            FamilyKind::FejerGamma0,
            Vec::new(),
            &opts.lebesgue,
        )?;
        Some(r.l)
    } else {
        None
    };
    let l_over_ln2 = l.and_then(|l| ratio_row(o.n, l).over_ln2);
    Ok(CollisionRow {
        j: o.j,
        n: o.n,
        scaled_gap: o.scaled_gap,
        l,
        l_over_ln2,
        witness_lambda,
        spike: l_over_ln2.is_some_and(|r| r > SPIKE_FACTOR * reference),
    })
}
