use super::growth::{fit_growth, median, ratio_row, GrowthFit, RatioRow, MIN_FIT_N};
use super::witness::SPIKE_FACTOR;
use crate::error::{Error, Result};
use crate::lebesgue::{lebesgue_constant, LebesgueOptions, LebesgueReport};
use crate::mz::{worst_mz_ratio_with, CollisionTable, MZReport, WitnessSet};
use crate::nodes::{build_family, fmt_f64, FamilyKind, FeketeOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// File names written by [`run_sweep`] inside the output directory.
pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_JSON: &str = "summary.json";

pub const SWEEP_COLUMNS: [&str; 17] = [
    "config_hash",
    "n",
    "family",
    "source",
    "L",
    "argmax_param",
    "samples_used",
    "refinement_gap",
    "L_over_ln2n",
    "L_over_lnn",
    "spike",
    "mz_ratio",
    "mz_witness",
    "c0",
    "theta_J_gap",
    "warnings",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MzSweepOptions {
    pub p: f64,
    #[serde(default = "default_witness")]
    pub witness: WitnessSet,
}

fn default_witness() -> WitnessSet {
    WitnessSet::Both
}

fn default_collision_n_max() -> usize {
    20_000
}

fn default_out_dir() -> PathBuf {
    PathBuf::from(".")
}

/// Sweep settings. Loadable from TOML:
///
/// ```toml
/// family = "fejer-gamma0"
/// n_list = [64, 128, 256]
/// with_collisions = 6        # optional
/// collision_n_max = 20000
/// out_dir = "out"
/// seed = 0
///
/// [lebesgue]
/// samples_per_gap = 40
/// refine_tol = 1e-9
///
/// [mz]                       # optional
/// p = 2.0
/// witness = "lagrange"       # lagrange | random | both
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: FamilyKind,
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub lebesgue: LebesgueOptions,
    #[serde(default)]
    pub mz: Option<MzSweepOptions>,
    /// Merge the collision degrees `n(j)`, `j <= with_collisions`, into the
    /// degree list.
    #[serde(default)]
    pub with_collisions: Option<usize>,
    #[serde(default = "default_collision_n_max")]
    pub collision_n_max: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Seeds the Fekete optimizer and the random MZ witnesses.
    #[serde(default)]
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(family: FamilyKind, n_list: Vec<usize>) -> Self {
        Self {
            family,
            n_list,
            lebesgue: LebesgueOptions::default(),
            mz: None,
            with_collisions: None,
            collision_n_max: default_collision_n_max(),
            out_dir: default_out_dir(),
            seed: 0,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.family == FamilyKind::Custom {
            return Err(Error::Invalid("sweeps need a generated family".into()));
        }
        if self.n_list.is_empty() {
            return Err(Error::Invalid("n_list is empty".into()));
        }
        if let Some(w) = self.n_list.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!(
                "n_list must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if self.lebesgue.samples_per_gap == 0
            || self.lebesgue.refine_tol.is_nan()
            || self.lebesgue.refine_tol <= 0.0
        {
            return Err(Error::Invalid("lebesgue options must be positive".into()));
        }
        if let Some(m) = &self.mz {
            if !(m.p.is_finite() && m.p > 0.0) {
                return Err(Error::Invalid(format!("p must be positive, got {}", m.p)));
            }
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the JSON form, with the
    /// output directory blanked.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out_dir = PathBuf::new();
        let json = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&json))[..16].to_string()
    }

    /// The degree list with collision degrees merged in, tagged with where
    /// each entry came from.
    pub fn degrees(&self) -> Vec<(usize, &'static str)> {
        let mut out: Vec<(usize, &'static str)> = self.n_list.iter().map(|&n| (n, "grid")).collect();
        if let Some(j_max) = self.with_collisions.filter(|&j| j > 0) {
            let table = CollisionTable::new(self.collision_n_max);
            for o in (1..=j_max).filter_map(|j| table.order(j)) {
                match out.iter_mut().find(|(n, _)| *n == o.n) {
                    Some(e) => e.1 = "grid+collision",
                    None => out.push((o.n, "collision")),
                }
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub source: String,
    pub lebesgue: Option<LebesgueReport>,
    pub ratios: Option<RatioRow>,
    pub spike: bool,
    pub mz: Option<MZReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config_hash: String,
    pub family: FamilyKind,
    pub degrees: Vec<usize>,
    pub fit: Option<GrowthFit>,
    pub fit_error: Option<String>,
    /// Median of `L / ln² n` over the rows taken from `n_list`.
    pub median_ratio: Option<f64>,
    pub spike_threshold: Option<f64>,
    pub spikes: Vec<usize>,
    /// Smallest `L / ln² n` over non-spike rows with `n >= 16`.
    pub c1: Option<f64>,
    pub failed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

fn sweep_one(config: &SweepConfig, n: usize) -> Result<(LebesgueReport, Option<MZReport>)> {
    let fekete = FeketeOptions {
        seed: config.seed,
        ..FeketeOptions::default()
    };
    let family = build_family(config.family, n, &fekete)?;
    let report = lebesgue_constant(&family, &config.lebesgue)?;
    let mz = match &config.mz {
        Some(m) => Some(worst_mz_ratio_with(&family, n, m.p, m.witness, config.seed)?),
        None => None,
    };
    Ok((report, mz))
}

/// Computes every row without touching the file system.
pub fn compute_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let degrees = config.degrees();
    let mut rows: Vec<SweepRow> = degrees
        .par_iter()
        .map(|&(n, source)| {
            let (lebesgue, ratios, mz, error) = match sweep_one(config, n) {
                Ok((r, mz)) => {
                    let ratios = ratio_row(n, r.l);
                    (Some(r), Some(ratios), mz, None)
                }
                Err(e) => (None, None, None, Some(e.to_string())),
            };
            SweepRow {
                n,
                source: source.to_string(),
                lebesgue,
                ratios,
                spike: false,
                mz,
                error,
            }
        })
        .collect();

    let grid_ratios: Vec<f64> = rows
        .iter()
        .filter(|r| r.source != "collision")
        .filter_map(|r| r.ratios.and_then(|q| q.over_ln2))
        .collect();
    let median_ratio = median(&grid_ratios);
    let threshold = median_ratio.map(|m| SPIKE_FACTOR * m);
    if let Some(t) = threshold {
        for r in &mut rows {
            r.spike = r.ratios.and_then(|q| q.over_ln2).is_some_and(|v| v > t);
        }
    }
    let fit_rows: Vec<(usize, f64)> = rows
        .iter()
        .filter(|r| r.source != "collision" && !r.spike)
        .filter_map(|r| r.lebesgue.as_ref().map(|l| (r.n, l.l)))
        .collect();
    let (fit, fit_error) = match fit_growth(&fit_rows) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let c1 = rows
        .iter()
        .filter(|r| !r.spike && r.n >= MIN_FIT_N)
        .filter_map(|r| r.ratios.and_then(|q| q.over_ln2))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let summary = SweepSummary {
        config_hash: config.hash(),
        family: config.family,
        degrees: degrees.iter().map(|d| d.0).collect(),
        fit,
        fit_error,
        median_ratio,
        spike_threshold: threshold,
        spikes: rows.iter().filter(|r| r.spike).map(|r| r.n).collect(),
        c1,
        failed: rows.iter().filter(|r| r.error.is_some()).map(|r| r.n).collect(),
    };
    Ok(SweepOutcome {
        config: config.clone(),
        rows,
        summary,
    })
}

impl SweepOutcome {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(SWEEP_COLUMNS)?;
        let hash = &self.summary.config_hash;
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        for r in &self.rows {
            let l = r.lebesgue.as_ref();
            let witness =
                r.mz.as_ref()
                    .map(|m| serde_json::to_string(&m.witness))
                    .transpose()?
                    .unwrap_or_default();
            w.write_record([
                hash.clone(),
                r.n.to_string(),
                self.config.family.to_string(),
                r.source.clone(),
                opt(l.map(|l| l.l)),
                opt(l.map(|l| l.argmax_param)),
                l.map(|l| l.samples_used.to_string()).unwrap_or_default(),
                opt(l.map(|l| l.refinement_gap)),
                opt(r.ratios.and_then(|q| q.over_ln2)),
                opt(r.ratios.and_then(|q| q.over_ln)),
                u8::from(r.spike).to_string(),
                opt(r.mz.as_ref().map(|m| m.ratio)),
                witness,
                opt(r.mz.as_ref().and_then(|m| m.c0)),
                opt(r.mz.as_ref().and_then(|m| m.theta_j_gap)),
                l.map(|l| l.warnings.join("; ")).unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.summary)?;
        out.write_all(b"\n")?;
        Ok(())
    }
}

/// Runs the sweep and writes [`SWEEP_CSV`] and [`SWEEP_JSON`] into the
/// configured output directory.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let outcome = compute_sweep(config)?;
    std::fs::create_dir_all(&config.out_dir)?;
    outcome.write_csv(BufWriter::new(File::create(config.out_dir.join(SWEEP_CSV))?))?;
    outcome.write_json(BufWriter::new(File::create(config.out_dir.join(SWEEP_JSON))?))?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SweepConfig::new(FamilyKind::Chebyshev, vec![4, 4])
            .validate()
            .is_err());
        assert!(SweepConfig::new(FamilyKind::Chebyshev, vec![])
            .validate()
            .is_err());
        assert!(SweepConfig::new(FamilyKind::Custom, vec![4]).validate().is_err());
        assert!(SweepConfig::new(FamilyKind::Chebyshev, vec![4, 8])
            .validate()
            .is_ok());
    }

    #[test]
    fn toml_round_trip() {
        let c = SweepConfig::from_toml(
            "family = \"adjusted-fejer-gamma0\"\nn_list = [16, 32]\nseed = 3\n[mz]\np = 2.0\nwitness = \"lagrange\"\n",
        )
        .unwrap();
        assert_eq!(c.family, FamilyKind::AdjustedFejerGamma0);
        assert_eq!(c.lebesgue, LebesgueOptions::default());
        assert_eq!(c.mz.unwrap().witness, WitnessSet::Lagrange);
        assert!(SweepConfig::from_toml("family = \"chebyshev\"\nn_list = [4]\nbogus = 1\n").is_err());
        let mut d = c.clone();
        d.out_dir = PathBuf::from("elsewhere");
        assert_eq!(c.hash(), d.hash());
        d.seed = 4;
        assert_ne!(c.hash(), d.hash());
        assert_eq!(c.hash().len(), 16);
    }

    #[test]
    fn collision_degrees_are_merged() {
        let mut c = SweepConfig::new(FamilyKind::FejerGamma0, vec![32, 46, 64]);
        c.with_collisions = Some(5);
        let d = c.degrees();
        assert!(d.contains(&(46, "grid+collision")));
        assert!(d.iter().any(|e| e.0 == 32));
        assert!(d.iter().filter(|e| e.1 == "collision").count() >= 1);
        assert!(d.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn failures_stay_in_their_row() {
        let c = SweepConfig::new(FamilyKind::FeketeCircle, vec![3, 40]);
        let o = compute_sweep(&c).unwrap();
        assert!(o.rows[0].error.is_none());
        assert!(o.rows[1].error.is_some());
        assert_eq!(o.summary.failed, vec![40]);
        let mut buf = Vec::new();
        o.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("config_hash,n,family,source,L,"));
        assert_eq!(text.lines().count(), 3);
    }
}
