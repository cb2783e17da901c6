use crate::error::{Error, Result};
use crate::numeric::least_squares;
use serde::{Deserialize, Serialize};

/// Rows with `n` below this are kept in the ratio table but left out of
/// the least-squares fit.
pub const MIN_FIT_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub over_ln2: Option<f64>,
    pub over_ln: Option<f64>,
}

/// `L ≈ a + b ln n + c ln² n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual_rms: f64,
    pub fitted_rows: usize,
    pub ratios: Vec<RatioRow>,
}

impl GrowthFit {
    pub fn predict(&self, n: usize) -> f64 {
        let l = (n as f64).ln();
        self.a + self.b * l + self.c * l * l
    }
}

/// `L / ln² n` and `L / ln n`, undefined for `n <= 1`.
pub fn ratio_row(n: usize, l: f64) -> RatioRow {
    let ln = (n as f64).ln();
    let ok = n > 1;
    RatioRow {
        n,
        l,
        over_ln2: ok.then(|| l / (ln * ln)),
        over_ln: ok.then(|| l / ln),
    }
}

/// Least-squares fit in the basis `{1, ln n, ln² n}` over rows with
/// `n >= 16`.
pub fn fit_growth(rows: &[(usize, f64)]) -> Result<GrowthFit> {
    let mut used: Vec<(usize, f64)> = rows
        .iter()
        .copied()
        .filter(|&(n, l)| n >= MIN_FIT_N && l.is_finite())
        .collect();
    used.sort_by_key(|r| r.0);
    used.dedup_by_key(|r| r.0);
    if used.len() < 4 {
        return Err(Error::RankDeficient(format!(
            "need at least 4 distinct n >= {MIN_FIT_N}, got {}",
            used.len()
        )));
    }
    let design: Vec<Vec<f64>> = used
        .iter()
        .map(|&(n, _)| {
            let l = (n as f64).ln();
            vec![1.0, l, l * l]
        })
        .collect();
    let rhs: Vec<f64> = used.iter().map(|r| r.1).collect();
    let coef = least_squares(&design, &rhs)
        .ok_or_else(|| Error::RankDeficient("normal equations are singular".into()))?;
    let residual_rms = (design
        .iter()
        .zip(&rhs)
        .map(|(row, y)| {
            let f: f64 = row.iter().zip(&coef).map(|(x, c)| x * c).sum();
            (f - y).powi(2)
        })
        .sum::<f64>()
        / used.len() as f64)
        .sqrt();
    Ok(GrowthFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        residual_rms,
        fitted_rows: used.len(),
        ratios: rows.iter().map(|&(n, l)| ratio_row(n, l)).collect(),
    })
}

/// Slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::RankDeficient(
            "need two positive points for a slope".into(),
        ));
    }
    let design: Vec<Vec<f64>> = pts.iter().map(|&(x, _)| vec![1.0, x]).collect();
    let rhs: Vec<f64> = pts.iter().map(|p| p.1).collect();
    least_squares(&design, &rhs)
        .map(|c| c[1])
        .ok_or_else(|| Error::RankDeficient("all abscissae coincide".into()))
}

/// Median of the finite values.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}
