use super::{fejer_thetas, FamilyKind, NodeFamily};
use crate::error::{Error, Result};
use crate::geometry::{boundary_point, fold_j, CurveKind, END_PARAM};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Which indices were moved apart, and by how much.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentRecord {
    /// `(j, k)`: `θ_j` lies in the injective range and `J(θ_k)` came within
    /// the guard of it. Mirrored pairs on the negative side are included.
    pub pairs: Vec<(usize, usize)>,
    /// index → (base parameter, adjusted parameter).
    pub shifts: BTreeMap<usize, (f64, f64)>,
    pub guard: f64,
}

impl AdjustmentRecord {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_adjusted(&self, index: usize) -> bool {
        self.shifts.contains_key(&index)
    }
}

/// Adjusted parameters for degree `n`, all folded into `[-2π/3, 2π/3]`.
///
/// Each grid angle beyond a free end is replaced by its fold partner. When
/// such a partner `J(θ_k)` falls within the guard `2π/(3(n+1))` of a grid
/// angle `θ_j`, the two are pushed apart so that their gap equals the guard
/// and their sum is preserved. The negative side mirrors the positive one.
pub fn adjust_thetas(n: usize) -> Result<(Vec<f64>, AdjustmentRecord)> {
    let thetas = fejer_thetas(n)?;
    let half = n / 2;
    let guard = 2.0 * PI / (3.0 * (n as f64 + 1.0));

    let inner: Vec<usize> = (0..=half).filter(|&k| thetas[k] <= END_PARAM).collect();
    let outer: Vec<(usize, f64)> = (0..=half)
        .filter(|&k| thetas[k] > END_PARAM)
        .map(|k| fold_j(thetas[k]).map(|s| (k, s)))
        .collect::<Result<_>>()?;

    let mut adjusted = thetas.clone();
    for &(k, s) in &outer {
        adjusted[k] = s;
    }

    let mut record = AdjustmentRecord {
        guard,
        ..Default::default()
    };
    let mut partner_of_k: BTreeMap<usize, usize> = BTreeMap::new();
    for &j in &inner {
        let tj = thetas[j];
        let hits: Vec<(usize, f64)> = outer
            .iter()
            .copied()
            .filter(|&(_, s)| (tj - s).abs() < guard)
            .collect();
        if hits.len() > 1 {
            return Err(Error::AmbiguousAdjustment {
                n,
                index: j,
                count: hits.len(),
            });
        }
        let Some(&(k, s)) = hits.first() else {
            continue;
        };
        if partner_of_k.insert(k, j).is_some() {
            return Err(Error::AmbiguousAdjustment {
                n,
                index: k,
                count: 2,
            });
        }
        let (new_j, new_k) = if s <= tj {
            (s + guard, tj - guard)
        } else {
            (s - guard, tj + guard)
        };
        adjusted[j] = new_j;
        adjusted[k] = new_k;
        record.pairs.push((j, k));
        record.shifts.insert(j, (tj, new_j));
        record.shifts.insert(k, (s, new_k));
    }

    for m in half + 1..=n {
        let src = 2 * half + 1 - m;
        adjusted[m] = -adjusted[src];
        if let Some(&(base, adj)) = record.shifts.get(&src) {
            record.shifts.insert(m, (-base, -adj));
        }
    }
    let mirrored: Vec<(usize, usize)> = record
        .pairs
        .iter()
        .map(|&(j, k)| (2 * half + 1 - j, 2 * half + 1 - k))
        .filter(|&(j, _)| j <= n)
        .collect();
    record.pairs.extend(mirrored);

    Ok((adjusted, record))
}

/// Nodes `boundary_point(θ̃_k)` with the adjustment record attached.
pub fn adjusted_fejer_nodes(n: usize) -> Result<NodeFamily> {
    let (thetas, record) = adjust_thetas(n)?;
    let points = thetas.iter().map(|&t| boundary_point(t)).collect();
    NodeFamily::new(
        FamilyKind::AdjustedFejerGamma0,
        CurveKind::Gamma0,
        points,
        Some(thetas),
        Some(record),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fold_j_signed;
    use crate::nodes::fejer_nodes_gamma0;

    fn min_gap(t: &[f64]) -> f64 {
        let mut s = t.to_vec();
        s.sort_by(f64::total_cmp);
        s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn guard_gap_holds_up_to_512() {
        for n in 1..=512usize {
            let (t, rec) = adjust_thetas(n).unwrap();
            assert_eq!(t.len(), n + 1);
            assert!(min_gap(&t) >= rec.guard - 1e-12, "n = {n}");
            for &x in &t {
                assert!(x.abs() <= END_PARAM + 1e-12);
            }
        }
    }

    #[test]
    fn pairs_preserve_sums_and_respect_shift_bound() {
        let mut seen = 0;
        for n in 2..=512usize {
            let thetas = fejer_thetas(n).unwrap();
            let (t, rec) = adjust_thetas(n).unwrap();
            for &(j, k) in &rec.pairs {
                let jk = fold_j_signed(thetas[k]);
                assert!((thetas[j] - jk).abs() < rec.guard);
                assert!((t[j] + t[k] - thetas[j] - jk).abs() <= 1e-12, "n = {n}");
                seen += 1;
            }
            for (&i, &(base, adj)) in &rec.shifts {
                assert!((adj - base).abs() <= rec.guard + 1e-15, "n = {n}, i = {i}");
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn unpaired_grid_matches_plain_fejer_points() {
        for n in 2..=40usize {
            let (_, rec) = adjust_thetas(n).unwrap();
            if !rec.is_empty() {
                continue;
            }
            let a = adjusted_fejer_nodes(n).unwrap();
            let f = fejer_nodes_gamma0(n).unwrap();
            for (p, q) in a.points.iter().zip(&f.points) {
                assert!((p - q).norm() < 1e-10, "n = {n}");
            }
        }
    }

    #[test]
    fn conjugate_closed() {
        for n in 1..=512usize {
            let a = adjusted_fejer_nodes(n).unwrap();
            let half = n / 2;
            for k in half + 1..=n {
                assert_eq!(a.points[k], a.points[2 * half + 1 - k].conj());
            }
        }
    }

    #[test]
    fn collision_order_has_a_pair() {
        // at n = 46 the fold partner of the last positive angle lands
        // next to θ_5
        let (_, rec) = adjust_thetas(46).unwrap();
        assert!(rec.pairs.iter().any(|&(j, k)| j == 5 && k == 23));
        let (_, rec) = adjust_thetas(2).unwrap();
        assert!(rec.is_empty());
    }
}
