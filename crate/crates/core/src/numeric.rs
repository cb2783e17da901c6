//! Small numerical kernels shared by the rest of the crate: bracketed
//! one-dimensional searches, compensated summation, Gauss-Legendre rules and
//! an overflow-free running product of magnitudes.

use std::sync::OnceLock;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    /// Width of the final bracket.
    pub width: f64,
    pub evaluations: usize,
}

/// Maximizes `f` on `[a, b]` by golden-section search until the bracket is
/// narrower than `tol`. The best point seen (including the end points) is
/// returned, so a non-unimodal `f` still yields a value no worse than the
/// initial bracket ends.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> GoldenResult {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut best_x = lo;
    let mut best_v = f(lo);
    let mut evals = 1;
    let v_hi = f(hi);
    evals += 1;
    if v_hi > best_v {
        best_x = hi;
        best_v = v_hi;
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    evals += 2;
    let tol = tol.max(f64::EPSILON * (lo.abs() + hi.abs()));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evals += 1;
        if f1 > best_v {
            best_v = f1;
            best_x = x1;
        }
        if f2 > best_v {
            best_v = f2;
            best_x = x2;
        }
        if x1 >= x2 {
            break;
        }
    }
    GoldenResult {
        x: best_x,
        value: best_v,
        width: hi - lo,
        evaluations: evals,
    }
}

/// Minimizing counterpart of [`golden_max`].
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> GoldenResult {
    let r = golden_max(|x| -f(x), a, b, tol);
    GoldenResult { value: -r.value, ..r }
}

/// Bisection for an increasing predicate change: returns the point where
/// `below(x)` switches from `true` to `false` on `[a, b]`, assuming
/// `below(a)` holds and `below(b)` does not. Runs until the floating-point
/// midpoint no longer moves.
pub fn bisect_increasing<F: FnMut(f64) -> bool>(mut below: F, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<CompensatedSum>().value()
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `order`-point rule by Newton iteration on the Legendre
    /// three-term recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// The 16-point rule used for contour integrals.
    pub fn sixteen() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Points and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Running product of non-negative factors kept as `mantissa * 2^exponent`.
///
/// Renormalizes whenever the mantissa leaves `[2^-256, 2^256]`, so products of
/// 10^5 and more factors neither overflow nor underflow.
#[derive(Debug, Clone, Copy)]
pub struct ScaledProduct {
    mantissa: f64,
    exponent: i64,
    zero: bool,
}

const RENORM_HI: f64 = 1.157_920_892_373_162e77; // 2^256
const RENORM_LO: f64 = 8.636_168_555_094_445e-78; // 2^-256

impl Default for ScaledProduct {
    fn default() -> Self {
        Self::new()
    }
}

impl ScaledProduct {
    pub fn new() -> Self {
        Self {
            mantissa: 1.0,
            exponent: 0,
            zero: false,
        }
    }

    #[inline]
    pub fn mul(&mut self, factor: f64) {
        if factor == 0.0 {
            self.zero = true;
            return;
        }
        self.mantissa *= factor;
        if !(RENORM_LO..=RENORM_HI).contains(&self.mantissa) {
            self.renormalize();
        }
    }

    fn renormalize(&mut self) {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return;
        }
        let bits = self.mantissa.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        if raw_exp == 0 {
            // subnormal: rescale first
            self.mantissa *= RENORM_HI;
            self.exponent -= 256;
            self.renormalize();
            return;
        }
        let e = raw_exp - 1023;
        self.exponent += e;
        self.mantissa = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
    }

    /// Natural log of the product (`-inf` for a zero factor).
    pub fn ln(&self) -> f64 {
        if self.zero {
            return f64::NEG_INFINITY;
        }
        self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
    }
}

/// `sum_k ln(values_k)` computed through a [`ScaledProduct`].
pub fn ln_product<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut p = ScaledProduct::new();
    for v in values {
        p.mul(v);
    }
    p.ln()
}

/// Ordinary least squares via the normal equations solved by Gaussian
/// elimination with partial pivoting. Returns `None` on (numerical) rank
/// deficiency.
pub fn least_squares(design: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let cols = design.first()?.len();
    let mut a = vec![vec![0.0; cols + 1]; cols];
    for (row, &y) in design.iter().zip(rhs) {
        for i in 0..cols {
            for j in 0..cols {
                a[i][j] += row[i] * row[j];
            }
            a[i][cols] += row[i] * y;
        }
    }
    let scale = (0..cols).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    for c in 0..cols {
        let piv = (c..cols).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(c, piv);
        for r in 0..cols {
            if r != c {
                let f = a[r][c] / a[c][c];
                let pivot_row = a[c].clone();
                for (x, p) in a[r][c..=cols].iter_mut().zip(&pivot_row[c..=cols]) {
                    *x -= f * p;
                }
            }
        }
    }
    Some((0..cols).map(|i| a[i][cols] / a[i][i]).collect())
}
