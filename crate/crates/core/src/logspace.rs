//! Complex numbers stored as `exp(log_mag) * phase`.

use num_complex::Complex64;
use std::ops::{Div, Mul};

/// A complex value kept as natural log of its modulus plus a unit phase.
///
/// Zero is encoded by `log_mag = -inf`. Products of many factors only add
/// logs and multiply unit phases, so they never overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: Complex64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: Complex64 { re: 1.0, im: 0.0 },
    };

    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: Complex64 { re: 1.0, im: 0.0 },
    };

    pub fn from_complex(z: Complex64) -> Self {
        let r = z.norm();
        if r == 0.0 {
            return Self::ZERO;
        }
        Self {
            log_mag: r.ln(),
            phase: z / r,
        }
    }

    pub fn from_parts(log_mag: f64, phase: Complex64) -> Self {
        Self { log_mag, phase }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        self.log_mag.exp()
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.phase * self.log_mag.exp()
    }

    pub fn recip(&self) -> Self {
        Self {
            log_mag: -self.log_mag,
            phase: self.phase.conj(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        *self * LogComplex::from_complex(c)
    }

    /// Renormalizes the phase to unit modulus; long products accumulate a
    /// drift of a few ulps per factor otherwise.
    pub fn normalized(self) -> Self {
        let r = self.phase.norm();
        if r == 0.0 || !r.is_finite() {
            return self;
        }
        Self {
            log_mag: self.log_mag,
            phase: self.phase / r,
        }
    }

    /// Product of `(z - a)` over all `a` in `roots`.
    pub fn product_of_differences<'a, I>(z: Complex64, roots: I) -> Self
    where
        I: IntoIterator<Item = &'a Complex64>,
    {
        let mut acc = Self::ONE;
        for (i, a) in roots.into_iter().enumerate() {
            acc = acc * LogComplex::from_complex(z - a);
            if i % 64 == 63 {
                acc = acc.normalized();
            }
        }
        acc.normalized()
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex {
            log_mag: self.log_mag + rhs.log_mag,
            phase: self.phase * rhs.phase,
        }
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        let inv = rhs.recip();
        self.mul(inv)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert!(LogComplex::from_complex(Complex64::new(0.0, 0.0)).is_zero());
        assert_eq!(LogComplex::ONE.to_complex(), Complex64::new(1.0, 0.0));
        let z = LogComplex::from_complex(Complex64::new(3.0, 4.0));
        assert!((z * LogComplex::ZERO).is_zero());
    }

    #[test]
    fn hundred_thousand_factors_do_not_overflow() {
        let f = Complex64::new(0.0, 1e10);
        let mut acc = LogComplex::ONE;
        for _ in 0..100_000 {
            acc = acc * LogComplex::from_complex(f);
        }
        let acc = acc.normalized();
        assert!((acc.log_mag / (100_000.0 * 1e10f64.ln()) - 1.0).abs() < 1e-12);
        // i^100000 = 1
        assert!((acc.phase - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    proptest! {
        #[test]
        fn round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() > 1e-12);
            let back = LogComplex::from_complex(z).to_complex();
            prop_assert!((back - z).norm() <= 1e-14 * z.norm());
        }

        #[test]
        fn product_matches_direct(a in -10f64..10.0, b in -10f64..10.0, c in -10f64..10.0, d in -10f64..10.0) {
            let x = Complex64::new(a, b);
            let y = Complex64::new(c, d);
            prop_assume!(x.norm() > 1e-6 && y.norm() > 1e-6);
            let p = (LogComplex::from(x) * LogComplex::from(y)).to_complex();
            prop_assert!((p - x * y).norm() <= 1e-13 * (x * y).norm());
            let q = (LogComplex::from(x) / LogComplex::from(y)).to_complex();
            prop_assert!((q - x / y).norm() <= 1e-13 * (x / y).norm());
        }
    }
}
