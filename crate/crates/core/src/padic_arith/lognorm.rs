use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Prime;

/// Valuation `v_p(x)`; `PlusInfinity` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::PlusInfinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// An exact non-archimedean magnitude `p^e` with `e` rational.
///
/// `Zero` is the magnitude of the zero vector (exponent `-inf`) and
/// `Unbounded` stands for an infinite radius (exponent `+inf`). The derived
/// ordering is the ordering of magnitudes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogNorm {
    Zero,
    Finite(BigRational),
    Unbounded,
}

impl LogNorm {
    pub fn one() -> Self {
        LogNorm::Finite(BigRational::zero())
    }

    pub fn from_exponent(e: BigRational) -> Self {
        LogNorm::Finite(e)
    }

    pub fn from_int(e: i64) -> Self {
        LogNorm::Finite(BigRational::from_integer(BigInt::from(e)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        LogNorm::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `p^{-1/(p-1)}`, the radius of convergence of the p-adic exponential.
    pub fn exp_radius(p: Prime) -> Self {
        LogNorm::from_ratio(-1, p.get() as i64 - 1)
    }

    pub fn exponent(&self) -> Option<&BigRational> {
        match self {
            LogNorm::Finite(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogNorm::Zero)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LogNorm::Finite(_))
    }

    /// Product of magnitudes. `Zero` absorbs everything, including `Unbounded`.
    pub fn mul(&self, other: &LogNorm) -> LogNorm {
        match (self, other) {
            (LogNorm::Zero, _) | (_, LogNorm::Zero) => LogNorm::Zero,
            (LogNorm::Unbounded, _) | (_, LogNorm::Unbounded) => LogNorm::Unbounded,
            (LogNorm::Finite(a), LogNorm::Finite(b)) => LogNorm::Finite(a + b),
        }
    }

    pub fn inv(&self) -> LogNorm {
        match self {
            LogNorm::Zero => LogNorm::Unbounded,
            LogNorm::Unbounded => LogNorm::Zero,
            LogNorm::Finite(e) => LogNorm::Finite(-e),
        }
    }

    pub fn div(&self, other: &LogNorm) -> LogNorm {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: u64) -> LogNorm {
        if k == 0 {
            return LogNorm::one();
        }
        match self {
            LogNorm::Finite(e) => LogNorm::Finite(e * BigRational::from_integer(BigInt::from(k))),
            other => other.clone(),
        }
    }

    /// Scales the exponent by a rational factor (`p^e` ↦ `p^{q e}`).
    pub fn scale_exponent(&self, q: &BigRational) -> LogNorm {
        match self {
            LogNorm::Finite(e) => LogNorm::Finite(e * q),
            other => other.clone(),
        }
    }

    pub fn max_of<'a>(items: impl IntoIterator<Item = &'a LogNorm>) -> LogNorm {
        items.into_iter().fold(LogNorm::Zero, |acc, x| acc.max(x.clone()))
    }

    /// Exact test of `self ≤ factor · other` for a positive rational `factor`.
    ///
    /// Magnitudes are powers of `p`, so the comparison `p^d ≤ q` with
    /// `d = a/b` is decided as `p^a ≤ q^b` in exact rational arithmetic.
    pub fn le_scaled(&self, other: &LogNorm, factor: &BigRational, p: Prime) -> bool {
        assert!(factor.is_positive(), "scaling factor must be positive");
        match (self, other) {
            (LogNorm::Zero, _) => true,
            (_, LogNorm::Unbounded) => true,
            (_, LogNorm::Zero) => false,
            (LogNorm::Unbounded, _) => false,
            (LogNorm::Finite(a), LogNorm::Finite(b)) => {
                let d = a - b;
                let num = d.numer().clone();
                let den = d.denom().clone();
                let den_u = den.to_u64().expect("exponent denominator fits in u64");
                let lhs_pow = num.abs().to_u64().expect("exponent numerator fits in u64");
                let q_pow = rational_pow(factor, den_u);
                let p_pow = BigRational::from_integer(p.pow(lhs_pow));
                if num.is_negative() {
                    BigRational::one() <= q_pow * p_pow
                } else {
                    p_pow <= q_pow
                }
            }
        }
    }

    /// Exponent as `f64`, for display only.
    pub fn exponent_f64(&self) -> f64 {
        match self {
            LogNorm::Zero => f64::NEG_INFINITY,
            LogNorm::Unbounded => f64::INFINITY,
            LogNorm::Finite(e) => e.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exponent rendered exactly: `-inf`, `+inf`, or a reduced fraction.
    pub fn exponent_string(&self) -> String {
        match self {
            LogNorm::Zero => "-inf".to_string(),
            LogNorm::Unbounded => "+inf".to_string(),
            LogNorm::Finite(e) => e.to_string(),
        }
    }

    /// Smallest integer `m` with `p^{-m} ≤ self`, i.e. `ceil(-e)`; the number of
    /// p-adic digits that an error of this size leaves intact.
    pub fn digits_below(&self) -> Option<i64> {
        match self {
            LogNorm::Finite(e) => (-e).ceil().to_integer().to_i64(),
            _ => None,
        }
    }
}

impl fmt::Display for LogNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogNorm::Zero => write!(f, "0"),
            LogNorm::Unbounded => write!(f, "unbounded"),
            LogNorm::Finite(e) => write!(f, "p^({e})"),
        }
    }
}

fn rational_pow(q: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ordering_matches_magnitude() {
        assert!(LogNorm::Zero < LogNorm::from_int(-100));
        assert!(LogNorm::from_int(-1) < LogNorm::one());
        assert!(LogNorm::from_int(1000) < LogNorm::Unbounded);
        assert!(Valuation::Finite(i64::MAX) < Valuation::PlusInfinity);
        assert_eq!(
            Valuation::Finite(3) + Valuation::PlusInfinity,
            Valuation::PlusInfinity
        );
    }

    #[test]
    fn arithmetic_in_exponent_space() {
        let a = LogNorm::from_ratio(3, 4);
        let b = LogNorm::from_ratio(-1, 4);
        assert_eq!(a.mul(&b), LogNorm::from_ratio(1, 2));
        assert_eq!(a.inv(), LogNorm::from_ratio(-3, 4));
        assert_eq!(a.pow(4), LogNorm::from_int(3));
        assert_eq!(LogNorm::Zero.mul(&LogNorm::Unbounded), LogNorm::Zero);
        assert_eq!(LogNorm::Zero.inv(), LogNorm::Unbounded);
    }

    #[test]
    fn scaled_comparison() {
        let p = Prime::new(3).unwrap();
        // 3^{1/2} ≈ 1.732 ≤ 2 but not ≤ 3/2
        let half = LogNorm::from_ratio(1, 2);
        assert!(half.le_scaled(&LogNorm::one(), &q(2, 1), p));
        assert!(!half.le_scaled(&LogNorm::one(), &q(3, 2), p));
        // 3^{-1} ≤ (1/2)·1 holds, 3^{-1} ≤ (1/4)·1 fails
        let m1 = LogNorm::from_int(-1);
        assert!(m1.le_scaled(&LogNorm::one(), &q(1, 2), p));
        assert!(!m1.le_scaled(&LogNorm::one(), &q(1, 4), p));
        assert!(LogNorm::Zero.le_scaled(&LogNorm::Zero, &q(1, 1), p));
        assert!(!LogNorm::one().le_scaled(&LogNorm::Zero, &q(100, 1), p));
    }

    #[test]
    fn digits_below_rounds_up() {
        assert_eq!(LogNorm::from_int(-5).digits_below(), Some(5));
        assert_eq!(LogNorm::from_ratio(-9, 2).digits_below(), Some(5));
        assert_eq!(LogNorm::from_ratio(1, 2).digits_below(), Some(0));
    }
}
