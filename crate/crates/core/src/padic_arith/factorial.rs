//! Factorial valuations via Legendre's formula.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{LogNorm, Prime};

/// Sum of the base-p digits of `n`.
pub fn digit_sum(n: u64, p: Prime) -> u64 {
    let p = p.get();
    let mut n = n;
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// `v_p(n!) = (n - s_p(n)) / (p - 1)`.
pub fn vp_factorial(n: u64, p: Prime) -> u64 {
    (n - digit_sum(n, p)) / (p.get() - 1)
}

/// `1/|k!|_p` next to the uniform bound `p^{k/(p-1)}` it must respect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialBound {
    pub k: u64,
    /// Exactly `p^{v_p(k!)}`.
    pub inverse_norm: LogNorm,
    /// `p^{k/(p-1)}`.
    pub bound: LogNorm,
}

impl FactorialBound {
    pub fn holds(&self) -> bool {
        self.inverse_norm <= self.bound
    }
}

pub fn factorial_norm_bound(k: u64, p: Prime) -> FactorialBound {
    FactorialBound {
        k,
        inverse_norm: LogNorm::from_int(vp_factorial(k, p) as i64),
        bound: LogNorm::from_exponent(BigRational::new(
            BigInt::from(k),
            BigInt::from(p.get() - 1),
        )),
    }
}
