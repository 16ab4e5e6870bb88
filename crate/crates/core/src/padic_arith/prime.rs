use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// A rational prime, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as a big integer.
    pub fn pow(self, e: u64) -> BigInt {
        if e == 0 {
            return BigInt::one();
        }
        Pow::pow(self.to_bigint(), e)
    }

    /// Exponent of `p` in a nonzero integer, together with the cofactor.
    pub fn split(self, n: &BigInt) -> (u64, BigInt) {
        debug_assert!(!n.is_zero());
        let p = self.to_bigint();
        let mut v = 0;
        let mut m = n.clone();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &p);
            if !r.is_zero() {
                return (v, m);
            }
            m = q;
            v += 1;
        }
    }

    /// Exponent of `p` in a nonzero integer.
    pub fn valuation_of(self, n: &BigInt) -> u64 {
        self.split(n).0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
