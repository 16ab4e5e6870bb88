mod common;

use common::{padic, prime};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use padic_cauchy::oracle::{factorial, matches_rational, rational_valuation};
use padic_cauchy::padic_arith::{vp_factorial, LogNorm, Valuation};
use proptest::prelude::*;

const PREC: u32 = 24;

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn rationals() -> impl Strategy<Value = BigRational> {
    (-1_000_000i64..=1_000_000, 1i64..=5_000)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rationals() -> impl Strategy<Value = BigRational> {
    rationals().prop_filter("nonzero", |q| !q.is_zero())
}

fn rational_norm(q: &BigRational, p: u64) -> LogNorm {
    match rational_valuation(q, prime(p)) {
        Valuation::PlusInfinity => LogNorm::Zero,
        Valuation::Finite(v) => LogNorm::from_int(-v),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ultrametric_inequality(p in primes(), a in rationals(), b in rationals()) {
        let q = prime(p);
        let (x, y) = (padic(&a, q, PREC), padic(&b, q, PREC));
        let s = x.add(&y).unwrap();
        prop_assert!(s.norm() <= x.norm().max(y.norm()));
        prop_assert!(rational_norm(&(&a + &b), p) <= rational_norm(&a, p).max(rational_norm(&b, p)));
        if x.norm() != y.norm() {
            prop_assert_eq!(s.norm(), x.norm().max(y.norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn norm_is_multiplicative(p in primes(), a in nonzero_rationals(), b in nonzero_rationals()) {
        let q = prime(p);
        let (x, y) = (padic(&a, q, PREC), padic(&b, q, PREC));
        prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm().mul(&y.norm()));
        prop_assert_eq!(x.mul(&y).unwrap().norm(), rational_norm(&(&a * &b), p));
    }

    #[test]
    fn field_operations_match_rationals(p in primes(), a in rationals(), b in nonzero_rationals()) {
        let q = prime(p);
        let (x, y) = (padic(&a, q, PREC), padic(&b, q, PREC));
        prop_assert!(matches_rational(&x.add(&y).unwrap(), &(&a + &b), 64));
        prop_assert!(matches_rational(&x.sub(&y).unwrap(), &(&a - &b), 64));
        prop_assert!(matches_rational(&x.mul(&y).unwrap(), &(&a * &b), 64));
        prop_assert!(matches_rational(&x.div(&y).unwrap(), &(&a / &b), 64));
    }

    #[test]
    fn legendre_matches_factorial_valuation(p in primes(), n in 0u64..=2000) {
        let q = prime(p);
        let v = rational_valuation(&BigRational::from_integer(factorial(n)), q);
        prop_assert_eq!(v, Valuation::Finite(vp_factorial(n, q) as i64));
    }
}

#[test]
fn subtraction_keeps_relative_precision_when_norms_differ() {
    let q = prime(3);
    let x = padic(&BigRational::from_integer(1.into()), q, 10);
    let y = padic(&BigRational::from_integer(9.into()), q, 10);
    let d = x.sub(&y).unwrap();
    assert!(d.is_exact());
    assert_eq!(d.norm(), LogNorm::one());
}
