//! Conversions from oracle data to library values, shared by the integration tests.
#![allow(dead_code)]

use num_rational::BigRational;
use padic_cauchy::analytic_space::{AnalyticFunction, AnalyticSpace, MultiIndex};
use padic_cauchy::operators::MatrixOperator;
use padic_cauchy::oracle::RationalPolynomial;
use padic_cauchy::padic_arith::{PadicNumber, Prime};
use padic_cauchy::spaces::Vector;

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn padic(q: &BigRational, p: Prime, prec: u32) -> PadicNumber {
    PadicNumber::from_big_rational(q, p, prec).unwrap()
}

pub fn vector(xs: &[BigRational], p: Prime, prec: u32) -> Vector {
    Vector::new(p, xs.iter().map(|q| padic(q, p, prec)).collect()).unwrap()
}

pub fn matrix(rows: &[Vec<BigRational>], p: Prime, prec: u32) -> MatrixOperator {
    MatrixOperator::new(
        p,
        rows.iter()
            .map(|r| r.iter().map(|q| padic(q, p, prec)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn function(f: &RationalPolynomial, space: &AnalyticSpace, prec: u32) -> AnalyticFunction {
    AnalyticFunction::from_terms(
        space,
        f.iter()
            .map(|(alpha, c)| (MultiIndex::new(alpha.clone()), padic(c, space.prime, prec))),
    )
    .unwrap()
}
