//! Brute-force reference computations in exact rational arithmetic.
//!
//! Nothing here goes through the p-adic types except the final conversion
//! [`reduce_mod_pn`] and the comparison helper [`matches_rational`], which
//! build their digits independently of `padic_arith`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::padic_arith::{PadicNumber, Prime, Valuation};

pub type ExactRational = BigRational;

/// Polynomial in `n` variables: exponent vector ↦ coefficient, no zero coefficients.
pub type RationalPolynomial = BTreeMap<Vec<u32>, BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(num) - v_p(den)` by repeated division.
pub fn rational_valuation(q: &BigRational, p: Prime) -> Valuation {
    if q.is_zero() {
        return Valuation::PlusInfinity;
    }
    Valuation::Finite(int_valuation(q.numer(), p.get()) - int_valuation(q.denom(), p.get()))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `v_p(n!) = Σ_{m ≤ n} v_p(m)`, each `v_p(m)` found by trial division.
pub fn factorial_valuation_by_factoring(n: u64, p: Prime) -> u64 {
    let p = p.get();
    (2..=n)
        .map(|mut m| {
            let mut v = 0;
            while m % p == 0 {
                m /= p;
                v += 1;
            }
            v
        })
        .sum()
}

/// The image of `q` in `Q_p` with `n` digits of relative precision, digits
/// extracted one at a time from `q = p^v u/w`.
pub fn reduce_mod_pn(q: &BigRational, p: Prime, n: u32) -> Result<PadicNumber> {
    if q.is_zero() {
        return Ok(PadicNumber::zero(p));
    }
    let v = match rational_valuation(q, p) {
        Valuation::Finite(v) => v,
        Valuation::PlusInfinity => unreachable!(),
    };
    let pp = BigInt::from(p.get());
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    for _ in 0..v.max(0) {
        num /= &pp;
    }
    for _ in 0..(-v).max(0) {
        den /= &pp;
    }
    let den_mod = den.mod_floor(&pp);
    let den_inv = (1..p.get())
        .map(BigInt::from)
        .find(|d| (d * &den_mod).mod_floor(&pp).is_one())
        .expect("denominator is a unit");
    let mut digits = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let d = (num.mod_floor(&pp) * &den_inv).mod_floor(&pp);
        num = (num - &d * &den) / &pp;
        digits.push(u64::try_from(d).expect("digit below p"));
    }
    PadicNumber::from_digits(p, v, &digits, n)
}

/// Does `x` equal `q` digit for digit at the precision `x` reports?
/// Exact values are compared on their first `exact_digits` digits.
pub fn matches_rational(x: &PadicNumber, q: &BigRational, exact_digits: u32) -> bool {
    let p = x.prime();
    if x.is_exact_zero() {
        return q.is_zero();
    }
    if x.is_zero_at_precision() {
        let a = x.absolute_precision().expect("zero-mod has an absolute precision");
        return match rational_valuation(q, p) {
            Valuation::PlusInfinity => true,
            Valuation::Finite(v) => v >= a,
        };
    }
    if q.is_zero() {
        return false;
    }
    let r = x.relative_precision().unwrap_or(exact_digits);
    let expected = match reduce_mod_pn(q, p, r) {
        Ok(e) => e,
        Err(_) => return false,
    };
    x.with_relative_precision_at_most(r).to_compact() == expected.to_compact()
}

pub fn mat_vec(a: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(BigRational::zero(), |acc, (m, v)| acc + m * v))
        .collect()
}

/// `c_k = A^k y₀ / k!` for `k ≤ K`.
pub fn exact_series_coefficients(
    a: &[Vec<BigRational>],
    y0: &[BigRational],
    depth: usize,
) -> Vec<Vec<BigRational>> {
    let mut out = vec![y0.to_vec()];
    for k in 1..=depth {
        let next = mat_vec(a, &out[k - 1])
            .into_iter()
            .map(|v| v / BigRational::from_integer(BigInt::from(k)))
            .collect();
        out.push(next);
    }
    out
}

/// `Σ_{k ≤ K} A^k y₀ z^k / k!`.
pub fn exact_series_partial_sum(
    a: &[Vec<BigRational>],
    y0: &[BigRational],
    z: &BigRational,
    depth: usize,
) -> Vec<BigRational> {
    let mut sum = vec![BigRational::zero(); y0.len()];
    let mut zk = BigRational::one();
    for c in exact_series_coefficients(a, y0, depth) {
        for (s, ci) in sum.iter_mut().zip(&c) {
            *s += ci * &zk;
        }
        zk *= z;
    }
    sum
}

/// `Σ_{k ≤ K} z^k / k!`.
pub fn exp_partial_sum(z: &BigRational, depth: usize) -> BigRational {
    exact_series_partial_sum(&[vec![BigRational::one()]], &[BigRational::one()], z, depth)
        .pop()
        .expect("one component")
}

fn insert_term(f: &mut RationalPolynomial, alpha: Vec<u32>, c: BigRational) {
    let sum = f.remove(&alpha).unwrap_or_else(BigRational::zero) + c;
    if !sum.is_zero() {
        f.insert(alpha, sum);
    }
}

/// `∂f/∂x_j`, `j` 1-based.
pub fn poly_derivative(f: &RationalPolynomial, j: usize) -> RationalPolynomial {
    let mut out = RationalPolynomial::new();
    for (alpha, c) in f {
        let e = alpha[j - 1];
        if e == 0 {
            continue;
        }
        let mut beta = alpha.clone();
        beta[j - 1] -= 1;
        insert_term(&mut out, beta, c * BigRational::from_integer(BigInt::from(e)));
    }
    out
}

pub fn poly_product(f: &RationalPolynomial, g: &RationalPolynomial) -> RationalPolynomial {
    let mut out = RationalPolynomial::new();
    for (a, x) in f {
        for (b, y) in g {
            let alpha = a.iter().zip(b).map(|(i, j)| i + j).collect();
            insert_term(&mut out, alpha, x * y);
        }
    }
    out
}

pub fn poly_truncate(f: &RationalPolynomial, degree: u32) -> RationalPolynomial {
    f.iter()
        .filter(|(alpha, _)| alpha.iter().sum::<u32>() <= degree)
        .map(|(a, c)| (a.clone(), c.clone()))
        .collect()
}

/// Exponent of `max_α |f_α|_p ρ^{|α|}` for `ρ = p^{rho}`; `None` for `f = 0`.
pub fn poly_rho_norm_exponent(
    f: &RationalPolynomial,
    p: Prime,
    rho: &BigRational,
) -> Option<BigRational> {
    f.iter()
        .map(|(alpha, c)| {
            let v = match rational_valuation(c, p) {
                Valuation::Finite(v) => v,
                Valuation::PlusInfinity => unreachable!("no zero coefficients"),
            };
            BigRational::from_integer(BigInt::from(-v))
                + rho * BigRational::from_integer(BigInt::from(alpha.iter().sum::<u32>()))
        })
        .max()
}

/// Deterministic generator for reproducible instances.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coprime_int<R: Rng>(rng: &mut R, p: u64, max: i64) -> i64 {
    loop {
        let n = rng.gen_range(1..=max);
        if !(n as u64).is_multiple_of(p) {
            return n;
        }
    }
}

/// `±a/b` with `a, b ∈ [1, max]` both prime to `p`: a `p`-adic unit.
pub fn random_unit<R: Rng>(rng: &mut R, p: Prime, max: i64) -> BigRational {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(sign * coprime_int(rng, p.get(), max), coprime_int(rng, p.get(), max))
}

/// `p^v · u` with `v ∈ [min_v, max_v]` and `u` a random unit; zero with
/// probability `zero_prob`.
pub fn random_rational<R: Rng>(
    rng: &mut R,
    p: Prime,
    min_v: i64,
    max_v: i64,
    zero_prob: f64,
) -> BigRational {
    if rng.gen_bool(zero_prob) {
        return BigRational::zero();
    }
    let v = rng.gen_range(min_v..=max_v);
    random_unit(rng, p, 12) * p_power(p, v)
}

pub fn p_power(p: Prime, v: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p.get()));
    if v >= 0 {
        num_traits::pow(base, v as usize)
    } else {
        num_traits::pow(base.recip(), (-v) as usize)
    }
}

pub fn random_matrix<R: Rng>(
    rng: &mut R,
    p: Prime,
    n: usize,
    min_v: i64,
    max_v: i64,
) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|_| (0..n).map(|_| random_rational(rng, p, min_v, max_v, 0.2)).collect())
        .collect()
}

/// A matrix whose type on `x` is known in closed form.
#[derive(Clone, Debug)]
pub struct ClosedFormInstance {
    pub prime: Prime,
    pub rows: Vec<Vec<BigRational>>,
    pub x: Vec<BigRational>,
    /// `σ(x; A) = p^{sigma_exponent}`.
    pub sigma_exponent: i64,
    pub diagonal: bool,
}

/// Diagonal or upper-triangular `A` with unit-norm `x`.
///
/// Diagonal entries are `p^{m_i} u_i`. In the triangular case the smallest
/// `m_i` sits in the last row and every off-diagonal entry has valuation at
/// least that `m`, so `‖A^k x‖ = p^{-k m}` exactly for every `k`.
pub fn random_closed_form_instance<R: Rng>(
    rng: &mut R,
    p: Prime,
    max_dim: usize,
    max_m: i64,
) -> ClosedFormInstance {
    let n = rng.gen_range(1..=max_dim);
    let diagonal = rng.gen_bool(0.5);
    let mut ms: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_m)).collect();
    let m = *ms.iter().min().expect("n >= 1");
    if !diagonal {
        let pos = ms.iter().position(|&x| x == m).expect("min exists");
        ms.swap(pos, n - 1);
    }
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        rows[i][i] = random_unit(rng, p, 12) * p_power(p, ms[i]);
        if !diagonal {
            for entry in &mut rows[i][i + 1..] {
                *entry = random_rational(rng, p, m, m + 2, 0.3);
            }
        }
    }
    let x = (0..n).map(|_| random_unit(rng, p, 12)).collect();
    ClosedFormInstance {
        prime: p,
        rows,
        x,
        sigma_exponent: -m,
        diagonal,
    }
}

/// Random polynomial in `vars` variables of total degree ≤ `max_degree`.
pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    p: Prime,
    vars: usize,
    max_degree: u32,
    terms: usize,
) -> RationalPolynomial {
    let mut f = RationalPolynomial::new();
    for _ in 0..terms {
        let total = rng.gen_range(0..=max_degree);
        let mut alpha = vec![0u32; vars];
        for _ in 0..total {
            alpha[rng.gen_range(0..vars)] += 1;
        }
        insert_term(&mut f, alpha, random_rational(rng, p, -2, 3, 0.0));
    }
    f
}
