//! The Banach algebra `A_ρ` of power series `Σ f_α x^α` with
//! `‖f‖_ρ = sup_α |f_α|_p ρ^{|α|}`, truncated at a fixed total degree.
//!
//! Elements keep a certified `truncation_norm`: a bound on the ρ-norm of
//! everything that was discarded (terms pushed above the truncation degree,
//! series tails). An element therefore stands for the set of series within
//! that distance of its stored polynomial part.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic_arith::{parse_rational, LogNorm, PadicNumber, Prime};
use crate::spaces::{precision_floor_of, BanachElement};

pub const DEFAULT_TRUNCATION_DEGREE: u32 = 16;

/// Exponent vector `α = (α_1, …, α_n)`, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `e_j` for a 1-based variable index.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j - 1] = 1;
        MultiIndex(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Shape of `A_ρ`: prime, number of variables, `ρ = p^{rho_exponent}`, and
/// the truncation degree `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticSpace {
    pub prime: Prime,
    pub variables: usize,
    pub rho_exponent: BigRational,
    pub truncation_degree: u32,
}

impl AnalyticSpace {
    pub fn new(
        prime: Prime,
        variables: usize,
        rho_exponent: BigRational,
        truncation_degree: u32,
    ) -> Result<Self> {
        if variables == 0 {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        Ok(AnalyticSpace {
            prime,
            variables,
            rho_exponent,
            truncation_degree,
        })
    }

    /// `ρ^{d}` as a magnitude.
    pub fn weight(&self, d: u32) -> LogNorm {
        LogNorm::Finite(&self.rho_exponent * BigRational::from_integer(BigInt::from(d)))
    }

    pub fn rho(&self) -> LogNorm {
        LogNorm::Finite(self.rho_exponent.clone())
    }
}

/// A truncated element of `A_ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticFunction {
    space: AnalyticSpace,
    coefficients: BTreeMap<MultiIndex, PadicNumber>,
    truncation_norm: LogNorm,
}

impl AnalyticFunction {
    pub fn zero(space: &AnalyticSpace) -> Self {
        AnalyticFunction {
            space: space.clone(),
            coefficients: BTreeMap::new(),
            truncation_norm: LogNorm::Zero,
        }
    }

    pub fn monomial(space: &AnalyticSpace, alpha: MultiIndex, c: PadicNumber) -> Result<Self> {
        let mut f = Self::zero(space);
        f.insert(alpha, c)?;
        Ok(f)
    }

    pub fn constant(space: &AnalyticSpace, c: PadicNumber) -> Result<Self> {
        Self::monomial(space, MultiIndex::zero(space.variables), c)
    }

    /// `x_j`, 1-based.
    pub fn variable(space: &AnalyticSpace, j: usize, cap: u32) -> Result<Self> {
        if j == 0 || j > space.variables {
            return Err(Error::InvalidArgument(format!(
                "variable x{j} outside 1..={}",
                space.variables
            )));
        }
        Self::monomial(
            space,
            MultiIndex::unit(space.variables, j),
            PadicNumber::one(space.prime, cap),
        )
    }

    pub fn from_terms(
        space: &AnalyticSpace,
        terms: impl IntoIterator<Item = (MultiIndex, PadicNumber)>,
    ) -> Result<Self> {
        let mut f = Self::zero(space);
        for (alpha, c) in terms {
            let prev = f.coefficient(&alpha);
            f.coefficients.remove(&alpha);
            f.insert(alpha, prev.add(&c)?)?;
        }
        Ok(f)
    }

    fn insert(&mut self, alpha: MultiIndex, c: PadicNumber) -> Result<()> {
        if alpha.len() != self.space.variables {
            return Err(Error::DimensionMismatch {
                expected: self.space.variables,
                found: alpha.len(),
            });
        }
        if c.prime() != self.space.prime {
            return Err(Error::PrimeMismatch(self.space.prime.get(), c.prime().get()));
        }
        if c.is_exact_zero() {
            return Ok(());
        }
        if alpha.degree() > self.space.truncation_degree {
            let w = c.norm().mul(&self.space.weight(alpha.degree()));
            self.truncation_norm = self.truncation_norm.clone().max(w);
            return Ok(());
        }
        self.coefficients.insert(alpha, c);
        Ok(())
    }

    pub fn space(&self) -> &AnalyticSpace {
        &self.space
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, PadicNumber> {
        &self.coefficients
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> PadicNumber {
        self.coefficients
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| PadicNumber::zero(self.space.prime))
    }

    pub fn truncation_norm(&self) -> &LogNorm {
        &self.truncation_norm
    }

    /// Exact polynomial: nothing discarded, every coefficient exact.
    pub fn is_exact_polynomial(&self) -> bool {
        self.truncation_norm.is_zero() && self.coefficients.values().all(PadicNumber::is_exact)
    }

    /// Highest total degree among stored terms.
    pub fn degree(&self) -> Option<u32> {
        self.coefficients.keys().map(MultiIndex::degree).max()
    }

    fn weighted(&self, alpha: &MultiIndex, c: &PadicNumber) -> LogNorm {
        c.norm().mul(&self.space.weight(alpha.degree()))
    }

    fn weighted_norms(&self) -> (LogNorm, bool) {
        let mut certain = LogNorm::Zero;
        let mut uncertain = self.truncation_norm.clone();
        for (alpha, c) in &self.coefficients {
            let w = self.weighted(alpha, c);
            if c.is_certified_nonzero() {
                certain = certain.max(w);
            } else {
                uncertain = uncertain.max(w);
            }
        }
        let exact = uncertain <= certain;
        (certain.max(uncertain), exact)
    }

    /// `‖f‖_ρ` (an upper bound when low-precision or discarded terms could dominate).
    pub fn rho_norm(&self) -> LogNorm {
        self.weighted_norms().0
    }

    /// A stored multi-index attaining the norm, when the norm is attained by a
    /// certified coefficient.
    pub fn norm_witness(&self) -> Option<MultiIndex> {
        let (norm, exact) = self.weighted_norms();
        if !exact || norm.is_zero() {
            return None;
        }
        self.coefficients
            .iter()
            .find(|(alpha, c)| c.is_certified_nonzero() && self.weighted(alpha, c) == norm)
            .map(|(alpha, _)| alpha.clone())
    }

    fn check_space(&self, other: &AnalyticFunction) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!(
                "A_rho(p={}, n={}, rho=p^{}, D={}) vs A_rho(p={}, n={}, rho=p^{}, D={})",
                self.space.prime,
                self.space.variables,
                self.space.rho_exponent,
                self.space.truncation_degree,
                other.space.prime,
                other.space.variables,
                other.space.rho_exponent,
                other.space.truncation_degree
            )));
        }
        Ok(())
    }

    /// `∂f/∂x_j` (1-based). Discarded mass shrinks by at most `ρ^{-1}`.
    pub fn partial_derivative(&self, j: usize) -> Result<AnalyticFunction> {
        let n = self.space.variables;
        if j == 0 || j > n {
            return Err(Error::InvalidArgument(format!("variable x{j} outside 1..={n}")));
        }
        let mut out = AnalyticFunction::zero(&self.space);
        for (alpha, c) in &self.coefficients {
            let a_j = alpha.0[j - 1];
            if a_j == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta.0[j - 1] -= 1;
            let factor = PadicNumber::from_integer(a_j, self.space.prime, 1);
            out.insert(beta, c.mul(&factor)?)?;
        }
        out.truncation_norm = self.truncation_norm.div(&self.space.rho());
        Ok(out)
    }

    /// `D^β f`.
    pub fn derivative(&self, beta: &MultiIndex) -> Result<AnalyticFunction> {
        if beta.len() != self.space.variables {
            return Err(Error::DimensionMismatch {
                expected: self.space.variables,
                found: beta.len(),
            });
        }
        let mut f = self.clone();
        for (j, &times) in beta.0.iter().enumerate() {
            for _ in 0..times {
                f = f.partial_derivative(j + 1)?;
            }
        }
        Ok(f)
    }

    /// Cauchy product up to degree `D`; the discarded part is bounded
    /// termwise by `|f_i||g_j|ρ^{|i|+|j|}` and the tails by submultiplicativity.
    pub fn multiply(&self, other: &AnalyticFunction) -> Result<AnalyticFunction> {
        self.check_space(other)?;
        let d = self.space.truncation_degree;
        let mut acc: BTreeMap<MultiIndex, PadicNumber> = BTreeMap::new();
        let mut discarded = LogNorm::Zero;
        for (i, fi) in &self.coefficients {
            for (j, gj) in &other.coefficients {
                let prod = fi.mul(gj)?;
                if prod.is_exact_zero() {
                    continue;
                }
                if i.degree() + j.degree() > d {
                    let w = prod.norm().mul(&self.space.weight(i.degree() + j.degree()));
                    discarded = discarded.max(w);
                    continue;
                }
                let k = i.plus(j);
                let entry = match acc.remove(&k) {
                    Some(prev) => prev.add(&prod)?,
                    None => prod,
                };
                acc.insert(k, entry);
            }
        }
        let tails = self
            .truncation_norm
            .mul(&other.rho_norm())
            .max(self.rho_norm().mul(&other.truncation_norm));
        let mut out = AnalyticFunction::zero(&self.space);
        for (k, c) in acc {
            out.insert(k, c)?;
        }
        out.truncation_norm = out.truncation_norm.clone().max(discarded).max(tails);
        Ok(out)
    }

    fn combine(
        &self,
        other: &AnalyticFunction,
        op: impl Fn(&PadicNumber, &PadicNumber) -> Result<PadicNumber>,
    ) -> Result<AnalyticFunction> {
        self.check_space(other)?;
        let zero = PadicNumber::zero(self.space.prime);
        let mut out = AnalyticFunction::zero(&self.space);
        let keys: std::collections::BTreeSet<&MultiIndex> = self
            .coefficients
            .keys()
            .chain(other.coefficients.keys())
            .collect();
        for k in keys {
            let a = self.coefficients.get(k).unwrap_or(&zero);
            let b = other.coefficients.get(k).unwrap_or(&zero);
            out.insert(k.clone(), op(a, b)?)?;
        }
        out.truncation_norm = self
            .truncation_norm
            .clone()
            .max(other.truncation_norm.clone());
        Ok(out)
    }

    fn map_coefficients(
        &self,
        f: impl Fn(&PadicNumber) -> Result<PadicNumber>,
        tail_factor: &LogNorm,
    ) -> Result<AnalyticFunction> {
        let mut out = AnalyticFunction::zero(&self.space);
        for (k, c) in &self.coefficients {
            out.insert(k.clone(), f(c)?)?;
        }
        out.truncation_norm = self.truncation_norm.mul(tail_factor);
        Ok(out)
    }

    /// Parses `3/5*x1^2*x2 + 7 - x3`.
    pub fn parse(s: &str, space: &AnalyticSpace, precision: u32) -> Result<AnalyticFunction> {
        let mut terms = Vec::new();
        for (negative, term) in split_signed_terms(s)? {
            let (alpha, mut coeff) = parse_monomial(term, space.variables)?;
            if negative {
                coeff = -coeff;
            }
            let c = PadicNumber::from_big_rational(&coeff, space.prime, precision)?;
            terms.push((alpha, c));
        }
        AnalyticFunction::from_terms(space, terms)
    }

    /// Rendering with coefficients in compact p-adic form, highest degree first.
    pub fn to_compact_terms(&self) -> Vec<(MultiIndex, String)> {
        self.coefficients
            .iter()
            .rev()
            .map(|(k, c)| (k.clone(), c.to_compact()))
            .collect()
    }
}

fn split_signed_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = Vec::new();
    let mut negative = false;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut expect_term = true;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if (ch == '+' || ch == '-') && !prev_is_caret(bytes, i) {
            if expect_term {
                if ch == '-' {
                    negative = !negative;
                }
                start = i + 1;
            } else {
                out.push((negative, s[start..i].trim()));
                negative = ch == '-';
                start = i + 1;
                expect_term = true;
            }
        } else if !ch.is_whitespace() {
            expect_term = false;
        }
        i += 1;
    }
    if expect_term {
        return Err(Error::Parse(format!("dangling operator in '{s}'")));
    }
    out.push((negative, s[start..].trim()));
    Ok(out)
}

fn prev_is_caret(bytes: &[u8], i: usize) -> bool {
    bytes[..i]
        .iter()
        .rev()
        .find(|b| !(**b as char).is_whitespace())
        .map(|b| *b == b'^')
        .unwrap_or(false)
}

fn parse_monomial(term: &str, n: usize) -> Result<(MultiIndex, BigRational)> {
    let mut coeff = BigRational::one();
    let mut alpha = vec![0u32; n];
    for factor in term.split('*').map(str::trim) {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in '{term}'")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (var, power) = match rest.split_once('^') {
                Some((v, e)) => (v.trim(), e.trim()),
                None => (rest.trim(), "1"),
            };
            let j: usize = var
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable '{factor}'")))?;
            if j == 0 || j > n {
                return Err(Error::Parse(format!("variable x{j} outside 1..={n}")));
            }
            let e: u32 = power
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
            alpha[j - 1] += e;
        } else {
            coeff *= parse_rational(factor)?;
        }
    }
    Ok((MultiIndex(alpha), coeff))
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            write!(f, "0")?;
        }
        for (i, (alpha, c)) in self.coefficients.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = alpha
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(j, e)| {
                    if *e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, e)
                    }
                })
                .collect();
            let coeff = format!("[{c}]");
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        if !self.truncation_norm.is_zero() {
            write!(f, " + tail(‖·‖ <= {})", self.truncation_norm)?;
        }
        Ok(())
    }
}

impl BanachElement for AnalyticFunction {
    fn prime(&self) -> Prime {
        self.space.prime
    }

    fn norm(&self) -> LogNorm {
        self.rho_norm()
    }

    fn norm_is_exact(&self) -> bool {
        self.weighted_norms().1
    }

    fn certified_norm(&self) -> LogNorm {
        LogNorm::max_of(
            self.coefficients
                .iter()
                .filter(|(_, c)| c.is_certified_nonzero())
                .map(|(alpha, c)| self.weighted(alpha, c))
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    fn is_exact_zero(&self) -> bool {
        self.coefficients.is_empty() && self.truncation_norm.is_zero()
    }

    fn zero_like(&self) -> Self {
        AnalyticFunction::zero(&self.space)
    }

    fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.add(b))
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.sub(b))
    }

    fn scale(&self, c: &PadicNumber) -> Result<Self> {
        self.map_coefficients(|x| x.mul(c), &c.norm())
    }

    fn div_scalar(&self, c: &PadicNumber) -> Result<Self> {
        self.map_coefficients(|x| x.div(c), &c.norm().inv())
    }

    fn absorb_error(&self, error: &LogNorm) -> Self {
        let mut out = self.clone();
        out.truncation_norm = out.truncation_norm.max(error.clone());
        out
    }

    fn precision_floor(&self) -> LogNorm {
        // The weakest coefficient, measured in the ρ-norm.
        self.coefficients
            .iter()
            .map(|(alpha, c)| {
                precision_floor_of(std::iter::once(c)).mul(&self.space.weight(alpha.degree()))
            })
            .max()
            .unwrap_or(LogNorm::Zero)
    }

    fn agrees_with(&self, other: &Self) -> bool {
        if self.space != other.space {
            return false;
        }
        let zero = PadicNumber::zero(self.space.prime);
        self.coefficients
            .keys()
            .chain(other.coefficients.keys())
            .all(|k| {
                let a = self.coefficients.get(k).unwrap_or(&zero);
                let b = other.coefficients.get(k).unwrap_or(&zero);
                a.agrees_with(b)
            })
    }
}

/// `‖f‖_ρ` as a free function.
pub fn rho_norm(f: &AnalyticFunction) -> LogNorm {
    f.rho_norm()
}
