//! Bounded linear operators: matrices over `Q_p` and the differential
//! operators `f ↦ Σ_β a_β D^β f` on `A_ρ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::analytic_space::{AnalyticFunction, AnalyticSpace, MultiIndex};
use crate::error::{Error, Result};
use crate::padic_arith::{LogNorm, PadicNumber, Prime};
use crate::spaces::{BanachElement, Vector};

/// How a [`GrowthCertificate`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateMethod {
    /// An exact zero iterate was reached.
    EventuallyZero,
    /// Recurrence from the characteristic polynomial (Cayley–Hamilton).
    CharacteristicPolynomial,
    /// `‖A^{k}x‖ ≤ ‖A‖^{k-K} ‖A^K x‖`.
    OperatorNorm,
}

impl fmt::Display for CertificateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateMethod::EventuallyZero => "eventually_zero",
            CertificateMethod::CharacteristicPolynomial => "characteristic_polynomial",
            CertificateMethod::OperatorNorm => "operator_norm",
        };
        f.write_str(s)
    }
}

/// A proven bound `‖A^k x‖ ≤ c · α^k` for every `k ≥ valid_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub alpha: LogNorm,
    pub c: LogNorm,
    pub valid_from: usize,
    pub method: CertificateMethod,
}

impl GrowthCertificate {
    pub fn eventually_zero(first_zero: usize) -> Self {
        GrowthCertificate {
            alpha: LogNorm::Zero,
            c: LogNorm::Zero,
            valid_from: first_zero,
            method: CertificateMethod::EventuallyZero,
        }
    }

    /// Bound for `‖A^k x‖`, valid for `k ≥ valid_from`.
    pub fn bound_at(&self, k: u64) -> LogNorm {
        self.c.mul(&self.alpha.pow(k))
    }

    /// Certificate from `‖A‖` and the last observed iterate norm.
    pub fn from_operator_norm(op_norm: &LogNorm, iterate_norms: &[LogNorm]) -> Self {
        let depth = iterate_norms.len() - 1;
        if op_norm.is_zero() {
            return GrowthCertificate {
                alpha: LogNorm::Zero,
                c: LogNorm::Zero,
                valid_from: 1.min(depth + 1),
                method: CertificateMethod::OperatorNorm,
            };
        }
        let last = &iterate_norms[depth];
        GrowthCertificate {
            alpha: op_norm.clone(),
            c: last.div(&op_norm.pow(depth as u64)),
            valid_from: depth,
            method: CertificateMethod::OperatorNorm,
        }
    }
}

/// A bounded linear operator on a non-archimedean Banach space.
pub trait LinearOperator: Clone + fmt::Debug {
    type Element: BanachElement;

    fn prime(&self) -> Prime;

    fn apply(&self, x: &Self::Element) -> Result<Self::Element>;

    /// For matrices the exact induced sup-norm; for differential operators
    /// the bound `max_β ρ^{-|β|} ‖a_β‖_ρ`.
    fn operator_norm_bound(&self) -> LogNorm;

    /// Rigorous growth model for `A^k x` from the observed norms
    /// `‖A^0 x‖, …, ‖A^K x‖` (upper bounds are acceptable).
    fn growth_certificate(&self, iterate_norms: &[LogNorm]) -> GrowthCertificate {
        GrowthCertificate::from_operator_norm(&self.operator_norm_bound(), iterate_norms)
    }

    /// The type `σ(x; A)` when it is known in closed form.
    fn closed_form_type(&self, _x: &Self::Element) -> Option<LogNorm> {
        None
    }
}

/// `A^k x`.
pub fn power_apply<A: LinearOperator>(a: &A, x: &A::Element, k: usize) -> Result<A::Element> {
    let mut y = x.clone();
    for _ in 0..k {
        y = a.apply(&y)?;
    }
    Ok(y)
}

pub fn operator_norm_bound<A: LinearOperator>(a: &A) -> LogNorm {
    a.operator_norm_bound()
}

/// Square matrix over `Q_p` acting on `Q_p^n` with the sup norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOperator {
    prime: Prime,
    rows: Vec<Vec<PadicNumber>>,
}

impl MatrixOperator {
    pub fn new(prime: Prime, rows: Vec<Vec<PadicNumber>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|x| x.prime() != prime) {
                return Err(Error::PrimeMismatch(prime.get(), bad.prime().get()));
            }
        }
        Ok(MatrixOperator { prime, rows })
    }

    pub fn from_rationals(prime: Prime, rows: &[Vec<(i64, i64)>], precision: u32) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(n, d)| PadicNumber::from_rational(n, d, prime, precision))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixOperator::new(prime, rows)
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        Self::diagonal(prime, vec![PadicNumber::one(prime, 1); n])
    }

    pub fn zero(prime: Prime, n: usize) -> Self {
        Self::diagonal(prime, vec![PadicNumber::zero(prime); n])
    }

    pub fn diagonal(prime: Prime, diag: Vec<PadicNumber>) -> Self {
        let n = diag.len();
        let rows = diag
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                let mut row = vec![PadicNumber::zero(prime); n];
                row[i] = d;
                row
            })
            .collect();
        MatrixOperator { prime, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<PadicNumber>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &PadicNumber {
        &self.rows[i][j]
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r[..i].iter().all(PadicNumber::is_exact_zero))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r[i + 1..].iter().all(PadicNumber::is_exact_zero))
    }

    /// Coefficients of `det(tI - A)`, leading coefficient first, by
    /// Berkowitz's division-free recursion (no precision is lost to division).
    pub fn characteristic_polynomial(&self) -> Result<Vec<PadicNumber>> {
        charpoly(&self.rows, self.prime)
    }

    /// Smallest `α` with `|a_i| ≤ α^{n-i}` for all coefficients of the
    /// characteristic polynomial `t^n + a_{n-1}t^{n-1} + … + a_0`: the largest
    /// slope of its Newton polygon, i.e. the spectral radius.
    pub fn spectral_radius_bound(&self) -> Result<LogNorm> {
        let chi = self.characteristic_polynomial()?;
        let n = self.dim();
        let mut alpha = LogNorm::Zero;
        for (idx, a) in chi.iter().enumerate().skip(1) {
            if a.is_exact_zero() {
                continue;
            }
            // idx = n - i for the coefficient a_i
            let q = BigRational::new(BigInt::from(1), BigInt::from(idx as i64));
            alpha = alpha.max(a.norm().scale_exponent(&q));
        }
        debug_assert_eq!(chi.len(), n + 1);
        Ok(alpha)
    }

    /// A basis vector `e_j` with `‖A e_j‖ = ‖A‖`, as the index `j`.
    pub fn norm_witness(&self) -> usize {
        let norm = self.operator_norm_bound();
        (0..self.dim())
            .find(|&j| self.rows.iter().any(|r| r[j].norm() == norm))
            .unwrap_or(0)
    }

    fn diagonal_norms(&self) -> Option<Vec<LogNorm>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d = &r[i];
                if d.is_zero_at_precision() {
                    None
                } else {
                    Some(d.norm())
                }
            })
            .collect()
    }

    pub fn parse_rows(rows: &[Vec<String>], prime: Prime, precision: u32) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| PadicNumber::parse(s, prime, precision))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixOperator::new(prime, rows)
    }
}

fn charpoly(m: &[Vec<PadicNumber>], prime: Prime) -> Result<Vec<PadicNumber>> {
    let n = m.len();
    let one = PadicNumber::one(prime, 1);
    if n == 0 {
        return Ok(vec![one]);
    }
    let sub: Vec<Vec<PadicNumber>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    let q = charpoly(&sub, prime)?;
    let row: &[PadicNumber] = &m[0][1..];
    let mut v = Vec::with_capacity(n + 1);
    v.push(one);
    v.push(m[0][0].neg());
    let mut w: Vec<PadicNumber> = m[1..].iter().map(|r| r[0].clone()).collect();
    for t in 0..n.saturating_sub(1) {
        v.push(dot(row, &w)?.neg());
        if t + 1 < n - 1 {
            w = mat_vec(&sub, &w)?;
        }
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut acc = PadicNumber::zero(prime);
        for j in 0..q.len().min(i + 1) {
            acc = acc.add(&v[i - j].mul(&q[j])?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

fn dot(a: &[PadicNumber], b: &[PadicNumber]) -> Result<PadicNumber> {
    let mut acc = PadicNumber::zero(a.first().map(|x| x.prime()).unwrap_or_else(|| b[0].prime()));
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Ok(acc)
}

fn mat_vec(m: &[Vec<PadicNumber>], x: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
    m.iter().map(|r| dot(r, x)).collect()
}

impl LinearOperator for MatrixOperator {
    type Element = Vector;

    fn prime(&self) -> Prime {
        self.prime
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), x.prime().get()));
        }
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Vector::new(self.prime, mat_vec(&self.rows, x.entries())?)
    }

    /// Induced sup-norm: the largest entry norm, attained on a basis vector.
    fn operator_norm_bound(&self) -> LogNorm {
        LogNorm::max_of(self.rows.iter().flatten().map(|x| x.norm()).collect::<Vec<_>>().iter())
    }

    fn growth_certificate(&self, iterate_norms: &[LogNorm]) -> GrowthCertificate {
        let fallback =
            GrowthCertificate::from_operator_norm(&self.operator_norm_bound(), iterate_norms);
        let n = self.dim();
        let depth = iterate_norms.len() - 1;
        let alpha = match self.spectral_radius_bound() {
            Ok(a) => a,
            Err(_) => return fallback,
        };
        if depth + 1 < n || alpha > fallback.alpha {
            return fallback;
        }
        let start = depth + 1 - n;
        if alpha.is_zero() {
            // A^n = 0
            return GrowthCertificate {
                alpha,
                c: LogNorm::Zero,
                valid_from: n,
                method: CertificateMethod::CharacteristicPolynomial,
            };
        }
        let c = LogNorm::max_of(
            (start..=depth)
                .map(|j| iterate_norms[j].div(&alpha.pow(j as u64)))
                .collect::<Vec<_>>()
                .iter(),
        );
        GrowthCertificate {
            alpha,
            c,
            valid_from: start,
            method: CertificateMethod::CharacteristicPolynomial,
        }
    }

    /// Diagonal matrices, and triangular ones whose dominant diagonal entry
    /// sits at the extreme nonzero coordinate of `x`.
    fn closed_form_type(&self, x: &Vector) -> Option<LogNorm> {
        if x.dim() != self.dim() || x.entries().iter().any(PadicNumber::is_zero_at_precision) {
            return None;
        }
        let diag = self.diagonal_norms()?;
        let support: Vec<usize> = (0..self.dim())
            .filter(|&i| x.get(i).is_certified_nonzero())
            .collect();
        if support.is_empty() {
            return Some(LogNorm::Zero);
        }
        let upper = self.is_upper_triangular();
        let lower = self.is_lower_triangular();
        if upper && lower {
            return Some(LogNorm::max_of(support.iter().map(|&i| &diag[i])));
        }
        if upper {
            let j = *support.last().unwrap();
            let m = LogNorm::max_of(&diag[..=j]);
            return (diag[j] == m).then_some(m);
        }
        if lower {
            let j = support[0];
            let m = LogNorm::max_of(&diag[j..]);
            return (diag[j] == m).then_some(m);
        }
        None
    }
}

impl fmt::Display for MatrixOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `f ↦ Σ_β a_β D^β f` on `A_ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialOperator {
    space: AnalyticSpace,
    terms: BTreeMap<MultiIndex, AnalyticFunction>,
    max_order: u32,
}

impl DifferentialOperator {
    /// `max_order` defaults to the number of variables.
    pub fn new(
        space: &AnalyticSpace,
        terms: impl IntoIterator<Item = (MultiIndex, AnalyticFunction)>,
        max_order: Option<u32>,
    ) -> Result<Self> {
        let cap = max_order.unwrap_or(space.variables as u32);
        let mut map: BTreeMap<MultiIndex, AnalyticFunction> = BTreeMap::new();
        for (beta, a) in terms {
            if beta.len() != space.variables {
                return Err(Error::DimensionMismatch {
                    expected: space.variables,
                    found: beta.len(),
                });
            }
            if beta.degree() > cap {
                return Err(Error::OrderExceedsCap {
                    order: beta.degree(),
                    cap,
                });
            }
            if a.space() != space {
                return Err(Error::SpaceMismatch(format!(
                    "coefficient of D^{beta} lives in a different A_rho"
                )));
            }
            let a = match map.remove(&beta) {
                Some(prev) => prev.add(&a)?,
                None => a,
            };
            map.insert(beta, a);
        }
        Ok(DifferentialOperator {
            space: space.clone(),
            terms: map,
            max_order: cap,
        })
    }

    pub fn space(&self) -> &AnalyticSpace {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, AnalyticFunction> {
        &self.terms
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Largest coefficient degree, used for degree bookkeeping.
    pub fn max_coefficient_degree(&self) -> u32 {
        self.terms.values().filter_map(|a| a.degree()).max().unwrap_or(0)
    }
}

impl LinearOperator for DifferentialOperator {
    type Element = AnalyticFunction;

    fn prime(&self) -> Prime {
        self.space.prime
    }

    fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        if f.space() != &self.space {
            return Err(Error::SpaceMismatch(
                "function and operator live in different A_rho".into(),
            ));
        }
        let mut acc = AnalyticFunction::zero(&self.space);
        for (beta, a) in &self.terms {
            acc = acc.add(&a.multiply(&f.derivative(beta)?)?)?;
        }
        Ok(acc)
    }

    fn operator_norm_bound(&self) -> LogNorm {
        LogNorm::max_of(
            self.terms
                .iter()
                .map(|(beta, a)| a.rho_norm().div(&self.space.weight(beta.degree())))
                .collect::<Vec<_>>()
                .iter(),
        )
    }
}

/// Either kind of operator, for callers that pick the kind at run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorSpec {
    Matrix(MatrixOperator),
    Differential(DifferentialOperator),
}

/// Element of whichever space an [`OperatorSpec`] acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceElement {
    Vector(Vector),
    Function(AnalyticFunction),
}

fn kind_mismatch() -> Error {
    Error::SpaceMismatch("vector and analytic function mixed".into())
}

impl BanachElement for SpaceElement {
    fn prime(&self) -> Prime {
        match self {
            SpaceElement::Vector(v) => v.prime(),
            SpaceElement::Function(f) => f.prime(),
        }
    }

    fn norm(&self) -> LogNorm {
        match self {
            SpaceElement::Vector(v) => v.norm(),
            SpaceElement::Function(f) => f.norm(),
        }
    }

    fn norm_is_exact(&self) -> bool {
        match self {
            SpaceElement::Vector(v) => v.norm_is_exact(),
            SpaceElement::Function(f) => f.norm_is_exact(),
        }
    }

    fn certified_norm(&self) -> LogNorm {
        match self {
            SpaceElement::Vector(v) => v.certified_norm(),
            SpaceElement::Function(f) => f.certified_norm(),
        }
    }

    fn is_exact_zero(&self) -> bool {
        match self {
            SpaceElement::Vector(v) => v.is_exact_zero(),
            SpaceElement::Function(f) => f.is_exact_zero(),
        }
    }

    fn zero_like(&self) -> Self {
        match self {
            SpaceElement::Vector(v) => SpaceElement::Vector(v.zero_like()),
            SpaceElement::Function(f) => SpaceElement::Function(f.zero_like()),
        }
    }

    fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (SpaceElement::Vector(a), SpaceElement::Vector(b)) => Ok(SpaceElement::Vector(a.add(b)?)),
            (SpaceElement::Function(a), SpaceElement::Function(b)) => {
                Ok(SpaceElement::Function(a.add(b)?))
            }
            _ => Err(kind_mismatch()),
        }
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (SpaceElement::Vector(a), SpaceElement::Vector(b)) => Ok(SpaceElement::Vector(a.sub(b)?)),
            (SpaceElement::Function(a), SpaceElement::Function(b)) => {
                Ok(SpaceElement::Function(a.sub(b)?))
            }
            _ => Err(kind_mismatch()),
        }
    }

    fn scale(&self, c: &PadicNumber) -> Result<Self> {
        Ok(match self {
            SpaceElement::Vector(v) => SpaceElement::Vector(v.scale(c)?),
            SpaceElement::Function(f) => SpaceElement::Function(f.scale(c)?),
        })
    }

    fn div_scalar(&self, c: &PadicNumber) -> Result<Self> {
        Ok(match self {
            SpaceElement::Vector(v) => SpaceElement::Vector(v.div_scalar(c)?),
            SpaceElement::Function(f) => SpaceElement::Function(f.div_scalar(c)?),
        })
    }

    fn absorb_error(&self, error: &LogNorm) -> Self {
        match self {
            SpaceElement::Vector(v) => SpaceElement::Vector(v.absorb_error(error)),
            SpaceElement::Function(f) => SpaceElement::Function(f.absorb_error(error)),
        }
    }

    fn precision_floor(&self) -> LogNorm {
        match self {
            SpaceElement::Vector(v) => v.precision_floor(),
            SpaceElement::Function(f) => f.precision_floor(),
        }
    }

    fn agrees_with(&self, other: &Self) -> bool {
        match (self, other) {
            (SpaceElement::Vector(a), SpaceElement::Vector(b)) => a.agrees_with(b),
            (SpaceElement::Function(a), SpaceElement::Function(b)) => a.agrees_with(b),
            _ => false,
        }
    }
}

impl LinearOperator for OperatorSpec {
    type Element = SpaceElement;

    fn prime(&self) -> Prime {
        match self {
            OperatorSpec::Matrix(m) => m.prime(),
            OperatorSpec::Differential(d) => d.prime(),
        }
    }

    fn apply(&self, x: &SpaceElement) -> Result<SpaceElement> {
        match (self, x) {
            (OperatorSpec::Matrix(m), SpaceElement::Vector(v)) => Ok(SpaceElement::Vector(m.apply(v)?)),
            (OperatorSpec::Differential(d), SpaceElement::Function(f)) => {
                Ok(SpaceElement::Function(d.apply(f)?))
            }
            _ => Err(kind_mismatch()),
        }
    }

    fn operator_norm_bound(&self) -> LogNorm {
        match self {
            OperatorSpec::Matrix(m) => m.operator_norm_bound(),
            OperatorSpec::Differential(d) => d.operator_norm_bound(),
        }
    }

    fn growth_certificate(&self, iterate_norms: &[LogNorm]) -> GrowthCertificate {
        match self {
            OperatorSpec::Matrix(m) => m.growth_certificate(iterate_norms),
            OperatorSpec::Differential(d) => d.growth_certificate(iterate_norms),
        }
    }

    fn closed_form_type(&self, x: &SpaceElement) -> Option<LogNorm> {
        match (self, x) {
            (OperatorSpec::Matrix(m), SpaceElement::Vector(v)) => m.closed_form_type(v),
            _ => None,
        }
    }
}
