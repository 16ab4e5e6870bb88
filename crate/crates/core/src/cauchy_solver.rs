//! The Cauchy problem `y' = Ay`, `y(0) = y₀` solved by the series
//! `y(z) = Σ_k A^k y₀ z^k / k!`, with its radius, certified tail bounds, the
//! ODE residual and the continuous-dependence estimate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exp_type::{
    capped, default_window, estimate_type, NormSequence, TypeEstimate, TypeMethod,
};
use crate::operators::{GrowthCertificate, LinearOperator};
use crate::padic_arith::{vp_factorial, LogNorm, PadicNumber, Prime};
use crate::spaces::{BanachElement, Disk};

/// Smallest depth accepted by [`build_solution`].
pub const MIN_DEPTH: usize = 4;

/// Default number of sampled norm shells in [`wellposedness_check`].
pub const DEFAULT_SHELLS: usize = 8;

/// `N + v_p(K!)`: the precision inputs need so that `c_K` keeps `N` digits
/// after the divisions by `1, 2, …, K`.
pub fn working_precision(precision: u32, depth: usize, p: Prime) -> u32 {
    precision + vp_factorial(depth as u64, p) as u32
}

/// `c_0, …, c_K` with `c_k = A^k y₀ / k!`, plus everything derived from them.
#[derive(Clone, Debug)]
pub struct SeriesSolution<A: LinearOperator> {
    operator: A,
    coefficients: Vec<A::Element>,
    iterate_norms: NormSequence,
    sigma: TypeEstimate,
    radius: LogNorm,
    certificate: GrowthCertificate,
}

/// Error bound for truncating the series after `c_K z^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailBound {
    pub at_point: PadicNumber,
    pub depth: usize,
    pub bound: LogNorm,
}

#[derive(Clone, Debug)]
pub struct Evaluation<E> {
    /// `Σ_{k ≤ K} c_k z^k`.
    pub partial_sum: E,
    pub tail: TailBound,
    /// The partial sum with the tail folded into its precision.
    pub value: E,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    /// Upper bound on `‖y_K'(z) - A y_K(z)‖` as computed.
    pub norm: LogNorm,
    /// The part of `norm` carried by certified-nonzero components.
    pub certified: LogNorm,
    /// Combined tail bound of the derivative series and of `A` applied to
    /// the tail of `y`.
    pub bound: LogNorm,
}

impl Residual {
    pub fn within_bound(&self) -> bool {
        self.certified <= self.bound
    }
}

/// Builds the series solution to depth `K` with window `K/4` for the type estimate.
pub fn build_solution<A: LinearOperator>(
    a: &A,
    y0: &A::Element,
    depth: usize,
) -> Result<SeriesSolution<A>> {
    build_solution_with_window(a, y0, depth, default_window(depth))
}

pub fn build_solution_with_window<A: LinearOperator>(
    a: &A,
    y0: &A::Element,
    depth: usize,
    window: usize,
) -> Result<SeriesSolution<A>> {
    if depth < MIN_DEPTH {
        return Err(Error::InsufficientDepth(format!(
            "depth {depth} is below the minimum {MIN_DEPTH}"
        )));
    }
    if a.prime() != y0.prime() {
        return Err(Error::PrimeMismatch(a.prime().get(), y0.prime().get()));
    }
    let p = a.prime();
    let (coefficients, norms) = series_terms(a, y0, depth, true)?;
    let iterate_norms = NormSequence::from_norms(norms)?;
    let certificate = match iterate_norms.first_zero() {
        Some(z) => GrowthCertificate::eventually_zero(z),
        None => a.growth_certificate(iterate_norms.norms()),
    };
    let sigma = if iterate_norms.eventually_zero() {
        estimate_type(&iterate_norms, window)?
    } else if let Some(s) = a.closed_form_type(y0) {
        TypeEstimate {
            sigma: s,
            method: TypeMethod::ExactClosedForm,
            window,
            depth,
        }
    } else {
        capped(estimate_type(&iterate_norms, window)?, &a.operator_norm_bound())
    };
    let radius = radius_from_type(&sigma.sigma, p);
    Ok(SeriesSolution {
        operator: a.clone(),
        coefficients,
        iterate_norms,
        sigma,
        radius,
        certificate,
    })
}

/// `r = p^{-1/(p-1)} / σ`; unbounded for `σ = 0`.
pub fn radius_from_type(sigma: &LogNorm, p: Prime) -> LogNorm {
    LogNorm::exp_radius(p).div(sigma)
}

/// `1 / limsup ‖c_n‖^{1/n}` with the limsup taken over the last `window`
/// coefficients; unbounded when the coefficients end in exact zeros.
pub fn radius_from_coefficients(norms: &[LogNorm], window: usize) -> Result<LogNorm> {
    let depth = norms.len().saturating_sub(1);
    if depth < MIN_DEPTH {
        return Err(Error::InsufficientDepth(format!(
            "{} coefficients, need at least {}",
            norms.len(),
            MIN_DEPTH + 1
        )));
    }
    if window == 0 || window > depth {
        return Err(Error::InsufficientDepth(format!(
            "window {window} needs 1 <= window <= depth {depth}"
        )));
    }
    if norms[depth].is_zero() {
        return Ok(LogNorm::Unbounded);
    }
    let limsup = (depth + 1 - window..=depth)
        .filter_map(|n| {
            norms[n]
                .exponent()
                .map(|e| e / BigRational::from_integer(BigInt::from(n)))
        })
        .max()
        .expect("last coefficient is nonzero");
    Ok(LogNorm::Finite(-limsup))
}

impl<A: LinearOperator> SeriesSolution<A> {
    pub fn operator(&self) -> &A {
        &self.operator
    }

    pub fn initial(&self) -> &A::Element {
        &self.coefficients[0]
    }

    pub fn coefficients(&self) -> &[A::Element] {
        &self.coefficients
    }

    pub fn depth(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn prime(&self) -> Prime {
        self.operator.prime()
    }

    /// `‖A^k y₀‖` for `k ≤ K`.
    pub fn iterate_norms(&self) -> &NormSequence {
        &self.iterate_norms
    }

    pub fn coefficient_norms(&self) -> Vec<LogNorm> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }

    pub fn sigma(&self) -> &TypeEstimate {
        &self.sigma
    }

    pub fn radius(&self) -> &LogNorm {
        &self.radius
    }

    pub fn disk(&self) -> Disk {
        Disk::open(self.radius.clone())
    }

    pub fn certificate(&self) -> &GrowthCertificate {
        &self.certificate
    }

    /// Radius read off the coefficients with the solution's window.
    pub fn coefficient_radius(&self) -> Result<LogNorm> {
        radius_from_coefficients(&self.coefficient_norms(), self.sigma.window)
    }

    /// `k c_k = A c_{k-1}` for every `k`, at the tracked precision.
    pub fn recurrence_holds(&self) -> Result<bool> {
        let p = self.prime();
        for k in 1..self.coefficients.len() {
            let lhs = self.coefficients[k].scale(&PadicNumber::from_integer(k as u64, p, 1))?;
            let rhs = self.operator.apply(&self.coefficients[k - 1])?;
            if !lhs.agrees_with(&rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `α |z| p^{1/(p-1)}`: the ratio of consecutive term bounds.
    fn term_ratio(&self, z: &LogNorm) -> LogNorm {
        self.certificate
            .alpha
            .mul(z)
            .div(&LogNorm::exp_radius(self.prime()))
    }

    /// `sup_{k > K} ‖c_k z^k‖` from the growth certificate and
    /// `1/|k!| ≤ p^{k/(p-1)}`.
    pub fn tail_bound(&self, z: &PadicNumber) -> TailBound {
        let depth = self.depth();
        TailBound {
            at_point: z.clone(),
            depth,
            bound: geometric_sup(&self.certificate.c, &self.term_ratio(&z.norm()), depth as u64 + 1),
        }
    }

    fn check_point(&self, z: &PadicNumber) -> Result<()> {
        if z.prime() != self.prime() {
            return Err(Error::PrimeMismatch(self.prime().get(), z.prime().get()));
        }
        if !self.disk().contains(z) {
            return Err(Error::OutsideDisk {
                norm: z.norm().exponent_string(),
                radius: self.radius.exponent_string(),
            });
        }
        Ok(())
    }

    /// `Σ_{k ≤ K} c_k z^k` by Horner's rule, without the disk check.
    pub fn partial_sum(&self, z: &PadicNumber, depth: usize) -> Result<A::Element> {
        let depth = depth.min(self.depth());
        if z.is_exact_zero() {
            return Ok(self.coefficients[0].clone());
        }
        let mut acc = self.coefficients[depth].clone();
        for k in (0..depth).rev() {
            acc = acc.scale(z)?.add(&self.coefficients[k])?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, z: &PadicNumber) -> Result<Evaluation<A::Element>> {
        self.check_point(z)?;
        let partial_sum = self.partial_sum(z, self.depth())?;
        let tail = self.tail_bound(z);
        let value = partial_sum.absorb_error(&tail.bound);
        Ok(Evaluation {
            partial_sum,
            tail,
            value,
        })
    }

    /// `y_K'(z) - A y_K(z)` from the two truncated series.
    pub fn residual(&self, z: &PadicNumber) -> Result<Residual> {
        self.check_point(z)?;
        let p = self.prime();
        let depth = self.depth();
        let mut derivative = self.coefficients[0].zero_like();
        if z.is_exact_zero() {
            derivative = self.coefficients[1].clone();
        } else {
            for n in (0..depth).rev() {
                let term = self.coefficients[n + 1].scale(&PadicNumber::from_integer(n as u64 + 1, p, 1))?;
                derivative = derivative.scale(z)?.add(&term)?;
            }
        }
        let value = self.partial_sum(z, depth)?;
        let r = derivative.sub(&self.operator.apply(&value)?)?;
        // Σ_{n ≥ K} ‖A^{n+1}y₀‖ |z|^n / |n!| ≤ c α (α|z|p^{1/(p-1)})^n
        let ratio = self.term_ratio(&z.norm());
        let derivative_tail = geometric_sup(
            &self.certificate.c.mul(&self.certificate.alpha),
            &ratio,
            depth as u64,
        );
        let image_tail = self.operator.operator_norm_bound().mul(&self.tail_bound(z).bound);
        Ok(Residual {
            norm: r.norm(),
            certified: r.certified_norm(),
            bound: derivative_tail.max(image_tail),
        })
    }
}

/// `c_k = A c_{k-1} / k` for `k ≤ depth` with `‖A^k y₀‖ = ‖c_k‖ |k!|`.
/// With `strict` an undetermined norm is an error; otherwise the norms are
/// upper bounds.
fn series_terms<A: LinearOperator>(
    a: &A,
    y0: &A::Element,
    depth: usize,
    strict: bool,
) -> Result<(Vec<A::Element>, Vec<LogNorm>)> {
    let p = a.prime();
    let mut coefficients: Vec<A::Element> = Vec::with_capacity(depth + 1);
    let mut norms = Vec::with_capacity(depth + 1);
    coefficients.push(y0.clone());
    for k in 0..=depth {
        if k > 0 {
            let prev = &coefficients[k - 1];
            let next = if prev.is_exact_zero() {
                prev.clone()
            } else {
                a.apply(prev)?
                    .div_scalar(&PadicNumber::from_integer(k as u64, p, 1))?
            };
            coefficients.push(next);
        }
        let c = &coefficients[k];
        if strict && !c.is_exact_zero() && !c.norm_is_exact() {
            return Err(Error::PrecisionExhausted(format!(
                "norm of c_{k} is not determined at the working precision"
            )));
        }
        norms.push(c.norm().mul(&LogNorm::from_int(-(vp_factorial(k as u64, p) as i64))));
    }
    Ok((coefficients, norms))
}

/// `sup_{k ≥ start} c · ratio^k`.
fn geometric_sup(c: &LogNorm, ratio: &LogNorm, start: u64) -> LogNorm {
    if c.is_zero() || ratio.is_zero() {
        return LogNorm::Zero;
    }
    if *ratio >= LogNorm::one() {
        return LogNorm::Unbounded;
    }
    c.mul(&ratio.pow(start))
}

/// One sampled point of the continuous-dependence estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellposednessRow {
    pub perturbation: usize,
    pub z: PadicNumber,
    /// Bound on `‖y_n(z) - y(z)‖`, tail included.
    pub lhs: LogNorm,
    /// Lower bound on `‖y_{n,0} - y₀‖_α`.
    pub alpha_norm: LogNorm,
    pub status: RowStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Holds,
    Violated,
    /// The initial difference vanishes at the working precision but is not
    /// known to be zero.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellposednessReport {
    pub alpha: LogNorm,
    /// `δ = p^{-1/(p-1)} / α`.
    pub delta: LogNorm,
    pub epsilon: BigRational,
    /// The sampled points: `0` and `p^m` for consecutive `m` inside `(1-ε)δ`.
    pub points: Vec<PadicNumber>,
    pub rows: Vec<WellposednessRow>,
    /// Largest `lhs / ‖y_{n,0} - y₀‖_α` seen (to be compared with `1/ε`).
    pub worst_ratio: LogNorm,
}

impl WellposednessReport {
    fn count(&self, status: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn violations(&self) -> usize {
        self.count(RowStatus::Violated)
    }

    pub fn undetermined(&self) -> usize {
        self.count(RowStatus::Undetermined)
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

/// Checks `‖y_n(z) - y(z)‖ ≤ ε^{-1} ‖y_{n,0} - y₀‖_α` with `α = ‖A‖` on one
/// point per norm shell of the disk `|z| ≤ (1-ε)δ`.
pub fn wellposedness_check<A: LinearOperator>(
    a: &A,
    y0: &A::Element,
    perturbations: &[A::Element],
    epsilon: &BigRational,
    depth: usize,
    shells: usize,
) -> Result<WellposednessReport> {
    if !(epsilon > &BigRational::zero() && epsilon < &BigRational::one()) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} is not in (0, 1)")));
    }
    let p = a.prime();
    let mut alpha = a.operator_norm_bound();
    if alpha.is_zero() {
        alpha = LogNorm::one();
    }
    let delta = LogNorm::exp_radius(p).div(&alpha);
    let points = shell_points(p, &delta, epsilon, shells)?;
    let inv_eps = epsilon.recip();
    let mut rows = Vec::new();
    let mut worst_ratio = LogNorm::Zero;
    for (i, y1) in perturbations.iter().enumerate() {
        let d = y1.sub(y0)?;
        // ‖A‖ ≤ α gives ‖d‖_α = ‖d‖; the certified part bounds it from below.
        let rhs = d.certified_norm();
        let undetermined = rhs.is_zero() && !d.is_exact_zero();
        let (terms, norms) = series_terms(a, &d, depth, false)?;
        let cert = match norms.iter().position(LogNorm::is_zero) {
            Some(k) => GrowthCertificate::eventually_zero(k),
            None => a.growth_certificate(&norms),
        };
        for z in &points {
            let mut sum = terms[depth].clone();
            for k in (0..depth).rev() {
                sum = sum.scale(z)?.add(&terms[k])?;
            }
            let ratio = cert.alpha.mul(&z.norm()).div(&LogNorm::exp_radius(p));
            let tail = geometric_sup(&cert.c, &ratio, depth as u64 + 1);
            let lhs = sum.norm().max(tail);
            let status = if lhs.le_scaled(&rhs, &inv_eps, p) {
                RowStatus::Holds
            } else if undetermined {
                RowStatus::Undetermined
            } else {
                RowStatus::Violated
            };
            if !rhs.is_zero() {
                worst_ratio = worst_ratio.max(lhs.div(&rhs));
            }
            rows.push(WellposednessRow {
                perturbation: i,
                z: z.clone(),
                lhs,
                alpha_norm: rhs.clone(),
                status,
            });
        }
    }
    Ok(WellposednessReport {
        alpha,
        delta,
        epsilon: epsilon.clone(),
        points,
        rows,
        worst_ratio,
    })
}

/// `0` and `p^m, p^{m+1}, …` (`count` of them) for the least `m` with
/// `p^{-m} ≤ (1-ε)δ`.
pub fn shell_points(
    p: Prime,
    delta: &LogNorm,
    epsilon: &BigRational,
    count: usize,
) -> Result<Vec<PadicNumber>> {
    let shrink = BigRational::one() - epsilon;
    let d = delta
        .exponent()
        .ok_or_else(|| Error::InvalidArgument(format!("disk radius {delta} is not finite")))?;
    let mut m = (-d).ceil().to_integer();
    while !LogNorm::Finite(BigRational::from_integer(-m.clone())).le_scaled(delta, &shrink, p) {
        m += 1;
    }
    let m: i64 = m
        .try_into()
        .map_err(|_| Error::InvalidArgument("shell exponent out of range".into()))?;
    let mut points = vec![PadicNumber::zero(p)];
    for j in 0..count as i64 {
        points.push(PadicNumber::p_power(p, m + j, 1));
    }
    Ok(points)
}
