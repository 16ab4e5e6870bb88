//! Entire vectors of exponential type: the norm sequence `‖A^k x‖`, the type
//! `σ(x; A) = limsup ‖A^k x‖^{1/k}`, membership in `E_α(A)` and the norm
//! `‖x‖_α = sup_k ‖A^k x‖ / α^k`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::padic_arith::LogNorm;
use crate::spaces::BanachElement;

/// Depth used when the caller does not choose one.
pub const DEFAULT_DEPTH: usize = 64;

/// `K/4`, but at least one term.
pub fn default_window(depth: usize) -> usize {
    (depth / 4).max(1)
}

/// `‖A^k x‖` for `k = 0..=K`, as magnitudes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSequence {
    norms: Vec<LogNorm>,
    first_zero: Option<usize>,
}

impl NormSequence {
    /// From precomputed norms. Everything after the first `Zero` is zero.
    pub fn from_norms(norms: Vec<LogNorm>) -> Result<Self> {
        if norms.is_empty() {
            return Err(Error::InsufficientDepth("empty norm sequence".into()));
        }
        let first_zero = norms.iter().position(LogNorm::is_zero);
        let mut norms = norms;
        if let Some(z) = first_zero {
            for e in &mut norms[z..] {
                *e = LogNorm::Zero;
            }
        }
        Ok(NormSequence { norms, first_zero })
    }

    pub fn norms(&self) -> &[LogNorm] {
        &self.norms
    }

    pub fn depth(&self) -> usize {
        self.norms.len() - 1
    }

    pub fn eventually_zero(&self) -> bool {
        self.first_zero.is_some()
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.first_zero
    }

    /// Exponent of `‖A^k x‖^{1/k}`, `None` for `k = 0` or a zero term.
    pub fn root_exponent(&self, k: usize) -> Option<BigRational> {
        if k == 0 {
            return None;
        }
        self.norms[k]
            .exponent()
            .map(|e| e / BigRational::from_integer(BigInt::from(k)))
    }
}

/// Iterates `A` on `x` and records the norms. Stops at an exact zero.
pub fn norm_sequence<A: LinearOperator>(
    a: &A,
    x: &A::Element,
    depth: usize,
) -> Result<NormSequence> {
    if depth < 1 {
        return Err(Error::InsufficientDepth("depth must be at least 1".into()));
    }
    let mut norms = Vec::with_capacity(depth + 1);
    let mut y = x.clone();
    for k in 0..=depth {
        if y.is_exact_zero() {
            norms.resize(depth + 1, LogNorm::Zero);
            break;
        }
        if !y.norm_is_exact() {
            return Err(Error::PrecisionExhausted(format!(
                "norm of A^{k} x is below the working precision"
            )));
        }
        norms.push(y.norm());
        if k < depth {
            y = a.apply(&y)?;
        }
    }
    NormSequence::from_norms(norms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeMethod {
    ExactClosedForm,
    EventuallyZero,
    WindowLimsup,
}

impl fmt::Display for TypeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeMethod::ExactClosedForm => "exact_closed_form",
            TypeMethod::EventuallyZero => "eventually_zero",
            TypeMethod::WindowLimsup => "window_limsup",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeEstimate {
    pub sigma: LogNorm,
    pub method: TypeMethod,
    pub window: usize,
    pub depth: usize,
}

/// `σ ≈ max_{K-w < k ≤ K} ‖A^k x‖^{1/k}`; zero for eventually-zero sequences.
pub fn estimate_type(seq: &NormSequence, window: usize) -> Result<TypeEstimate> {
    let depth = seq.depth();
    if window == 0 || window > depth {
        return Err(Error::InsufficientDepth(format!(
            "window {window} needs 1 <= window <= depth {depth}"
        )));
    }
    if seq.eventually_zero() {
        return Ok(TypeEstimate {
            sigma: LogNorm::Zero,
            method: TypeMethod::EventuallyZero,
            window,
            depth,
        });
    }
    let sigma = (depth + 1 - window..=depth)
        .filter_map(|k| seq.root_exponent(k))
        .max()
        .map(LogNorm::Finite)
        .unwrap_or(LogNorm::Zero);
    Ok(TypeEstimate {
        sigma,
        method: TypeMethod::WindowLimsup,
        window,
        depth,
    })
}

/// The type of `x`, using a closed form when the operator has one and the
/// window estimate (capped by `‖A‖`, which always bounds `σ`) otherwise.
pub fn type_of<A: LinearOperator>(
    a: &A,
    x: &A::Element,
    depth: usize,
    window: usize,
) -> Result<TypeEstimate> {
    if let Some(sigma) = a.closed_form_type(x) {
        return Ok(TypeEstimate {
            sigma,
            method: if x.is_exact_zero() {
                TypeMethod::EventuallyZero
            } else {
                TypeMethod::ExactClosedForm
            },
            window,
            depth,
        });
    }
    let seq = norm_sequence(a, x, depth)?;
    Ok(capped(estimate_type(&seq, window)?, &a.operator_norm_bound()))
}

pub(crate) fn capped(mut est: TypeEstimate, op_norm: &LogNorm) -> TypeEstimate {
    if est.sigma > *op_norm {
        est.sigma = op_norm.clone();
    }
    est
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMemberAtDepth,
    Undecided,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Member => "member",
            Membership::NonMemberAtDepth => "non_member_at_depth",
            Membership::Undecided => "undecided",
        })
    }
}

/// Truncated `‖x‖_α = max_{k ≤ K} ‖A^k x‖/α^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaNorm {
    pub value: LogNorm,
    /// The index attaining the maximum.
    pub argmax: usize,
    /// Whether the terms beyond `K` are proven not to exceed `value`.
    pub certified: bool,
}

struct AlphaAnalysis {
    seq: NormSequence,
    weighted: Vec<LogNorm>,
    verdict: Membership,
    tail_sup: LogNorm,
}

fn check_alpha(alpha: &LogNorm) -> Result<()> {
    if alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must be a positive finite magnitude, got {alpha}")))
    }
}

fn analyse<A: LinearOperator>(
    a: &A,
    x: &A::Element,
    alpha: &LogNorm,
    depth: usize,
) -> Result<AlphaAnalysis> {
    check_alpha(alpha)?;
    let seq = norm_sequence(a, x, depth)?;
    let weighted: Vec<LogNorm> = seq
        .norms()
        .iter()
        .enumerate()
        .map(|(k, e)| e.div(&alpha.pow(k as u64)))
        .collect();
    if seq.eventually_zero() {
        return Ok(AlphaAnalysis {
            seq,
            weighted,
            verdict: Membership::Member,
            tail_sup: LogNorm::Zero,
        });
    }
    let cert = a.growth_certificate(seq.norms());
    // sup_{k > K} c (α_cert/α)^k, attained at k = K+1 when α_cert ≤ α
    let tail_sup = if cert.alpha <= *alpha {
        cert.c.mul(&cert.alpha.div(alpha).pow(depth as u64 + 1))
    } else {
        LogNorm::Unbounded
    };
    let window = default_window(depth);
    let start = depth + 1 - window;
    let sigma = capped(estimate_type(&seq, window)?, &a.operator_norm_bound()).sigma;
    let tail = &weighted[start..];
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let late_max = LogNorm::max_of(tail);
    let early_max = LogNorm::max_of(&weighted[..start]);
    let verdict = if cert.alpha <= *alpha || (sigma < *alpha && non_increasing) {
        Membership::Member
    } else if sigma > *alpha && late_max > early_max {
        Membership::NonMemberAtDepth
    } else {
        Membership::Undecided
    };
    Ok(AlphaAnalysis {
        seq,
        weighted,
        verdict,
        tail_sup,
    })
}

/// Three-valued test of `x ∈ E_α(A)` from the first `K` iterates.
pub fn e_alpha_member<A: LinearOperator>(
    a: &A,
    x: &A::Element,
    alpha: &LogNorm,
    depth: usize,
) -> Result<Membership> {
    Ok(analyse(a, x, alpha, depth)?.verdict)
}

/// `‖x‖_α` truncated at depth `K`.
pub fn alpha_norm<A: LinearOperator>(
    a: &A,
    x: &A::Element,
    alpha: &LogNorm,
    depth: usize,
) -> Result<AlphaNorm> {
    let an = analyse(a, x, alpha, depth)?;
    if an.verdict == Membership::NonMemberAtDepth {
        return Err(Error::NotInEalpha { depth });
    }
    let mut argmax = 0;
    for (k, w) in an.weighted.iter().enumerate() {
        if *w > an.weighted[argmax] {
            argmax = k;
        }
    }
    let value = an.weighted[argmax].clone();
    let certified = an.seq.eventually_zero() || an.tail_sup <= value;
    Ok(AlphaNorm {
        value,
        argmax,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::MatrixOperator;
    use crate::padic_arith::{PadicNumber, Prime};
    use crate::spaces::Vector;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn mat(q: Prime, rows: &[Vec<(i64, i64)>]) -> MatrixOperator {
        MatrixOperator::from_rationals(q, rows, 20).unwrap()
    }

    fn vecr(q: Prime, xs: &[(i64, i64)]) -> Vector {
        Vector::from_rationals(q, xs, 20).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<LogNorm> {
        xs.iter().map(|&e| LogNorm::from_int(e)).collect()
    }

    #[test]
    fn norm_sequence_examples() {
        let q = p(3);
        let shift = mat(q, &[vec![(0, 1), (1, 1)], vec![(0, 1), (0, 1)]]);
        let s = norm_sequence(&shift, &vecr(q, &[(0, 1), (1, 1)]), 5).unwrap();
        let mut want = ints(&[0, 0]);
        want.extend(std::iter::repeat_n(LogNorm::Zero, 4));
        assert_eq!(s.norms(), &want[..]);
        assert_eq!(s.first_zero(), Some(2));

        let d = mat(q, &[vec![(3, 1)]]);
        let s = norm_sequence(&d, &vecr(q, &[(1, 1)]), 4).unwrap();
        assert_eq!(s.norms(), &ints(&[0, -1, -2, -3, -4])[..]);

        let u = mat(q, &[vec![(1, 1), (1, 1)], vec![(0, 1), (1, 1)]]);
        let s = norm_sequence(&u, &vecr(q, &[(1, 1), (0, 1)]), 6).unwrap();
        assert!(s.norms().iter().all(|e| *e == LogNorm::one()));
    }

    #[test]
    fn estimate_examples() {
        let zero = NormSequence::from_norms(vec![LogNorm::one(), LogNorm::Zero, LogNorm::Zero]).unwrap();
        let est = estimate_type(&zero, 1).unwrap();
        assert_eq!((est.sigma, est.method), (LogNorm::Zero, TypeMethod::EventuallyZero));

        let geo = NormSequence::from_norms(ints(&[0, -1, -2, -3, -4])).unwrap();
        let est = estimate_type(&geo, 2).unwrap();
        assert_eq!(est.sigma, LogNorm::from_int(-1));
        assert_eq!(est.method, TypeMethod::WindowLimsup);

        let q = p(5);
        let d = mat(q, &[vec![(1, 1), (0, 1)], vec![(0, 1), (5, 1)]]);
        let s = norm_sequence(&d, &vecr(q, &[(1, 1), (1, 1)]), 16).unwrap();
        assert_eq!(estimate_type(&s, 4).unwrap().sigma, LogNorm::one());

        assert!(matches!(estimate_type(&geo, 5), Err(Error::InsufficientDepth(_))));
    }

    #[test]
    fn alpha_norm_examples() {
        let q = p(3);
        let d = mat(q, &[vec![(3, 1)]]);
        let one = vecr(q, &[(1, 1)]);
        let n = alpha_norm(&d, &one, &LogNorm::one(), 16).unwrap();
        assert_eq!((n.value, n.argmax, n.certified), (LogNorm::one(), 0, true));

        let z = alpha_norm(&d, &vecr(q, &[(0, 1)]), &LogNorm::from_int(-7), 8).unwrap();
        assert_eq!(z.value, LogNorm::Zero);

        let id = mat(q, &[vec![(1, 1)]]);
        assert_eq!(
            alpha_norm(&id, &one, &LogNorm::from_int(-1), 16),
            Err(Error::NotInEalpha { depth: 16 })
        );
    }

    #[test]
    fn membership_examples() {
        let q = p(3);
        let d = mat(q, &[vec![(3, 1)]]);
        let id = mat(q, &[vec![(1, 1)]]);
        let one = vecr(q, &[(1, 1)]);
        let zero = vecr(q, &[(0, 1)]);
        assert_eq!(e_alpha_member(&id, &zero, &LogNorm::from_int(-9), 8).unwrap(), Membership::Member);
        assert_eq!(e_alpha_member(&d, &one, &LogNorm::one(), 16).unwrap(), Membership::Member);
        assert_eq!(
            e_alpha_member(&id, &one, &LogNorm::from_int(-1), 16).unwrap(),
            Membership::NonMemberAtDepth
        );
    }

    #[test]
    fn closed_form_short_circuit() {
        let q = p(5);
        let d = MatrixOperator::diagonal(
            q,
            vec![PadicNumber::from_integer(25, q, 8), PadicNumber::from_integer(5, q, 8)],
        );
        let est = type_of(&d, &vecr(q, &[(1, 1), (2, 1)]), 8, 2).unwrap();
        assert_eq!((est.sigma, est.method), (LogNorm::from_int(-1), TypeMethod::ExactClosedForm));
    }
}
