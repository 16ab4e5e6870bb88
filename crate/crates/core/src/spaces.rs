//! Non-archimedean Banach spaces: `Q_p^n` with the sup norm, disks, and the
//! element interface shared by the solvers.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic_arith::{LogNorm, PadicNumber, Prime};

/// What the series solver needs from an element of the underlying Banach space.
///
/// `norm` is an upper bound on the true norm; it is the exact norm whenever
/// `norm_is_exact` holds. The two differ only when some component is
/// indistinguishable from zero at its precision and could dominate.
pub trait BanachElement: Clone + fmt::Debug {
    fn prime(&self) -> Prime;
    fn norm(&self) -> LogNorm;
    fn norm_is_exact(&self) -> bool;
    /// Largest norm carried by components known to be nonzero. The true norm
    /// is at least this, so it is the quantity to test against upper bounds.
    fn certified_norm(&self) -> LogNorm;
    fn is_exact_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: &PadicNumber) -> Result<Self>;
    fn div_scalar(&self, c: &PadicNumber) -> Result<Self>;
    /// Records that the element is only known up to an error of norm ≤ `error`.
    fn absorb_error(&self, error: &LogNorm) -> Self;
    /// Coarsest norm of an error still invisible at the stored precision;
    /// `LogNorm::Zero` when everything is exact.
    fn precision_floor(&self) -> LogNorm;
    /// Componentwise agreement at the coarser precision.
    fn agrees_with(&self, other: &Self) -> bool;
}

/// Max over exactly-known component norms against max over the bounds of
/// components that are zero at precision.
pub(crate) fn combine_component_norms<'a>(
    items: impl IntoIterator<Item = &'a PadicNumber>,
) -> (LogNorm, bool) {
    let mut certain = LogNorm::Zero;
    let mut uncertain = LogNorm::Zero;
    for x in items {
        if x.is_certified_nonzero() {
            certain = certain.max(x.norm());
        } else if x.is_zero_at_precision() {
            uncertain = uncertain.max(x.norm());
        }
    }
    let exact = uncertain <= certain;
    (certain.max(uncertain), exact)
}

pub(crate) fn precision_floor_of<'a>(items: impl IntoIterator<Item = &'a PadicNumber>) -> LogNorm {
    items
        .into_iter()
        .filter_map(|x| x.absolute_precision())
        .map(|a| LogNorm::from_int(-a))
        .max()
        .unwrap_or(LogNorm::Zero)
}

/// A vector in `Q_p^n` with the sup norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    prime: Prime,
    entries: Vec<PadicNumber>,
}

impl Vector {
    pub fn new(prime: Prime, entries: Vec<PadicNumber>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("vectors need at least one entry".into()));
        }
        if let Some(bad) = entries.iter().find(|e| e.prime() != prime) {
            return Err(Error::PrimeMismatch(prime.get(), bad.prime().get()));
        }
        Ok(Vector { prime, entries })
    }

    pub fn zeros(prime: Prime, n: usize) -> Self {
        Vector {
            prime,
            entries: vec![PadicNumber::zero(prime); n.max(1)],
        }
    }

    pub fn from_rationals(prime: Prime, values: &[(i64, i64)], precision: u32) -> Result<Self> {
        let entries = values
            .iter()
            .map(|&(n, d)| PadicNumber::from_rational(n, d, prime, precision))
            .collect::<Result<Vec<_>>>()?;
        Vector::new(prime, entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &PadicNumber {
        &self.entries[i]
    }

    fn check(&self, other: &Vector) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Vector,
        f: impl Fn(&PadicNumber, &PadicNumber) -> Result<PadicNumber>,
    ) -> Result<Vector> {
        self.check(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector {
            prime: self.prime,
            entries,
        })
    }

    fn map(&self, f: impl Fn(&PadicNumber) -> Result<PadicNumber>) -> Result<Vector> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Vector {
            prime: self.prime,
            entries,
        })
    }

    /// Parses comma-separated entries; each is a rational or a compact p-adic
    /// form (`val=.. digits=[..] prec=..`), whose inner commas are skipped.
    pub fn parse(s: &str, prime: Prime, precision: u32) -> Result<Vector> {
        let entries = split_top_level(s)
            .into_iter()
            .map(|t| PadicNumber::parse(t, prime, precision))
            .collect::<Result<Vec<_>>>()?;
        Vector::new(prime, entries)
    }

    pub fn to_compact(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(PadicNumber::to_compact).collect();
        format!("({})", parts.join("; "))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' | ';' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|t| !t.is_empty()).collect()
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Sup norm `max_i |x_i|_p`; the zero vector has norm `LogNorm::Zero`.
pub fn vector_norm(x: &Vector) -> LogNorm {
    x.norm()
}

impl BanachElement for Vector {
    fn prime(&self) -> Prime {
        self.prime
    }

    fn norm(&self) -> LogNorm {
        combine_component_norms(&self.entries).0
    }

    fn norm_is_exact(&self) -> bool {
        combine_component_norms(&self.entries).1
    }

    fn certified_norm(&self) -> LogNorm {
        LogNorm::max_of(
            self.entries
                .iter()
                .filter(|x| x.is_certified_nonzero())
                .map(|x| x.norm())
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    fn is_exact_zero(&self) -> bool {
        self.entries.iter().all(PadicNumber::is_exact_zero)
    }

    fn zero_like(&self) -> Self {
        Vector::zeros(self.prime, self.dim())
    }

    fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    fn scale(&self, c: &PadicNumber) -> Result<Self> {
        self.map(|x| x.mul(c))
    }

    fn div_scalar(&self, c: &PadicNumber) -> Result<Self> {
        self.map(|x| x.div(c))
    }

    fn absorb_error(&self, error: &LogNorm) -> Self {
        match error.digits_below() {
            Some(a) => Vector {
                prime: self.prime,
                entries: self
                    .entries
                    .iter()
                    .map(|x| x.with_absolute_precision_at_most(a))
                    .collect(),
            },
            None => self.clone(),
        }
    }

    fn precision_floor(&self) -> LogNorm {
        precision_floor_of(&self.entries)
    }

    fn agrees_with(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_with(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Closed,
}

/// `{z : |z|_p < radius}` or `{z : |z|_p ≤ radius}`. A `Zero` radius is the
/// empty (open) disk or `{0}` (closed); `Unbounded` is all of `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub radius: LogNorm,
    pub boundary: Boundary,
}

impl Disk {
    pub fn open(radius: LogNorm) -> Self {
        Disk {
            radius,
            boundary: Boundary::Open,
        }
    }

    pub fn closed(radius: LogNorm) -> Self {
        Disk {
            radius,
            boundary: Boundary::Closed,
        }
    }

    pub fn contains(&self, z: &PadicNumber) -> bool {
        disk_contains(self, z)
    }
}

pub fn disk_contains(d: &Disk, z: &PadicNumber) -> bool {
    if d.radius == LogNorm::Unbounded {
        return true;
    }
    let n = z.norm();
    match d.boundary {
        Boundary::Open => n < d.radius,
        Boundary::Closed => n <= d.radius,
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.boundary {
            Boundary::Open => "<",
            Boundary::Closed => "<=",
        };
        write!(f, "|z| {rel} {}", self.radius)
    }
}
