use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LogNorm, Prime, Valuation};
use crate::error::{Error, Result};

/// Default number of p-adic digits carried by values built from rationals.
pub const DEFAULT_PRECISION: u32 = 32;

/// How much of a nonzero value is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// The value lies in `Z[1/p]` and is known exactly. `cap` is the relative
    /// precision used if an operation (inversion) has to round it.
    Exact { cap: u32 },
    /// The unit part is known modulo `p^n`.
    Relative(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    ExactZero,
    /// `0 + O(p^absolute)`: indistinguishable from zero at the available precision.
    ZeroMod { absolute: i64 },
    /// `p^valuation · unit`, `unit` coprime to `p`. For relative precision `n`
    /// the unit is reduced into `[0, p^n)`.
    Unit {
        valuation: i64,
        unit: BigInt,
        precision: Precision,
    },
}

/// An element of `Q_p` at finite (tracked) precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    prime: Prime,
    repr: Repr,
}

impl PadicNumber {
    pub fn zero(prime: Prime) -> Self {
        PadicNumber {
            prime,
            repr: Repr::ExactZero,
        }
    }

    pub fn zero_mod(prime: Prime, absolute: i64) -> Self {
        PadicNumber {
            prime,
            repr: Repr::ZeroMod { absolute },
        }
    }

    /// Exact integer; `cap` is used only if the value must later be rounded.
    pub fn from_integer(n: impl Into<BigInt>, prime: Prime, cap: u32) -> Self {
        let n = n.into();
        if n.is_zero() {
            return Self::zero(prime);
        }
        let (v, unit) = prime.split(&n);
        PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation: v as i64,
                unit,
                precision: Precision::Exact { cap },
            },
        }
    }

    pub fn one(prime: Prime, cap: u32) -> Self {
        Self::from_integer(1, prime, cap)
    }

    /// Exact `p^e`.
    pub fn p_power(prime: Prime, e: i64, cap: u32) -> Self {
        PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation: e,
                unit: BigInt::one(),
                precision: Precision::Exact { cap },
            },
        }
    }

    /// Canonical image of `num/den` in `Q_p`.
    ///
    /// Values in `Z[1/p]` (denominator a power of `p`) are kept exact; all
    /// others carry `precision` digits of relative precision.
    pub fn from_rational(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        prime: Prime,
        precision: u32,
    ) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero(prime));
        }
        let (vn, un) = prime.split(&num);
        let (vd, ud) = prime.split(&den);
        let valuation = vn as i64 - vd as i64;
        let g = un.gcd(&ud);
        let (mut un, mut ud) = (un / &g, ud / &g);
        if ud.is_negative() {
            un = -un;
            ud = -ud;
        }
        if ud.is_one() {
            return Ok(PadicNumber {
                prime,
                repr: Repr::Unit {
                    valuation,
                    unit: un,
                    precision: Precision::Exact { cap: precision },
                },
            });
        }
        let modulus = prime.pow(precision as u64);
        let inv = mod_inverse(&ud, &modulus).expect("denominator is coprime to p");
        let unit = (un * inv).mod_floor(&modulus);
        Ok(PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation,
                unit,
                precision: Precision::Relative(precision),
            },
        })
    }

    pub fn from_big_rational(q: &BigRational, prime: Prime, precision: u32) -> Result<Self> {
        Self::from_rational(q.numer().clone(), q.denom().clone(), prime, precision)
    }

    /// Builds a value from base-p digits `d_0, d_1, ...` of its unit part.
    /// An empty digit list yields zero modulo `p^{valuation + precision}`.
    pub fn from_digits(
        prime: Prime,
        valuation: i64,
        digits: &[u64],
        precision: u32,
    ) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        if digits.len() > precision as usize {
            return Err(Error::InvalidArgument(format!(
                "{} digits exceed precision {precision}",
                digits.len()
            )));
        }
        let p = prime.to_bigint();
        let mut unit = BigInt::zero();
        for &d in digits.iter().rev() {
            if d >= prime.get() {
                return Err(Error::InvalidArgument(format!("digit {d} is not below p = {prime}")));
            }
            unit = unit * &p + BigInt::from(d);
        }
        if unit.is_zero() {
            return Ok(Self::zero_mod(prime, valuation + precision as i64));
        }
        let (shift, unit) = prime.split(&unit);
        let precision = precision - shift as u32;
        Ok(PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation: valuation + shift as i64,
                unit,
                precision: Precision::Relative(precision),
            },
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::ExactZero => Valuation::PlusInfinity,
            // Only a lower bound is known; the value may well be zero.
            Repr::ZeroMod { .. } => Valuation::PlusInfinity,
            Repr::Unit { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// `|x|_p = p^{-v_p(x)}`. For a value indistinguishable from zero this is
    /// the upper bound `p^{-a}` implied by its absolute precision `a`.
    pub fn norm(&self) -> LogNorm {
        match &self.repr {
            Repr::ExactZero => LogNorm::Zero,
            Repr::ZeroMod { absolute } => LogNorm::from_int(-absolute),
            Repr::Unit { valuation, .. } => LogNorm::from_int(-valuation),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    pub fn is_zero_at_precision(&self) -> bool {
        matches!(self.repr, Repr::ZeroMod { .. })
    }

    /// Nonzero, with a certified valuation.
    pub fn is_certified_nonzero(&self) -> bool {
        matches!(self.repr, Repr::Unit { .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(
            self.repr,
            Repr::ExactZero
                | Repr::Unit {
                    precision: Precision::Exact { .. },
                    ..
                }
        )
    }

    /// Relative precision in digits; `None` for exact values.
    pub fn relative_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit {
                precision: Precision::Relative(n),
                ..
            } => Some(*n),
            Repr::ZeroMod { .. } => Some(0),
            _ => None,
        }
    }

    /// The value is known modulo `p^a`; `None` when it is exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::ZeroMod { absolute } => Some(*absolute),
            Repr::Unit {
                valuation,
                precision,
                ..
            } => match precision {
                Precision::Exact { .. } => None,
                Precision::Relative(n) => Some(valuation + *n as i64),
            },
        }
    }

    fn cap(&self) -> u32 {
        match &self.repr {
            Repr::Unit {
                precision: Precision::Exact { cap },
                ..
            } => *cap,
            Repr::Unit {
                precision: Precision::Relative(n),
                ..
            } => *n,
            _ => 0,
        }
    }

    /// Base-p digits of the unit part, lowest first. Empty for zero states.
    /// Exact negative units have infinite expansions; they are cut at the cap.
    pub fn unit_digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Unit {
                unit, precision, ..
            } => {
                let value = match precision {
                    Precision::Exact { cap } if unit.is_negative() => {
                        unit.mod_floor(&self.prime.pow(*cap as u64))
                    }
                    _ => unit.clone(),
                };
                to_digits(&value, self.prime)
            }
            _ => Vec::new(),
        }
    }

    /// The unit part as an integer, if nonzero.
    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    fn check_prime(&self, other: &PadicNumber) -> Result<()> {
        if self.prime != other.prime {
            Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        let prime = self.prime;
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) => return Ok(other.clone()),
            (_, Repr::ExactZero) => return Ok(self.clone()),
            _ => {}
        }
        let absolute = min_opt(self.absolute_precision(), other.absolute_precision());
        let terms: Vec<(i64, &BigInt)> = [&self.repr, &other.repr]
            .into_iter()
            .filter_map(|r| match r {
                Repr::Unit {
                    valuation, unit, ..
                } => Some((*valuation, unit)),
                _ => None,
            })
            .collect();
        let base = match terms.iter().map(|t| t.0).min() {
            Some(m) => m,
            None => return Ok(Self::zero_mod(prime, absolute.expect("zero-mod operand"))),
        };
        if let Some(a) = absolute {
            if a <= base {
                return Ok(Self::zero_mod(prime, a));
            }
        }
        let mut sum = BigInt::zero();
        for (v, u) in &terms {
            if let Some(a) = absolute {
                if *v >= a {
                    continue;
                }
            }
            sum += *u * prime.pow((v - base) as u64);
        }
        match absolute {
            Some(a) => {
                let modulus = prime.pow((a - base) as u64);
                let sum = sum.mod_floor(&modulus);
                if sum.is_zero() {
                    return Ok(Self::zero_mod(prime, a));
                }
                let (shift, unit) = prime.split(&sum);
                let valuation = base + shift as i64;
                Ok(PadicNumber {
                    prime,
                    repr: Repr::Unit {
                        valuation,
                        unit,
                        precision: Precision::Relative((a - valuation) as u32),
                    },
                })
            }
            None => {
                if sum.is_zero() {
                    return Ok(Self::zero(prime));
                }
                let (shift, unit) = prime.split(&sum);
                Ok(PadicNumber {
                    prime,
                    repr: Repr::Unit {
                        valuation: base + shift as i64,
                        unit,
                        precision: Precision::Exact {
                            cap: self.cap().max(other.cap()),
                        },
                    },
                })
            }
        }
    }

    pub fn neg(&self) -> PadicNumber {
        let repr = match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let unit = match precision {
                    Precision::Exact { .. } => -unit,
                    Precision::Relative(n) => (-unit).mod_floor(&self.prime.pow(*n as u64)),
                };
                Repr::Unit {
                    valuation: *valuation,
                    unit,
                    precision: *precision,
                }
            }
            other => other.clone(),
        };
        PadicNumber {
            prime: self.prime,
            repr,
        }
    }

    pub fn sub(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        let prime = self.prime;
        let repr = match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Repr::ExactZero,
            (Repr::ZeroMod { absolute: a }, Repr::ZeroMod { absolute: b }) => {
                Repr::ZeroMod { absolute: a + b }
            }
            (Repr::ZeroMod { absolute }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::ZeroMod { absolute }) => Repr::ZeroMod {
                absolute: absolute + valuation,
            },
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    precision: p1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    precision: p2,
                },
            ) => {
                let unit = u1 * u2;
                let precision = combine_precision(*p1, *p2);
                let unit = match precision {
                    Precision::Relative(n) => unit.mod_floor(&prime.pow(n as u64)),
                    Precision::Exact { .. } => unit,
                };
                Repr::Unit {
                    valuation: v1 + v2,
                    unit,
                    precision,
                }
            }
        };
        Ok(PadicNumber { prime, repr })
    }

    /// Multiplicative inverse. An exact unit other than `±1` is rounded to its cap.
    pub fn inv(&self) -> Result<PadicNumber> {
        self.inv_at(None)
    }

    fn inv_at(&self, rounding: Option<u32>) -> Result<PadicNumber> {
        match &self.repr {
            Repr::ExactZero => Err(Error::DivisionByZero),
            Repr::ZeroMod { absolute } => Err(Error::PrecisionExhausted(format!(
                "divisor is indistinguishable from zero modulo p^{absolute}"
            ))),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let (unit, precision) = match precision {
                    Precision::Exact { cap } if unit.abs().is_one() => {
                        (unit.clone(), Precision::Exact { cap: *cap })
                    }
                    Precision::Exact { cap } => {
                        let n = rounding.unwrap_or(*cap).max(1);
                        let modulus = self.prime.pow(n as u64);
                        let inv = mod_inverse(unit, &modulus).expect("unit is invertible");
                        (inv, Precision::Relative(n))
                    }
                    Precision::Relative(n) => {
                        let modulus = self.prime.pow(*n as u64);
                        let inv = mod_inverse(unit, &modulus).expect("unit is invertible");
                        (inv, Precision::Relative(*n))
                    }
                };
                Ok(PadicNumber {
                    prime: self.prime,
                    repr: Repr::Unit {
                        valuation: -valuation,
                        unit,
                        precision,
                    },
                })
            }
        }
    }

    /// Division. Exact divisors are rounded at the dividend's precision so an
    /// exact division never costs relative precision.
    pub fn div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        let rounding = match self.relative_precision() {
            Some(n) if n > 0 => Some(n.max(other.cap())),
            _ => Some(self.cap().max(other.cap())),
        };
        let inv = other.inv_at(rounding)?;
        self.mul(&inv)
    }

    pub fn pow(&self, k: u64) -> Result<PadicNumber> {
        let mut result = PadicNumber::one(self.prime, self.cap().max(1));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Forgets everything beyond absolute precision `a` (keeps less if already less).
    pub fn with_absolute_precision_at_most(&self, a: i64) -> PadicNumber {
        let prime = self.prime;
        let repr = match &self.repr {
            Repr::ExactZero => Repr::ZeroMod { absolute: a },
            Repr::ZeroMod { absolute } => Repr::ZeroMod {
                absolute: (*absolute).min(a),
            },
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                if a <= *valuation {
                    Repr::ZeroMod { absolute: a }
                } else {
                    let room = (a - valuation) as u32;
                    let n = match precision {
                        Precision::Exact { .. } => room,
                        Precision::Relative(n) => (*n).min(room),
                    };
                    let unit = unit.mod_floor(&prime.pow(n as u64));
                    Repr::Unit {
                        valuation: *valuation,
                        unit,
                        precision: Precision::Relative(n),
                    }
                }
            }
        };
        PadicNumber { prime, repr }
    }

    /// Rounds exact values to `n` relative digits and truncates finer ones.
    pub fn with_relative_precision_at_most(&self, n: u32) -> PadicNumber {
        match &self.repr {
            Repr::Unit { valuation, .. } => {
                self.with_absolute_precision_at_most(valuation + n as i64)
            }
            _ => self.clone(),
        }
    }

    /// `self ≡ other` modulo the coarser of the two absolute precisions.
    pub fn agrees_with(&self, other: &PadicNumber) -> bool {
        match self.sub(other) {
            Ok(d) => !d.is_certified_nonzero(),
            Err(_) => false,
        }
    }

    /// Residue of the value modulo `p^a` as an integer in `[0, p^{a})`,
    /// for values with nonnegative valuation known at least to `p^a`.
    pub fn residue(&self, a: u32) -> Option<BigInt> {
        if let Some(abs) = self.absolute_precision() {
            if abs < a as i64 {
                return None;
            }
        }
        let modulus = self.prime.pow(a as u64);
        match &self.repr {
            Repr::ExactZero | Repr::ZeroMod { .. } => Some(BigInt::zero()),
            Repr::Unit {
                valuation, unit, ..
            } => {
                if *valuation < 0 {
                    return None;
                }
                if *valuation >= a as i64 {
                    return Some(BigInt::zero());
                }
                Some((unit * self.prime.pow(*valuation as u64)).mod_floor(&modulus))
            }
        }
    }

    /// `val=v digits=[...] prec=N` (or `prec=exact`).
    pub fn to_compact(&self) -> String {
        match &self.repr {
            Repr::ExactZero => "val=+inf digits=[] prec=exact".to_string(),
            Repr::ZeroMod { absolute } => format!("val=+inf digits=[] prec={absolute}"),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => match precision {
                Precision::Relative(n) => format!(
                    "val={valuation} digits={} prec={n}",
                    digit_list(&to_digits(unit, self.prime))
                ),
                Precision::Exact { .. } => {
                    let sign = if unit.is_negative() { "-" } else { "" };
                    format!(
                        "{sign}val={valuation} digits={} prec=exact",
                        digit_list(&to_digits(&unit.abs(), self.prime))
                    )
                }
            },
        }
    }

    /// Parses either a rational `a/b` (or integer) or the compact form.
    pub fn parse(s: &str, prime: Prime, precision: u32) -> Result<PadicNumber> {
        let s = s.trim();
        if s.contains("val=") {
            return parse_compact(s, prime);
        }
        let q = parse_rational(s)?;
        Self::from_big_rational(&q, prime, precision)
    }
}

impl fmt::Display for PadicNumber {
    /// `d0 + d1*p + d2*p^2 + ... + O(p^(v+N))`, with `p` written out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime.get();
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::ZeroMod { absolute } => write!(f, "O({p}^{absolute})"),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let (negative, digits) = match precision {
                    Precision::Exact { .. } => {
                        (unit.is_negative(), to_digits(&unit.abs(), self.prime))
                    }
                    Precision::Relative(_) => (false, to_digits(unit, self.prime)),
                };
                let mut parts = Vec::new();
                for (i, d) in digits.iter().enumerate() {
                    if *d == 0 {
                        continue;
                    }
                    let e = valuation + i as i64;
                    parts.push(match e {
                        0 => format!("{d}"),
                        1 => format!("{d}*{p}"),
                        _ => format!("{d}*{p}^{e}"),
                    });
                }
                let body = parts.join(" + ");
                match precision {
                    Precision::Relative(n) => {
                        write!(f, "{body} + O({p}^{})", valuation + *n as i64)
                    }
                    Precision::Exact { .. } if negative => write!(f, "-({body})"),
                    Precision::Exact { .. } => write!(f, "{body}"),
                }
            }
        }
    }
}

/// Parses `a`, `-a`, or `a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

fn parse_compact(s: &str, prime: Prime) -> Result<PadicNumber> {
    let bad = |why: &str| Error::Parse(format!("invalid compact p-adic '{s}': {why}"));
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let mut val = None;
    let mut digits = None;
    let mut prec = None;
    let mut rest = body;
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let key = key.trim();
        let after = after.trim_start();
        let (value, tail) = if after.starts_with('[') {
            let end = after.find(']').ok_or_else(|| bad("unterminated digit list"))?;
            (&after[..=end], &after[end + 1..])
        } else {
            match after.find(char::is_whitespace) {
                Some(i) => (&after[..i], &after[i..]),
                None => (after, ""),
            }
        };
        match key {
            "val" => val = Some(value.to_string()),
            "digits" => {
                let inner = value.trim_start_matches('[').trim_end_matches(']');
                let ds: std::result::Result<Vec<u64>, _> = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(u64::from_str)
                    .collect();
                digits = Some(ds.map_err(|_| bad("bad digit"))?);
            }
            "prec" => prec = Some(value.to_string()),
            _ => return Err(bad("unknown key")),
        }
        rest = tail.trim_start();
    }
    let val = val.ok_or_else(|| bad("missing val"))?;
    let digits = digits.ok_or_else(|| bad("missing digits"))?;
    let prec = prec.ok_or_else(|| bad("missing prec"))?;
    if val == "+inf" {
        return if prec == "exact" {
            Ok(PadicNumber::zero(prime))
        } else {
            let a = i64::from_str(&prec).map_err(|_| bad("bad prec"))?;
            Ok(PadicNumber::zero_mod(prime, a))
        };
    }
    let v = i64::from_str(&val).map_err(|_| bad("bad val"))?;
    if digits.iter().any(|&d| d >= prime.get()) {
        return Err(bad("digit not below p"));
    }
    if digits.first().copied().unwrap_or(0) == 0 {
        return Err(bad("leading unit digit must be nonzero"));
    }
    let x = if prec == "exact" {
        let p = prime.to_bigint();
        let unit = digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &p + BigInt::from(d));
        let x = PadicNumber {
            prime,
            repr: Repr::Unit {
                valuation: v,
                unit,
                precision: Precision::Exact {
                    cap: DEFAULT_PRECISION,
                },
            },
        };
        return Ok(if negative { x.neg() } else { x });
    } else {
        let n = u32::from_str(&prec).map_err(|_| bad("bad prec"))?;
        PadicNumber::from_digits(prime, v, &digits, n)?
    };
    Ok(if negative { x.neg() } else { x })
}

fn combine_precision(a: Precision, b: Precision) -> Precision {
    match (a, b) {
        (Precision::Exact { cap: c1 }, Precision::Exact { cap: c2 }) => {
            Precision::Exact { cap: c1.max(c2) }
        }
        (Precision::Relative(n), Precision::Exact { .. })
        | (Precision::Exact { .. }, Precision::Relative(n)) => Precision::Relative(n),
        (Precision::Relative(n), Precision::Relative(m)) => Precision::Relative(n.min(m)),
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

pub(crate) fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(modulus);
    let e = a.extended_gcd(modulus);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(modulus))
}

fn to_digits(n: &BigInt, prime: Prime) -> Vec<u64> {
    debug_assert!(n.sign() != Sign::Minus);
    let p = prime.to_bigint();
    let mut digits = Vec::new();
    let mut m = n.clone();
    while !m.is_zero() {
        let (q, r) = m.div_rem(&p);
        digits.push(r.to_u64().expect("digit fits in u64"));
        m = q;
    }
    digits
}

fn digit_list(d: &[u64]) -> String {
    let inner: Vec<String> = d.iter().map(u64::to_string).collect();
    format!("[{}]", inner.join(","))
}
