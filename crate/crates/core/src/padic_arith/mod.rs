//! Finite-precision arithmetic in `Q_p` with exact magnitudes.

mod factorial;
mod lognorm;
mod number;
mod prime;

pub use factorial::{digit_sum, factorial_norm_bound, vp_factorial, FactorialBound};
pub use lognorm::{LogNorm, Valuation};
pub use number::{parse_rational, PadicNumber, Precision, DEFAULT_PRECISION};
pub use prime::Prime;
