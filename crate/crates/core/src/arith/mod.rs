//! Exact integer primitives and certified real arithmetic.

pub mod cf;
pub mod int;
pub mod real;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use cf::{cf_convergents, cf_convergents_rational, nearest_dist};
pub use int::isqrt;
pub use real::{parse_decimal, RealApprox};

use crate::error::{Error, Result};

/// Natural logarithm of a positive integer.
pub fn ln_int(n: &BigInt, prec: u32) -> Result<RealApprox> {
    RealApprox::from_int(n.clone(), prec).ln()
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(q: &BigRational, prec: u32) -> Result<RealApprox> {
    RealApprox::from_rational(q, prec).ln()
}

/// Natural logarithm of a certified real, at the precision it carries.
pub fn log_ra(x: &RealApprox) -> Result<RealApprox> {
    x.ln()
}

/// Runs `f` at `prec`, doubling on precision failures until `ceiling` is exceeded.
///
/// Returns the value together with the precision that succeeded.
pub fn with_precision_retry<T>(
    prec: u32,
    ceiling: u32,
    mut f: impl FnMut(u32) -> Result<T>,
) -> Result<(T, u32)> {
    let mut p = prec.max(1);
    loop {
        match f(p) {
            Ok(v) => return Ok((v, p)),
            Err(e) if e.is_precision() && p * 2 <= ceiling.max(p) => p *= 2,
            Err(Error::InsufficientPrecision(msg)) => {
                return Err(Error::InsufficientPrecision(format!(
                    "{msg} (gave up at {p} digits)"
                )))
            }
            Err(e) => return Err(e),
        }
    }
}
