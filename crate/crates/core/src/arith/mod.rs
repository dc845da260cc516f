//! Exact integer, rational and univariate polynomial arithmetic.
//!
//! Integers and rationals are `num-bigint` / `num-rational` values; this
//! module adds the dense polynomial type used by the suborbit tables, a
//! deterministic factorizer, and a few cyclic-group helpers.

mod factor;
mod order;
mod poly;

pub use factor::{factorize, is_prime, Factorization, MILLER_RABIN_BOUND};
pub use order::{cyclic_order, exp_compare, is_power_of};
pub use poly::ParamPoly;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Shorthand for building a [`BigInt`] from any primitive integer.
pub fn int<T: Into<BigInt>>(v: T) -> BigInt {
    v.into()
}

/// Shorthand for `a / b` as a rational in lowest terms.
pub fn ratio<A: Into<BigInt>, B: Into<BigInt>>(a: A, b: B) -> BigRational {
    BigRational::new(a.into(), b.into())
}
