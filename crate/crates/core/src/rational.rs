//! Exact rational scalars.
//!
//! Every quantity in this crate is a reduced arbitrary-precision fraction
//! with positive denominator. `num`'s `BigRational` already maintains that
//! canonical form (reduction and sign normalization happen on construction),
//! so this module only adds the small helpers the rest of the crate uses.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

/// Arbitrary-precision rational in canonical form: `gcd(|p|, q) = 1`, `q > 0`.
pub type Rational = BigRational;

/// The fraction `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp`, exact.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    BigRational::new_raw(base.numer().pow(exp), base.denom().pow(exp))
}

/// `2^exp` as a rational.
pub fn pow2(exp: u32) -> Rational {
    BigRational::from_integer(BigInt::one() << exp)
}

/// `1 / 2^exp` as a rational.
pub fn inv_pow2(exp: u32) -> Rational {
    BigRational::new_raw(BigInt::one(), BigInt::one() << exp)
}

/// Binomial coefficient `C(n, k)` as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    BigRational::from_integer(num::integer::binomial(BigInt::from(n), BigInt::from(k)))
}
