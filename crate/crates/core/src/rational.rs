//! Exact rational scalars and the small vector helpers used throughout the crate.
//!
//! Every quantity the solver compares (costs, `λ`, squared distances) is kept
//! as an arbitrary-precision fraction in lowest terms; nothing is ever rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always normalized with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer lattice coordinates.
pub type IntVector = Vec<i64>;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer / denom`; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn to_rational_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn zeros(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("invalid rational {text:?}: {e}")))
}

/// Smallest integer `>= value`.
pub fn ceil_to_i64(value: &Rational) -> Result<i64> {
    big_to_i64(&value.ceil().to_integer())
}

/// Nearest integer, halves rounded towards +∞.
pub fn round_to_i64(value: &Rational) -> Result<i64> {
    let half = ratio(1, 2);
    big_to_i64(&(value + half).floor().to_integer())
}

pub fn big_to_i64(value: &BigInt) -> Result<i64> {
    i64::try_from(value).map_err(|_| Error::Overflow(format!("{value} does not fit in i64")))
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn max_abs(values: &[Rational]) -> Rational {
    values
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Natural logarithm of a positive rational, good to f64 precision even when
/// numerator and denominator overflow `f64`.
pub fn ln_positive(value: &Rational) -> f64 {
    fn ln_big(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 1000 {
            return big_to_f64(x).ln();
        }
        let shift = bits - 900;
        big_to_f64(&(x >> shift as usize)).ln() + shift as f64 * std::f64::consts::LN_2
    }
    fn big_to_f64(x: &BigInt) -> f64 {
        x.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
    }
    ln_big(value.numer()) - ln_big(value.denom())
}
