//! Exact rationals. Always reduced with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .or_else(|_| invalid(format!("bad rational `{text}`")))?;
    let den: BigInt = den
        .parse()
        .or_else(|_| invalid(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return invalid(format!("zero denominator in `{text}`"));
    }
    Ok(Rational::new(num, den))
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rescales a vector to integer entries with gcd 1, keeping signs.
pub fn to_primitive_integer(values: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;

    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return values.to_vec();
    }
    ints.into_iter()
        .map(|v| Rational::from_integer(v / &gcd))
        .collect()
}
