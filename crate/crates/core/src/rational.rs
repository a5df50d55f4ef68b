//! Exact rational helpers on top of [`num_rational::BigRational`].

use alloc::format;
use alloc::string::String;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form.
pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow(r: &Rational, k: usize) -> Rational {
    Pow::pow(r, k as u64)
}

/// Parses `"num/den"` or a bare integer.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::param("rational", format!("cannot parse {t:?}; expected \"num/den\""));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::param("rational", format!("zero denominator in {t:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Always `"num/den"`, including integers (`"1/1"`).
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64`, for display and floating-point cross-checks only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest integer `>= r`, or `None` when it does not fit in `u64`.
/// Negative inputs clamp to zero.
pub fn ceil_u64(r: &Rational) -> Option<u64> {
    if !r.is_positive() {
        return Some(0);
    }
    r.ceil().to_integer().to_u64()
}

/// Largest integer `<= r`, saturating at `u64::MAX`. Negative inputs clamp to zero.
pub fn floor_u64_saturating(r: &Rational) -> u64 {
    if !r.is_positive() {
        return 0;
    }
    r.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn numer_u(r: &Rational) -> BigUint {
    r.numer().magnitude().clone()
}

pub fn denom_u(r: &Rational) -> BigUint {
    r.denom().magnitude().clone()
}

pub(crate) fn from_biguint(n: BigUint, d: BigUint) -> Rational {
    Rational::new(BigInt::from_biguint(Sign::Plus, n), BigInt::from_biguint(Sign::Plus, d))
}

pub fn is_in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Exponent of the power-`d` transform: writes `x = u/d` with `d > 0`.
pub fn split_exponent(x: &Rational) -> (BigInt, BigUint) {
    let g = x.numer().gcd(x.denom());
    let u = x.numer() / &g;
    let d = (x.denom() / &g).magnitude().clone();
    (u, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse(" 6/8 ").unwrap(), ratio(3, 4));
        assert_eq!(parse("5").unwrap(), int(5));
        assert!(parse("1/0").is_err());
        assert!(parse("0.25").is_err());
        assert_eq!(format(&ratio(65, 32)), "65/32");
        assert_eq!(format(&int(1)), "1/1");
    }

    #[test]
    fn ceilings() {
        assert_eq!(ceil_u64(&ratio(40, 3)), Some(14));
        assert_eq!(ceil_u64(&ratio(12, 3)), Some(4));
        assert_eq!(ceil_u64(&ratio(-1, 3)), Some(0));
        assert_eq!(floor_u64_saturating(&ratio(40, 3)), 13);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }
}
