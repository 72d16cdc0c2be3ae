//! Small helpers for exact rational scalars.
//!
//! Exponents of `q` and `z` are `BigRational` throughout the crate; these
//! helpers centralize construction, parsing of `"p/r"` literals, and the
//! canonical wire rendering used by the JSON emitters.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The integer `n` as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The fraction `num/den` in lowest terms. Panics on `den == 0`.
pub fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p/r"` or a bare integer `"p"`.
pub fn parse(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((p, r)) => {
            let num: BigInt = p.trim().parse().map_err(|_| bad())?;
            let den: BigInt = r.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Canonical wire rendering: always `"p/r"` with `r >= 1`, reduced,
/// sign carried by the numerator.
pub fn render(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Exact conversion to `i64`, if the value is an integer that fits.
pub fn to_i64(r: &BigRational) -> Option<i64> {
    if !is_integer(r) {
        return None;
    }
    r.numer().to_i64()
}

pub fn floor_i64(r: &BigRational) -> i64 {
    r.floor().to_integer().to_i64().expect("floor out of i64 range")
}

pub fn ceil_i64(r: &BigRational) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceil out of i64 range")
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["3/4", "-1/24", "5/1", "0/1"] {
            let r = parse(s).unwrap();
            assert_eq!(render(&r), s);
        }
        assert_eq!(render(&parse("7").unwrap()), "7/1");
        assert_eq!(render(&parse("6/8").unwrap()), "3/4");
        assert_eq!(render(&parse("-2/-4").unwrap()), "1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("a/b").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn integer_checks() {
        assert!(is_integer(&int(-3)));
        assert!(!is_integer(&frac(1, 2)));
        assert_eq!(to_i64(&frac(8, 4)), Some(2));
        assert_eq!(to_i64(&frac(1, 2)), None);
        assert_eq!(floor_i64(&frac(-1, 8)), -1);
        assert_eq!(ceil_i64(&frac(-1, 8)), 0);
    }
}
