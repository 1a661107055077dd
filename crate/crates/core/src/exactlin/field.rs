use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinError;

/// Coefficient field of every computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// Prime field `F_p`; `p` is certified prime by trial division.
    pub fn prime(p: u32) -> Result<Field, LinError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Reduce an integer to a canonical scalar of this field.
    pub fn scalar(&self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Modular(v.rem_euclid(*p as i64) as u32),
        }
    }

    /// Parse an entry as written in problem files: `"num/den"` strings over the
    /// rationals, integers (or integer strings) over a prime field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, LinError> {
        let text = text.trim();
        match self {
            Field::Rationals => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num).map_err(|_| LinError::BadScalar(text.into()))?;
                let den = BigInt::from_str(den).map_err(|_| LinError::BadScalar(text.into()))?;
                if den.is_zero() {
                    return Err(LinError::BadScalar(text.into()));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let v = i64::from_str(text).map_err(|_| LinError::BadScalar(text.into()))?;
                Ok(Scalar::Modular(v.rem_euclid(*p as i64) as u32))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A single field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Modular(u32),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular(v) => *v == 1,
        }
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `num/den` in lowest terms, residues as integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                let (n, d) = (q.numer(), q.denom());
                if d.is_negative() {
                    write!(f, "{}/{}", -n, -d)
                } else {
                    write!(f, "{n}/{d}")
                }
            }
            Scalar::Modular(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_certification() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(65521).is_ok());
        assert_eq!(Field::prime(1), Err(LinError::NotPrime(1)));
        assert_eq!(Field::prime(9), Err(LinError::NotPrime(9)));
        assert_eq!(Field::prime(0), Err(LinError::NotPrime(0)));
    }

    #[test]
    fn scalar_canonical_forms() {
        let f5 = Field::Prime(5);
        assert_eq!(f5.scalar(-1), Scalar::Modular(4));
        assert_eq!(f5.parse_scalar("12").unwrap(), Scalar::Modular(2));
        let q = Field::Rationals;
        assert_eq!(q.parse_scalar("2/4").unwrap().to_string(), "1/2");
        assert_eq!(q.parse_scalar("-3").unwrap().to_string(), "-3/1");
        assert_eq!(q.parse_scalar("3/-6").unwrap().to_string(), "-1/2");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(f5.parse_scalar("x").is_err());
    }
}
