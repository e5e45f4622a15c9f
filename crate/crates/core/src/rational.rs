//! Exact fractions for reports: construction helpers, the JSON form
//! `{ "num": .., "den": .. }`, and a fixed-digit decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Reduced fraction as stored in JSON artifacts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn from_rational(r: &Rational) -> Result<Self> {
        let num = r.numer().to_i64();
        let den = r.denom().to_i64();
        match (num, den) {
            (Some(num), Some(den)) => Ok(Fraction { num, den }),
            _ => Err(Error::Domain(format!("fraction {r} does not fit in 64 bits"))),
        }
    }

    pub fn to_rational(&self) -> Result<Rational> {
        if self.den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(ratio(self.num, self.den))
    }
}

/// `r` rounded toward zero to `digits` places, e.g. `0.700000000000`.
pub fn decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let (whole, mut rem) = num.div_rem(&den);
    let mut out = String::new();
    if neg && !(whole.is_zero() && rem.is_zero()) {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= 10;
            let (d, r2) = rem.div_rem(&den);
            out.push_str(&d.to_string());
            rem = r2;
        }
    }
    out
}

/// Fraction plus its informational decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub num: i64,
    pub den: i64,
    pub decimal: String,
}

impl ExactValue {
    pub fn new(r: &Rational) -> Result<Self> {
        let Fraction { num, den } = Fraction::from_rational(r)?;
        Ok(ExactValue { num, den, decimal: decimal(r, 12) })
    }

    pub fn to_rational(&self) -> Result<Rational> {
        Fraction { num: self.num, den: self.den }.to_rational()
    }
}

/// Serializes a rational as `{ "num", "den", "decimal" }`; components that
/// overflow 64 bits are written as strings.
pub fn serialize_exact<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Exact", 3)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(num), Some(den)) => {
            st.serialize_field("num", &num)?;
            st.serialize_field("den", &den)?;
        }
        _ => {
            st.serialize_field("num", &r.numer().to_string())?;
            st.serialize_field("den", &r.denom().to_string())?;
        }
    }
    st.serialize_field("decimal", &decimal(r, 12))?;
    st.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&ratio(7, 10), 12), "0.700000000000");
        assert_eq!(decimal(&ratio(22, 45), 4), "0.4888");
        assert_eq!(decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(decimal(&int(2), 0), "2");
    }

    #[test]
    fn fraction_is_reduced() {
        let f = Fraction::from_rational(&ratio(56, 90)).unwrap();
        assert_eq!(f, Fraction { num: 28, den: 45 });
        assert_eq!(f.to_rational().unwrap(), ratio(28, 45));
        assert!(Fraction { num: 1, den: 0 }.to_rational().is_err());
    }
}
