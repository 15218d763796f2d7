//! Exact rational scalars and their `"num/den"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"7"`, `"-3/4"` or `" 5 / 10 "`. The result is normalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Human-oriented decimal rendering; never used for verification.
pub fn to_decimal(r: &Rational) -> String {
    match r.to_f64() {
        Some(v) => format!("{v:.12e}"),
        None => "nan".to_string(),
    }
}

/// Numerators over the least common denominator, and that denominator.
pub fn common_denominator<'a>(vals: impl IntoIterator<Item = &'a Rational>) -> (Vec<BigInt>, BigInt) {
    let vals: Vec<&Rational> = vals.into_iter().collect();
    let d = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = vals.iter().map(|v| v.numer() * (&d / v.denom())).collect();
    (nums, d)
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

/// Serde adapter storing a rational as its `"num/den"` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = StrOrInt::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Configs may carry plain JSON integers where a rational is expected.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum StrOrInt {
        Str(String),
        Int(i64),
    }

    impl StrOrInt {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                StrOrInt::Str(s) => parse_rational(&s),
                StrOrInt::Int(i) => Ok(int(i)),
            }
        }
    }
}

pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<serde_str::StrOrInt>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}
