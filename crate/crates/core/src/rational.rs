//! Exact rational helpers shared by the enumerator, transform and LP code.
//!
//! Rationals print as `p/q`, or as a bare integer when the denominator is 1.
//! The parser additionally accepts finite decimals (`0.9`, `-1.25`), which are
//! converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn pow(base: &BigRational, e: usize) -> BigRational {
    num_traits::pow(base.clone(), e)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn format(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_list(v: &[BigRational]) -> String {
    v.iter().map(format).collect::<Vec<_>>().join(",")
}

pub fn parse(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse {
        what: "rational",
        detail: format!("`{s}`"),
    };
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(err());
        }
        let digits = format!("{whole_digits}{frac}");
        let mag: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(mag, scale);
        return Ok(if negative { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(p))
}

pub fn parse_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse).collect()
}

pub fn to_f64(r: &BigRational) -> f64 {
    // numerator and denominator may each exceed f64 range while the ratio does not
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
    let n = (n >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = (d >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

/// Nearest integer, ties away from zero.
pub fn round(r: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mag = (r.abs() + half).floor().to_integer();
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Serde adapter storing a rational as its exact string form.
pub mod serde_str {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod serde_vec {
    use num_rational::BigRational;
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| super::parse(s).map_err(D::Error::custom)).collect()
    }
}

/// Serde adapter for an optional vector of rationals.
pub mod serde_opt_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::serde_vec")] Vec<BigRational>);

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&Wrap(v.clone())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
