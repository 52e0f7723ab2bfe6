//! Exact rational helpers on top of `BigRational`.
//!
//! Values are always kept in lowest terms by `num-rational`; this module adds
//! exact parsing of decimal and fraction strings, `p/q` formatting, and
//! directed rounding onto dyadic grids used by the enclosure routines.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^exp` as a rational, negative exponents allowed.
pub fn pow2(exp: i64) -> Rational {
    if exp >= 0 {
        Rational::from_integer(BigInt::one() << (exp as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-exp) as usize))
    }
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Always `p/q`, including integers (`1/1`).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, integers, decimals (`0.05`) and scientific notation
/// (`1e-6`) exactly. No value passes through floating point.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 0,
        message: format!("not an exact number: {s:?}"),
    };
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{whole}{frac}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Largest `k / 2^bits` not above `r`.
pub fn floor_dyadic(r: &Rational, bits: u32) -> Rational {
    let scaled = r.numer() << (bits as usize);
    let k = scaled.div_floor(r.denom());
    Rational::new(k, BigInt::one() << (bits as usize))
}

/// Smallest `k / 2^bits` not below `r`.
pub fn ceil_dyadic(r: &Rational, bits: u32) -> Rational {
    let scaled = r.numer() << (bits as usize);
    let k = scaled.div_ceil(r.denom());
    Rational::new(k, BigInt::one() << (bits as usize))
}

/// Smallest `k` with `2^-k <= eps` (eps > 0).
pub fn bits_for(eps: &Rational) -> u32 {
    let mut k: u32 = 0;
    let mut p = Rational::one();
    while &p > eps {
        p /= int(2);
        k += 1;
    }
    k
}

/// `floor(log2 |r|)` for nonzero r.
pub fn ilog2(r: &Rational) -> i64 {
    let n = r.numer().magnitude().bits() as i64;
    let d = r.denom().magnitude().bits() as i64;
    let mut e = n - d;
    // 2^e <= |r| < 2^(e+1) after adjustment
    let a = r.abs();
    if a < pow2(e) {
        e -= 1;
    } else if a >= pow2(e + 1) {
        e += 1;
    }
    e
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.numer().sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn min_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}
