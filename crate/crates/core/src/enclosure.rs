//! Directed-rounding enclosures `[lo, hi]` with rational bounds.
//!
//! Every operation returns an enclosure that contains the true real result.
//! Degenerate enclosures (`lo == hi`) carry exact values and the arithmetic
//! takes a fast path for them, so exact data flows through unchanged.
//!
//! Comparisons are three-valued: a decision is returned only when the two
//! enclosures are separated (or both exact), otherwise `None`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{bits_for, ceil_dyadic, floor_dyadic, fmt_rational, ilog2, int, pow2, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        Enclosure { lo, hi }
    }

    pub fn exact(r: Rational) -> Self {
        Enclosure { lo: r.clone(), hi: r }
    }

    pub fn from_int(n: i64) -> Self {
        Self::exact(int(n))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    /// Decided ordering, or `None` when the enclosures overlap.
    pub fn compare(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn sign(&self) -> Option<Ordering> {
        self.compare(&Enclosure::exact(Rational::zero()))
    }

    /// True when every point of `self` is `>=` every point of `other`.
    pub fn certainly_ge(&self, other: &Enclosure) -> bool {
        self.lo >= other.hi
    }

    pub fn certainly_gt(&self, other: &Enclosure) -> bool {
        self.lo > other.hi
    }

    pub fn min(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        if self.is_exact() && other.is_exact() {
            return Enclosure::exact(&self.lo * &other.lo);
        }
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    pub fn scale(&self, r: &Rational) -> Enclosure {
        if r.is_negative() {
            Enclosure { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            Enclosure { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    pub fn recip(&self) -> Result<Enclosure> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Ok(Enclosure {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            })
        } else {
            Err(Error::Indeterminate("division by an enclosure containing 0".into()))
        }
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if self.is_exact() && other.is_exact() {
            if other.lo.is_zero() {
                return Err(Error::Precondition("division by zero".into()));
            }
            return Ok(Enclosure::exact(&self.lo / &other.lo));
        }
        Ok(self.mul(&other.recip()?))
    }

    /// Widens the bounds onto a `2^-bits` grid, keeping exact values exact.
    pub fn round_out(&self, bits: u32) -> Enclosure {
        if self.is_exact() && self.lo.denom().bits() <= bits as u64 + 1 {
            return self.clone();
        }
        Enclosure {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", fmt_rational(&self.lo))
        } else {
            write!(f, "[{}, {}] (~{:.12})", fmt_rational(&self.lo), fmt_rational(&self.hi), self.to_f64())
        }
    }
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Enclosure of `sqrt(r)` of width at most `precision`; exact for perfect squares.
pub fn sqrt_enclosure(r: &Rational, precision: &Rational) -> Result<Enclosure> {
    if r.is_negative() {
        return Err(Error::Precondition(format!("negative radicand {}", fmt_rational(r))));
    }
    if !precision.is_positive() {
        return Err(Error::Precondition("precision must be positive".into()));
    }
    if let (Some(p), Some(q)) = (is_square(r.numer()), is_square(r.denom())) {
        return Ok(Enclosure::exact(Rational::new(p, q)));
    }
    let k = bits_for(precision);
    // m = isqrt(floor(r * 4^k)) gives m^2 <= r 4^k < (m+1)^2
    let scaled = (r * pow2(2 * k as i64)).floor().to_integer();
    let m = scaled.sqrt();
    let denom = BigInt::one() << (k as usize);
    Ok(Enclosure::new(
        Rational::new(m.clone(), denom.clone()),
        Rational::new(m + BigInt::one(), denom),
    ))
}

/// `atanh(z)` enclosure for rational `0 <= z <= 1/3`, evaluated on a `2^-bits` grid.
fn atanh_small(z: &Rational, bits: u32) -> Enclosure {
    if z.is_zero() {
        return Enclosure::exact(Rational::zero());
    }
    let z2 = z * z;
    let threshold = pow2(-(bits as i64) - 2);
    let mut power = Enclosure::exact(z.clone()).round_out(bits + 8);
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    let mut j: i64 = 0;
    loop {
        let d = int(2 * j + 1);
        lo += floor_dyadic(&(power.lo() / &d), bits + 8);
        hi += ceil_dyadic(&(power.hi() / &d), bits + 8);
        power = power.scale(&z2).round_out(bits + 8);
        j += 1;
        if power.hi() < &threshold {
            break;
        }
    }
    // remaining terms sum to at most power * 1/(1 - z^2) <= power * 9/8
    hi += power.hi() * rat_9_8();
    Enclosure::new(lo, hi)
}

fn rat_9_8() -> Rational {
    Rational::new(BigInt::from(9), BigInt::from(8))
}

const LN2_BITS: u32 = 320;

fn ln2_at(bits: u32) -> Enclosure {
    static CACHE: OnceLock<Enclosure> = OnceLock::new();
    if bits + 8 <= LN2_BITS {
        return CACHE
            .get_or_init(|| atanh_small(&Rational::new(BigInt::one(), BigInt::from(3)), LN2_BITS).scale(&int(2)))
            .clone();
    }
    atanh_small(&Rational::new(BigInt::one(), BigInt::from(3)), bits + 8).scale(&int(2))
}

/// Enclosure of `ln 2` with width well below `2^-bits`.
pub fn ln2_enclosure(bits: u32) -> Enclosure {
    ln2_at(bits)
}

/// Enclosure of `ln(x)` for rational `x > 0`, width at most about `2^-bits`.
pub fn ln_enclosure(x: &Rational, bits: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Precondition(format!("log of non-positive {}", fmt_rational(x))));
    }
    if x.is_one() {
        return Ok(Enclosure::exact(Rational::zero()));
    }
    let k = ilog2(x);
    let m = x / pow2(k);
    let work = bits + 16 + (64 - k.unsigned_abs().leading_zeros());
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let ln_m = atanh_small(&z, work).scale(&int(2));
    let ln2 = ln2_at(work);
    Ok(ln2.scale(&int(k)).add(&ln_m).round_out(work))
}

/// Enclosure of `ln` over an enclosure (monotone).
pub fn ln_of(x: &Enclosure, bits: u32) -> Result<Enclosure> {
    if x.is_exact() {
        return ln_enclosure(x.lo(), bits);
    }
    let lo = ln_enclosure(x.lo(), bits)?;
    let hi = ln_enclosure(x.hi(), bits)?;
    Ok(Enclosure::new(lo.lo().clone(), hi.hi().clone()))
}

/// `exp(y)` for rational `|y| <= 1/2` by Taylor series with a two-term tail bound.
fn exp_small(y: &Rational, bits: u32) -> Enclosure {
    let mut term = Enclosure::exact(Rational::one());
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    let threshold = pow2(-(bits as i64) - 2);
    let mut n: i64 = 0;
    loop {
        lo += term.lo();
        hi += term.hi();
        n += 1;
        term = term.scale(&(y / int(n))).round_out(bits + 8);
        let mag = term.lo().abs().max(term.hi().abs());
        if mag < threshold {
            // |tail| <= 2 |next term| for |y| <= 1/2
            let slack = mag * int(2);
            lo -= &slack;
            hi += &slack;
            break;
        }
    }
    Enclosure::new(lo, hi)
}

/// Enclosure of `exp(x)` for rational `x`; absolute width about `2^-bits * max(1, e^x)`.
pub fn exp_enclosure(x: &Rational, bits: u32) -> Enclosure {
    if x.is_zero() {
        return Enclosure::exact(Rational::one());
    }
    let approx = to_f64(x) / std::f64::consts::LN_2;
    let k = approx.round() as i64;
    let work = bits + 24 + (64 - k.unsigned_abs().leading_zeros()) + k.max(0) as u32;
    let ln2 = ln2_at(work);
    // r = x - k ln2 lies within about 0.35 of zero
    let r = Enclosure::exact(x.clone()).sub(&ln2.scale(&int(k)));
    let lo = exp_small(r.lo(), work);
    let hi = exp_small(r.hi(), work);
    let e = Enclosure::new(lo.lo().clone(), hi.hi().clone());
    e.scale(&pow2(k)).round_out(work)
}

pub fn exp_of(x: &Enclosure, bits: u32) -> Enclosure {
    if x.is_exact() {
        return exp_enclosure(x.lo(), bits);
    }
    let lo = exp_enclosure(x.lo(), bits);
    let hi = exp_enclosure(x.hi(), bits);
    Enclosure::new(lo.lo().clone(), hi.hi().clone())
}

/// Exact numbers `a + b sqrt(d)` in a fixed real quadratic field.
///
/// Used for boundary identities such as `tau^2 = tau + 1` at the golden
/// ratio, where enclosure comparisons can only report "indeterminate".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl QuadraticSurd {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        assert!(d.is_positive(), "field radicand must be positive");
        QuadraticSurd { a, b, d }
    }

    pub fn rational(&self, r: Rational) -> Self {
        QuadraticSurd::new(r, Rational::zero(), self.d.clone())
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        QuadraticSurd::new(&self.a + &other.a, &self.b + &other.b, self.d.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        QuadraticSurd::new(&self.a - &other.a, &self.b - &other.b, self.d.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let a = &self.a * &other.a + &self.b * &other.b * &self.d;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadraticSurd::new(a, b, self.d.clone())
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let zero = Rational::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn enclose(&self, precision: &Rational) -> Result<Enclosure> {
        let root = sqrt_enclosure(&self.d, &(precision / (self.b.abs() + Rational::one())))?;
        Ok(Enclosure::exact(self.a.clone()).add(&root.scale(&self.b)))
    }
}
