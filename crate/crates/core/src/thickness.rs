//! Thickness of finite covers, C-nice gap classification, split
//! decompositions, log-covers of bad gaps and the log-thickness bound.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};

use crate::cover::{CoverApprox, CoverInterval, Gap};
use crate::enclosure::{ln_enclosure, Enclosure, QuadraticSurd};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};

/// Working precision (bits) for logarithm enclosures.
pub const LOG_BITS: u32 = 160;

/// Thickness of a cover: `Infinite` when there is no bounded gap.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum ThicknessValue {
    Infinite,
    Value { value: Enclosure, lower: Gap, upper: Gap },
}

impl ThicknessValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ThicknessValue::Infinite)
    }

    pub fn value(&self) -> Option<&Enclosure> {
        match self {
            ThicknessValue::Infinite => None,
            ThicknessValue::Value { value, .. } => Some(value),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        self.value()?.exact_value()
    }

    /// The infimizing pair `(U1, U2)` with `U1 < U2`.
    pub fn pair(&self) -> Option<(&Gap, &Gap)> {
        match self {
            ThicknessValue::Infinite => None,
            ThicknessValue::Value { lower, upper, .. } => Some((lower, upper)),
        }
    }
}

impl fmt::Display for ThicknessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThicknessValue::Infinite => write!(f, "inf"),
            ThicknessValue::Value { value, .. } => write!(f, "{value}"),
        }
    }
}

struct Best {
    value: Enclosure,
    lower: usize,
    upper: usize,
}

fn offer(best: &mut Option<Best>, value: Enclosure, lower: usize, upper: usize) {
    let better = match best {
        None => true,
        Some(b) => (value.lo(), value.hi()) < (b.value.lo(), b.value.hi()),
    };
    if better {
        *best = Some(Best { value, lower, upper });
    }
}

/// Exact thickness of a finite cover.
///
/// For each bounded gap only the nearest not-shorter gap on either side (or
/// the hull end) can realize the infimum, so one monotone-stack pass over the
/// gaps suffices. With enclosure endpoints, gaps whose order of length is
/// undecided are all kept as candidates, so the result still encloses the
/// all-pairs infimum.
pub fn thickness(cv: &CoverApprox) -> Result<ThicknessValue> {
    if cv.intervals.is_empty() {
        return Err(Error::Empty("thickness of an empty cover".into()));
    }
    let gaps = &cv.gaps;
    let n = gaps.len();
    if n <= 2 {
        return Ok(ThicknessValue::Infinite);
    }
    // gaps[0] and gaps[n-1] are the rays
    let lens: Vec<Enclosure> = gaps.iter().map(|g| g.length().unwrap_or_else(|| Enclosure::from_int(0))).collect();
    let left_end = gaps[0].right.clone().unwrap();
    let right_end = gaps[n - 1].left.clone().unwrap();
    let mut best: Option<Best> = None;
    let mut stack: Vec<usize> = Vec::new();
    for i in 1..n - 1 {
        let gi_left = gaps[i].left.as_ref().unwrap();
        let li = &lens[i];
        let mut stopped = false;
        let mut k = stack.len();
        while k > 0 {
            let j = stack[k - 1];
            let bridge = gi_left.sub(gaps[j].right.as_ref().unwrap());
            let ord = lens[j].compare(li);
            let ratio = match ord {
                Some(Ordering::Less) => bridge.div(&lens[j])?,
                Some(_) => bridge.div(li)?,
                None => bridge.div(&lens[j])?.max(&bridge.div(li)?),
            };
            offer(&mut best, ratio, j, i);
            match ord {
                Some(Ordering::Less) => {
                    stack.remove(k - 1);
                }
                Some(_) => {
                    stopped = true;
                    break;
                }
                None => {}
            }
            k -= 1;
        }
        if !stopped {
            let bridge = gi_left.sub(&left_end);
            offer(&mut best, bridge.div(li)?, 0, i);
        }
        stack.push(i);
    }
    for &j in &stack {
        let bridge = right_end.sub(gaps[j].right.as_ref().unwrap());
        offer(&mut best, bridge.div(&lens[j])?, j, n - 1);
    }
    let b = best.expect("at least one bounded gap");
    Ok(ThicknessValue::Value { value: b.value, lower: gaps[b.lower].clone(), upper: gaps[b.upper].clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapTag {
    Nice,
    Bad,
    ExactCGap,
}

impl fmt::Display for GapTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapTag::Nice => "nice",
            GapTag::Bad => "bad",
            GapTag::ExactCGap => "C-gap",
        })
    }
}

/// Classification of a gap `U` of `K+` by the ratio `U^L / |U|` against `C`.
/// A C-gap is also C-nice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapClass {
    pub tag: GapTag,
    pub c: Rational,
    pub ratio: Enclosure,
}

impl GapClass {
    pub fn is_nice(&self) -> bool {
        self.tag != GapTag::Bad
    }
}

pub fn classify_gap(gap: &Gap, c: &Rational) -> Result<GapClass> {
    let (Some(lo), Some(_)) = (&gap.left, &gap.right) else {
        return Err(Error::Precondition("classification needs a bounded gap".into()));
    };
    if lo.sign() != Some(Ordering::Greater) {
        return Err(Error::Precondition(format!("gap starting at {lo} is not inside (0, inf)")));
    }
    let ratio = lo.div(&gap.length().unwrap())?;
    let tag = match ratio.compare(&Enclosure::exact(c.clone())) {
        Some(Ordering::Greater) => GapTag::Nice,
        Some(Ordering::Equal) => GapTag::ExactCGap,
        Some(Ordering::Less) => GapTag::Bad,
        None => return Err(Error::Indeterminate(format!("gap ratio {ratio} straddles C = {}", fmt_rational(c)))),
    };
    Ok(GapClass { tag, c: c.clone(), ratio })
}

/// Classifies every bounded gap of the positive part of the cover.
pub fn classify_gaps(cv: &CoverApprox, c: &Rational) -> Result<Vec<(Gap, GapClass)>> {
    let pos = cv.positive_part()?;
    pos.bounded_gaps().map(|g| Ok((g.clone(), classify_gap(g, c)?))).collect()
}

/// Log-C-split of `K+`: bad gaps `U0 > U1 > ...` (U0 the right ray) and
/// the pieces `V_n` between consecutive ones, listed right to left.
#[derive(Clone, Debug)]
pub struct SplitDecomposition {
    pub split_gaps: Vec<Gap>,
    pub split_sets: Vec<CoverApprox>,
    pub finite: bool,
}

pub fn split_decomposition(cv: &CoverApprox, c: &Rational) -> Result<SplitDecomposition> {
    let pos = cv.positive_part()?;
    if pos.intervals.is_empty() {
        return Err(Error::Empty("K+ is empty".into()));
    }
    let last = pos.gaps.len() - 1;
    let mut split_gaps = vec![pos.gaps[last].clone()];
    let mut split_sets = Vec::new();
    let mut run: Vec<CoverInterval> = Vec::new();
    // interval i sits between gaps i and i+1
    for i in (0..pos.intervals.len()).rev() {
        run.push(pos.intervals[i].clone());
        let g = &pos.gaps[i];
        if g.is_bounded() && classify_gap(g, c)?.tag == GapTag::Bad {
            run.reverse();
            split_sets.push(CoverApprox::from_pieces(cv.depth, std::mem::take(&mut run), None)?);
            split_gaps.push(g.clone());
        }
    }
    run.reverse();
    split_sets.push(CoverApprox::from_pieces(cv.depth, run, None)?);
    // a finite cover always yields a finite split
    Ok(SplitDecomposition { split_gaps, split_sets, finite: true })
}

/// A log-C-cover `X ⊆ K-` of a bad gap `W` of `K+`, in reflected (positive)
/// coordinates. `left == None` means X reaches down to 0 (`X^L = -inf` after
/// taking logarithms).
#[derive(Clone, Debug)]
pub struct LogCover {
    pub left: Option<Enclosure>,
    pub right: Enclosure,
    pub pieces: CoverApprox,
    /// `(tau - C) / (1 + C)`
    pub bound: Enclosure,
    /// `X^R / W^R`, must exceed `bound`
    pub upper_margin: Enclosure,
    /// `W^L / X^L`, must exceed `bound` (absent when X reaches 0)
    pub lower_margin: Option<Enclosure>,
}

/// Canonical log-C-cover of the C-bad gap `bad_gap` of `K+`: bounded by the
/// first bad gap of `K-` (from 0) not shorter than `W` above, and the
/// nearest bad gap below that.
pub fn find_cover(cv: &CoverApprox, c: &Rational, bad_gap: &Gap) -> Result<LogCover> {
    let tau = thickness(cv)?;
    let Some(tau) = tau.value() else {
        return Err(Error::Precondition("cover has no bounded gap".into()));
    };
    let ce = Enclosure::exact(c.clone());
    if !tau.certainly_gt(&ce) {
        return Err(Error::Precondition(format!("C = {} is not below the thickness {tau}", fmt_rational(c))));
    }
    if classify_gap(bad_gap, c)?.tag != GapTag::Bad {
        return Err(Error::Precondition("gap is not C-bad".into()));
    }
    let w_len = bad_gap.length().unwrap();
    let neg = cv.negative_part()?;
    if neg.intervals.is_empty() {
        return Err(Error::InsufficientDepth("K- is empty in the cover".into()));
    }
    let mut bad: Vec<&Gap> = Vec::new();
    for g in neg.bounded_gaps() {
        if classify_gap(g, c)?.tag == GapTag::Bad {
            bad.push(g);
        }
    }
    // upper bound: first bad gap with |U1| >= |W|; the right ray otherwise
    let mut upper_idx = None;
    for (k, g) in bad.iter().enumerate() {
        match g.length().unwrap().compare(&w_len) {
            Some(Ordering::Less) => {}
            Some(_) => {
                upper_idx = Some(k);
                break;
            }
            None => return Err(Error::Indeterminate("cannot compare gap lengths".into())),
        }
    }
    let (right, below) = match upper_idx {
        Some(k) => (bad[k].left.clone().unwrap(), &bad[..k]),
        None => (neg.intervals.last().unwrap().right.clone(), &bad[..]),
    };
    let left = below.last().map(|g| g.right.clone().unwrap());
    let zero = Enclosure::from_int(0);
    let pieces = neg.restrict(left.as_ref().unwrap_or(&zero), &right)?;
    let bound = tau.sub(&ce).div(&ce.add(&Enclosure::from_int(1)))?;
    let upper_margin = right.div(bad_gap.right.as_ref().unwrap())?;
    let lower_margin = match &left {
        Some(l) => Some(bad_gap.left.as_ref().unwrap().div(l)?),
        None => None,
    };
    let ok_upper = upper_margin.certainly_gt(&bound);
    let ok_lower = lower_margin.as_ref().is_none_or(|m| m.certainly_gt(&bound));
    if !(ok_upper && ok_lower) {
        return Err(Error::InsufficientDepth(format!(
            "no admissible log-cover at depth {}: margins {upper_margin} / {lower_margin:?} vs {bound}",
            cv.depth
        )));
    }
    Ok(LogCover { left, right, pieces, bound, upper_margin, lower_margin })
}

fn require_positive(name: &str, x: &Rational) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} must be positive, got {}", fmt_rational(x))))
    }
}

/// `log(1 + tau/(1+C)) / log(1 + 1/C)`: lower bound for the thickness of
/// `log K` when every gap of `K > 0` is C-nice.
pub fn log_thickness_bound(tau: &Rational, c: &Rational) -> Result<Enclosure> {
    require_positive("tau", tau)?;
    require_positive("C", c)?;
    let one = Rational::one();
    let num = ln_enclosure(&(&one + tau / (&one + c)), LOG_BITS)?;
    let den = ln_enclosure(&(&one + &one / c), LOG_BITS)?;
    num.div(&den)
}

/// `f_k(x) = log(1 + kx/(1+x)) / log(1+x)`, strictly decreasing with limit
/// `k` at `0+`.
pub fn f_k(k: &Rational, x: &Rational) -> Result<Enclosure> {
    f_k_bits(k, x, LOG_BITS)
}

pub fn f_k_bits(k: &Rational, x: &Rational, bits: u32) -> Result<Enclosure> {
    require_positive("k", k)?;
    require_positive("x", x)?;
    let one = Rational::one();
    let num = ln_enclosure(&(&one + k * x / (&one + x)), bits)?;
    let den = ln_enclosure(&(&one + x), bits)?;
    num.div(&den)
}

/// `C_xy = (x+1)/(xy-1)` and `C_yx = (y+1)/(xy-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NicenessConstants {
    pub x: Rational,
    pub y: Rational,
    pub c_xy: Rational,
    pub c_yx: Rational,
    /// `2(x+1)(y+1) <= (xy-1)^2`
    pub condition: bool,
    /// `((x-C_xy)/(1+C_xy)) * ((y-C_yx)/(1+C_yx))`
    pub product: Rational,
}

pub fn niceness_constants(x: &Rational, y: &Rational) -> Result<NicenessConstants> {
    let one = Rational::one();
    let d = x * y - &one;
    if !d.is_positive() {
        return Err(Error::Precondition(format!("xy = {} must exceed 1", fmt_rational(&(x * y)))));
    }
    let c_xy = (x + &one) / &d;
    let c_yx = (y + &one) / &d;
    let two = Rational::from_integer(2.into());
    let condition = two * (x + &one) * (y + &one) <= &d * &d;
    let product = ((x - &c_xy) / (&one + &c_xy)) * ((y - &c_yx) / (&one + &c_yx));
    if condition {
        debug_assert!(product >= one);
    }
    Ok(NicenessConstants { x: x.clone(), y: y.clone(), c_xy, c_yx, condition, product })
}

/// Both sides `(2(x+1)(y+1), (xy-1)^2)` of the niceness condition, for
/// inputs in a real quadratic field.
pub fn niceness_condition_surd(x: &QuadraticSurd, y: &QuadraticSurd) -> (QuadraticSurd, QuadraticSurd) {
    let one = x.rational(Rational::one());
    let two = x.rational(Rational::from_integer(2.into()));
    let lhs = two.mul(&x.add(&one)).mul(&y.add(&one));
    let d = x.mul(y).sub(&one);
    (lhs, d.mul(&d))
}

/// Splits a cover at one of its largest bounded gaps (the leftmost on ties).
pub fn split_at_max_gap(cv: &CoverApprox) -> Result<Option<(CoverApprox, CoverApprox)>> {
    let mut best: Option<(usize, Enclosure)> = None;
    for (i, g) in cv.gaps.iter().enumerate() {
        let Some(len) = g.length() else { continue };
        match &best {
            None => best = Some((i, len)),
            Some((_, b)) => match len.compare(b) {
                Some(Ordering::Greater) => best = Some((i, len)),
                Some(_) => {}
                None => return Err(Error::Indeterminate("cannot order gap lengths".into())),
            },
        }
    }
    let Some((i, _)) = best else { return Ok(None) };
    // gap i separates intervals i-1 and i
    let left = CoverApprox::from_pieces(cv.depth, cv.intervals[..i].to_vec(), None)?;
    let right = CoverApprox::from_pieces(cv.depth, cv.intervals[i..].to_vec(), None)?;
    Ok(Some((left, right)))
}

/// The exact thickness when all endpoints are rational, `None` when infinite.
pub fn exact_thickness(cv: &CoverApprox) -> Result<Option<Rational>> {
    match thickness(cv)? {
        ThicknessValue::Infinite => Ok(None),
        ThicknessValue::Value { value, .. } => value
            .exact_value()
            .cloned()
            .map(Some)
            .ok_or_else(|| Error::Indeterminate("thickness of an inexact cover".into())),
    }
}
