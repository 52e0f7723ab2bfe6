//! Minkowski sums and products of interval unions, log/exp images, and the
//! structural classification of product sweeps.
//!
//! Both operations first fill gaps that cannot survive the operation (a gap
//! of `A` no longer than every interval of `B` is covered by `A + B`
//! anyway; multiplicatively, a gap `(p, q)` of a positive `A` with
//! `q/p <= d/c` for every `[c, d]` in `B`). This keeps results exactly
//! set-equal while shrinking the pairwise enumeration by orders of magnitude
//! on thick sets.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cover::{CoverApprox, CoverInterval};
use crate::enclosure::{exp_of, ln_of};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, pow, Rational};
use crate::union::{hausdorff, normalize_union, Interval, IntervalUnion};

fn fill_gaps(u: &IntervalUnion, keep: impl Fn(&Rational, &Rational) -> bool) -> IntervalUnion {
    let mut out: Vec<Interval> = Vec::with_capacity(u.len());
    for iv in u.intervals() {
        match out.last_mut() {
            Some(last) if !keep(&last.hi, &iv.lo) => last.hi = iv.hi.clone(),
            _ => out.push(iv.clone()),
        }
    }
    IntervalUnion::from_sorted(out)
}

fn min_length(u: &IntervalUnion) -> Option<Rational> {
    u.intervals().iter().map(Interval::len).min()
}

/// Fills gaps of `A` shorter than or equal to every interval of `B`, and
/// vice versa, until neither changes. `A + B` is unchanged.
pub fn reduce_for_sum(a: &IntervalUnion, b: &IntervalUnion) -> (IntervalUnion, IntervalUnion) {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let (la, lb) = (a.len(), b.len());
        if let Some(m) = min_length(&b) {
            a = fill_gaps(&a, |p, q| (q - p) > m);
        }
        if let Some(m) = min_length(&a) {
            b = fill_gaps(&b, |p, q| (q - p) > m);
        }
        if a.len() == la && b.len() == lb {
            return (a, b);
        }
    }
}

/// `A + B`, set-equal to `{x + y}`.
pub fn minkowski_sum(a: &IntervalUnion, b: &IntervalUnion) -> IntervalUnion {
    if a.is_empty() || b.is_empty() {
        return IntervalUnion::empty();
    }
    let (a, b) = reduce_for_sum(a, b);
    let mut raw = Vec::with_capacity(a.len() * b.len());
    for x in a.intervals() {
        for y in b.intervals() {
            raw.push(Interval::new(&x.lo + &y.lo, &x.hi + &y.hi));
        }
    }
    normalize_union(raw)
}

struct SignParts {
    neg: IntervalUnion,
    zero: Option<Interval>,
    pos: IntervalUnion,
}

/// Splits into the reflected negative part `-(A ∩ (-inf,0))` (as positive
/// intervals), the interval containing 0, and the positive part.
fn sign_parts(u: &IntervalUnion) -> SignParts {
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    let mut zero = None;
    for iv in u.intervals() {
        if iv.hi.is_negative() {
            neg.push(Interval::new(-&iv.hi, -&iv.lo));
        } else if iv.lo.is_positive() {
            pos.push(iv.clone());
        } else {
            zero = Some(iv.clone());
        }
    }
    neg.reverse();
    SignParts { neg: IntervalUnion::from_sorted(neg), zero, pos: IntervalUnion::from_sorted(pos) }
}

fn min_ratio(u: &IntervalUnion) -> Option<Rational> {
    u.intervals().iter().map(|iv| &iv.hi / &iv.lo).min()
}

/// Multiplicative counterpart of [`reduce_for_sum`] for unions inside
/// `(0, inf)`.
pub fn reduce_for_product(a: &IntervalUnion, b: &IntervalUnion) -> (IntervalUnion, IntervalUnion) {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let (la, lb) = (a.len(), b.len());
        if let Some(m) = min_ratio(&b) {
            a = fill_gaps(&a, |p, q| q > &(p * &m));
        }
        if let Some(m) = min_ratio(&a) {
            b = fill_gaps(&b, |p, q| q > &(p * &m));
        }
        if a.len() == la && b.len() == lb {
            return (a, b);
        }
    }
}

fn positive_product(a: &IntervalUnion, b: &IntervalUnion, out: &mut Vec<Interval>, negate: bool) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    let (a, b) = reduce_for_product(a, b);
    out.reserve(a.len() * b.len());
    for x in a.intervals() {
        for y in b.intervals() {
            let (lo, hi) = (&x.lo * &y.lo, &x.hi * &y.hi);
            out.push(if negate { Interval::new(-hi, -lo) } else { Interval::new(lo, hi) });
        }
    }
}

/// Product of an interval with an interval, as `[min, max]` of the four
/// endpoint products.
pub fn interval_product(x: &Interval, y: &Interval) -> Interval {
    let p = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    Interval::new(lo, hi)
}

/// `A · B`, set-equal to `{x y}`, for unions of any sign.
pub fn product(a: &IntervalUnion, b: &IntervalUnion) -> IntervalUnion {
    if a.is_empty() || b.is_empty() {
        return IntervalUnion::empty();
    }
    let pa = sign_parts(a);
    let pb = sign_parts(b);
    let mut raw = Vec::new();
    positive_product(&pa.pos, &pb.pos, &mut raw, false);
    positive_product(&pa.neg, &pb.neg, &mut raw, false);
    positive_product(&pa.pos, &pb.neg, &mut raw, true);
    positive_product(&pa.neg, &pb.pos, &mut raw, true);
    // each product with a 0-containing interval contains 0, so its union is
    // the product with the hull
    if let Some(z) = &pa.zero {
        raw.push(interval_product(z, &b.hull().unwrap()));
    }
    if let Some(z) = &pb.zero {
        raw.push(interval_product(z, &a.hull().unwrap()));
    }
    normalize_union(raw)
}

/// `log A` for `A > 0`, endpoints enclosed with width at most `2^-bits`.
pub fn log_map(a: &IntervalUnion, bits: u32) -> Result<CoverApprox> {
    log_map_cover(&CoverApprox::from_union(a), bits)
}

pub fn log_map_cover(a: &CoverApprox, bits: u32) -> Result<CoverApprox> {
    let mut pieces = Vec::with_capacity(a.intervals.len());
    for iv in &a.intervals {
        if iv.left.sign() != Some(Ordering::Greater) {
            return Err(Error::Precondition(format!("log of an interval starting at {}", iv.left)));
        }
        pieces.push(CoverInterval {
            left: ln_of(&iv.left, bits + 8)?.round_out(bits),
            right: ln_of(&iv.right, bits + 8)?.round_out(bits),
        });
    }
    CoverApprox::from_pieces(a.depth, pieces, None)
}

/// `exp A`, endpoints enclosed with relative width about `2^-bits`.
pub fn exp_map(a: &IntervalUnion, bits: u32) -> Result<CoverApprox> {
    exp_map_cover(&CoverApprox::from_union(a), bits)
}

pub fn exp_map_cover(a: &CoverApprox, bits: u32) -> Result<CoverApprox> {
    let pieces = a
        .intervals
        .iter()
        .map(|iv| CoverInterval {
            left: exp_of(&iv.left, bits + 8).round_out(bits),
            right: exp_of(&iv.right, bits + 8).round_out(bits),
        })
        .collect();
    CoverApprox::from_pieces(a.depth, pieces, None)
}

/// `exp(log A + log B)` through rational outer covers at every step; a
/// superset of `A · B` for positive unions.
pub fn product_via_logs(a: &IntervalUnion, b: &IntervalUnion, bits: u32) -> Result<IntervalUnion> {
    let la = log_map(a, bits)?.outer();
    let lb = log_map(b, bits)?.outer();
    Ok(exp_map(&minkowski_sum(&la, &lb), bits)?.outer())
}

/// Points certified to lie in the true set, sorted. `dense` marks the full
/// pairwise set; otherwise only extremes are kept.
#[derive(Clone, Debug, Default)]
pub struct InnerPoints {
    pub points: Vec<Rational>,
    pub dense: bool,
}

impl InnerPoints {
    /// `{x y}` over certified points of both factors; falls back to the
    /// extreme products when the full set would exceed `limit` points.
    pub fn products(p: &[Rational], q: &[Rational], limit: usize) -> InnerPoints {
        Self::combine(p, q, limit, false)
    }

    pub fn sums(p: &[Rational], q: &[Rational], limit: usize) -> InnerPoints {
        Self::combine(p, q, limit, true)
    }

    fn combine(p: &[Rational], q: &[Rational], limit: usize, sum: bool) -> InnerPoints {
        let op = |x: &Rational, y: &Rational| if sum { x + y } else { x * y };
        if p.is_empty() || q.is_empty() {
            return InnerPoints::default();
        }
        let dense = p.len().saturating_mul(q.len()) <= limit;
        if !dense {
            let mut points: Vec<Rational> = Vec::with_capacity(4);
            for x in extremes(p) {
                for y in extremes(q) {
                    points.push(op(x, y));
                }
            }
            points.sort();
            points.dedup();
            let lo = points.first().cloned().unwrap();
            let hi = points.last().cloned().unwrap();
            points = if lo == hi { vec![lo] } else { vec![lo, hi] };
            return InnerPoints { points, dense };
        }
        // integer arithmetic over a common denominator
        let (dp, ap) = common_denominator(p);
        let (dq, aq) = common_denominator(q);
        let mut ints: Vec<BigInt> = Vec::with_capacity(ap.len() * aq.len());
        for x in &ap {
            for y in &aq {
                ints.push(if sum { x * &dq + y * &dp } else { x * y });
            }
        }
        ints.sort_unstable();
        ints.dedup();
        let den = &dp * &dq;
        let points = ints.into_iter().map(|n| Rational::new(n, den.clone())).collect();
        InnerPoints { points, dense }
    }
}

/// `(D, [x * D])` with `D` the least common denominator.
fn common_denominator(v: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (d, scaled)
}

fn extremes(p: &[Rational]) -> Vec<&Rational> {
    let lo = p.iter().min().unwrap();
    let hi = p.iter().max().unwrap();
    vec![lo, hi]
}

/// Bounded gaps of `cover` with a certified point strictly on each side,
/// largest first. Each is a genuine gap of any set between the points and
/// the cover.
pub fn certified_gaps(cover: &IntervalUnion, inner: &[Rational]) -> Vec<(Rational, Rational)> {
    let (Some(first), Some(last)) = (inner.first(), inner.last()) else { return vec![] };
    let mut gaps: Vec<(Rational, Rational)> =
        cover.gaps().into_iter().filter(|(lo, hi)| first < lo && last > hi).collect();
    gaps.sort_by(|x, y| (&y.1 - &y.0).cmp(&(&x.1 - &x.0)).then_with(|| x.0.cmp(&y.0)));
    gaps
}

/// The largest certified gap, if any.
pub fn gap_certificate(cover: &IntervalUnion, inner: &[Rational]) -> Option<(Rational, Rational)> {
    certified_gaps(cover, inner).into_iter().next()
}

/// Largest spacing between consecutive inner points within any component.
pub fn evidence_gap_bound(cover: &IntervalUnion, inner: &[Rational]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for iv in cover.intervals() {
        let start = inner.partition_point(|x| x < &iv.lo);
        let end = inner.partition_point(|x| x <= &iv.hi);
        let pts = &inner[start..end];
        if pts.first() != Some(&iv.lo) || pts.last() != Some(&iv.hi) {
            // component endpoints not certified: no bound
            return None;
        }
        for w in pts.windows(2) {
            let d = &w[1] - &w[0];
            if best.as_ref().is_none_or(|b| &d > b) {
                best = Some(d);
            }
        }
    }
    Some(best.unwrap_or_else(Rational::zero))
}

/// Scale periodicity near 0: with `t` the right end of the union, the
/// window `[r^(k+1) t, r^k t]` scaled by `r^-k` must match the top window
/// (Hausdorff distance at most `slack`) for `k = 1..=periods`. The top
/// window must have an internal gap and 0 must belong to the union.
pub fn scale_periodic(u: &IntervalUnion, ratio: &Rational, periods: u32, slack: &Rational) -> bool {
    let Some(h) = u.hull() else { return false };
    let t = h.hi;
    if !t.is_positive() || !(ratio.is_positive() && ratio < &Rational::one()) || !u.contains_point(&Rational::zero()) {
        return false;
    }
    let window = |k: u32| {
        let hi = &t * pow(ratio, k);
        let lo = &hi * ratio;
        u.clip(&lo, &hi).scale(&(Rational::one() / pow(ratio, k)))
    };
    let top = window(0);
    if top.len() < 2 {
        return false;
    }
    (1..=periods).all(|k| {
        let w = window(k);
        if slack.is_zero() {
            w == top
        } else {
            !w.is_empty() && hausdorff(&w, &top).is_some_and(|d| &d <= slack)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictTag {
    SingleInterval,
    Components(usize),
    ZeroPlusGeometricTail(Rational),
    GapCertified(Rational, Rational),
    /// nonempty single-component covers whose diameter shrinks by this
    /// exact ratio per depth
    SinglePoint(Rational),
    Indeterminate,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictTag::SingleInterval => write!(f, "SingleInterval"),
            VerdictTag::Components(k) => write!(f, "Components({k})"),
            VerdictTag::ZeroPlusGeometricTail(r) => write!(f, "ZeroPlusGeometricTail({})", fmt_rational(r)),
            VerdictTag::GapCertified(a, b) => write!(f, "GapCertified({}, {})", fmt_rational(a), fmt_rational(b)),
            VerdictTag::SinglePoint(r) => write!(f, "SinglePoint({})", fmt_rational(r)),
            VerdictTag::Indeterminate => write!(f, "Indeterminate"),
        }
    }
}

impl VerdictTag {
    /// Gaps of outer covers are theorems; everything else is evidence.
    pub fn is_rigorous(&self) -> bool {
        matches!(self, VerdictTag::GapCertified(..))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Evidence {
    /// rigorous: gaps of the final outer cover with certified points on both sides
    pub certified_gaps: Vec<(Rational, Rational)>,
    pub hull: Option<Interval>,
    pub components: usize,
    /// consecutive depths with constant hull and component count
    pub stable_depths: usize,
    pub periods_checked: u32,
    /// max spacing of certified points inside components (final depth)
    pub evidence_gap_bound: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureVerdict {
    pub tag: VerdictTag,
    pub depths: (u32, u32),
    pub evidence: Evidence,
}

#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub depth: u32,
    pub union: IntervalUnion,
    pub inner: InnerPoints,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub persistence: usize,
    pub periods: u32,
    pub slack: Rational,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { persistence: 3, periods: 2, slack: Rational::zero() }
    }
}

/// Verdict priority: scale periodicity (only with a ratio hint), then
/// stabilization of hull and component count, then a certified gap.
pub fn classify_structure(
    sweep: &[SweepEntry],
    ratio_hint: Option<&Rational>,
    opts: &ClassifyOptions,
) -> Result<StructureVerdict> {
    let last = sweep.last().ok_or_else(|| Error::Empty("empty sweep".into()))?;
    let depths = (sweep[0].depth, last.depth);
    let mut stable = 1;
    for w in sweep.windows(2).rev() {
        let same = w[1].depth == w[0].depth + 1 && w[0].union.hull() == w[1].union.hull() && w[0].union.len() == w[1].union.len();
        if !same {
            break;
        }
        stable += 1;
    }
    let evidence = Evidence {
        certified_gaps: certified_gaps(&last.union, &last.inner.points),
        hull: last.union.hull(),
        components: last.union.len(),
        stable_depths: stable,
        periods_checked: if ratio_hint.is_some() { opts.periods } else { 0 },
        evidence_gap_bound: if last.inner.dense { evidence_gap_bound(&last.union, &last.inner.points) } else { None },
    };
    let tag = if let Some(r) = ratio_hint.filter(|r| scale_periodic(&last.union, r, opts.periods, &opts.slack)) {
        VerdictTag::ZeroPlusGeometricTail(r.clone())
    } else if stable >= opts.persistence && !last.union.is_empty() {
        match last.union.len() {
            1 => VerdictTag::SingleInterval,
            k => VerdictTag::Components(k),
        }
    } else if let Some((a, b)) = evidence.certified_gaps.first() {
        VerdictTag::GapCertified(a.clone(), b.clone())
    } else {
        VerdictTag::Indeterminate
    };
    Ok(StructureVerdict { tag, depths, evidence })
}
