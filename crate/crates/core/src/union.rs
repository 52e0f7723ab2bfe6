//! Normalized unions of closed intervals with exact rational endpoints.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Sorted, pairwise disjoint, non-touching closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

/// Sorts and coalesces overlapping or touching intervals.
pub fn normalize_union(mut raw: Vec<Interval>) -> IntervalUnion {
    raw.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.hi.cmp(&a.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
    for iv in raw {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    IntervalUnion { intervals: out }
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn single(lo: Rational, hi: Rational) -> Self {
        IntervalUnion { intervals: vec![Interval::new(lo, hi)] }
    }

    /// Caller guarantees the normalization invariant.
    pub(crate) fn from_sorted(intervals: Vec<Interval>) -> Self {
        debug_assert!(intervals.windows(2).all(|w| w[0].hi < w[1].lo));
        IntervalUnion { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn hull(&self) -> Option<Interval> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some(Interval::new(first.lo.clone(), last.hi.clone()))
    }

    /// Bounded gaps between consecutive intervals, as open `(lo, hi)` pairs.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].hi.clone(), w[1].lo.clone()))
            .collect()
    }

    pub fn largest_gap(&self) -> Option<Rational> {
        self.gaps().into_iter().map(|(a, b)| b - a).max()
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|iv| &iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    /// Index of the interval containing `x`.
    pub fn component_of(&self, x: &Rational) -> Option<usize> {
        let idx = self.intervals.partition_point(|iv| &iv.hi < x);
        self.intervals.get(idx).filter(|iv| iv.contains(x)).map(|_| idx)
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|iv| {
            let idx = other.intervals.partition_point(|o| o.hi < iv.lo);
            other.intervals.get(idx).is_some_and(|o| o.lo <= iv.lo && iv.hi <= o.hi)
        })
    }

    pub fn scale(&self, a: &Rational) -> IntervalUnion {
        if a.is_zero() {
            return if self.is_empty() { IntervalUnion::empty() } else { IntervalUnion::single(Rational::zero(), Rational::zero()) };
        }
        let mut out: Vec<Interval> = self
            .intervals
            .iter()
            .map(|iv| {
                let (x, y) = (&iv.lo * a, &iv.hi * a);
                if a.is_negative() {
                    Interval::new(y, x)
                } else {
                    Interval::new(x, y)
                }
            })
            .collect();
        if a.is_negative() {
            out.reverse();
        }
        IntervalUnion { intervals: out }
    }

    pub fn shift(&self, b: &Rational) -> IntervalUnion {
        IntervalUnion {
            intervals: self.intervals.iter().map(|iv| Interval::new(&iv.lo + b, &iv.hi + b)).collect(),
        }
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = &self.intervals[i];
            let b = &other.intervals[j];
            let lo = a.lo.clone().max(b.lo.clone());
            let hi = a.hi.clone().min(b.hi.clone());
            if lo <= hi {
                out.push(Interval::new(lo, hi));
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // touching pieces from different pairs can only coincide at a point
        normalize_union(out)
    }

    /// Intersection with the closed window `[lo, hi]`.
    pub fn clip(&self, lo: &Rational, hi: &Rational) -> IntervalUnion {
        self.intersect(&IntervalUnion::single(lo.clone(), hi.clone()))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        normalize_union(all)
    }

    /// Distance from `x` to the union (0 inside).
    pub fn distance_to(&self, x: &Rational) -> Option<Rational> {
        if self.is_empty() {
            return None;
        }
        let idx = self.intervals.partition_point(|iv| &iv.hi < x);
        let mut best: Option<Rational> = None;
        if let Some(iv) = self.intervals.get(idx) {
            best = Some(if &iv.lo <= x { Rational::zero() } else { &iv.lo - x });
        }
        if idx > 0 {
            let d = x - &self.intervals[idx - 1].hi;
            best = Some(match best {
                Some(b) if b <= d => b,
                _ => d,
            });
        }
        best
    }

    /// CSV with header `left_num,left_den,right_num,right_den`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("left_num,left_den,right_num,right_den\n");
        for iv in &self.intervals {
            s.push_str(&format!("{},{},{},{}\n", iv.lo.numer(), iv.lo.denom(), iv.hi.numer(), iv.hi.denom()));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<IntervalUnion> {
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("left_num")) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(Error::Parse { line: i + 1, message: "expected 4 columns".into() });
            }
            let parse = |n: &str, d: &str| {
                parse_rational(&format!("{n}/{d}")).map_err(|_| Error::Parse { line: i + 1, message: format!("bad number {n}/{d}") })
            };
            let lo = parse(cols[0], cols[1])?;
            let hi = parse(cols[2], cols[3])?;
            if lo > hi {
                return Err(Error::Parse { line: i + 1, message: "left endpoint exceeds right".into() });
            }
            raw.push(Interval::new(lo, hi));
        }
        Ok(normalize_union(raw))
    }
}

/// Hausdorff distance between two nonempty unions, computed exactly.
pub fn hausdorff(a: &IntervalUnion, b: &IntervalUnion) -> Option<Rational> {
    let d1 = directed_hausdorff(a, b)?;
    let d2 = directed_hausdorff(b, a)?;
    Some(d1.max(d2))
}

/// `sup_{x in a} dist(x, b)`; the sup is attained at an endpoint of `a` or at
/// the midpoint of a gap of `b` lying inside an interval of `a`.
fn directed_hausdorff(a: &IntervalUnion, b: &IntervalUnion) -> Option<Rational> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let two = Rational::from_integer(2.into());
    let mut best = Rational::zero();
    let mut consider = |x: &Rational| {
        let d = b.distance_to(x).unwrap();
        if d > best {
            best = d;
        }
    };
    for iv in a.intervals() {
        consider(&iv.lo);
        consider(&iv.hi);
    }
    for (glo, ghi) in b.gaps() {
        let mid = (&glo + &ghi) / &two;
        if a.contains_point(&mid) {
            consider(&mid);
        }
    }
    Some(best)
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|iv| format!("[{}, {}]", fmt_rational(&iv.lo), fmt_rational(&iv.hi)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(int(a), int(b))
    }

    #[test]
    fn touching_intervals_merge() {
        let u = normalize_union(vec![iv(0, 1), iv(1, 2)]);
        assert_eq!(u.intervals(), &[iv(0, 2)]);
    }

    #[test]
    fn sort_only() {
        let u = normalize_union(vec![iv(3, 4), iv(0, 1)]);
        assert_eq!(u.intervals(), &[iv(0, 1), iv(3, 4)]);
    }

    #[test]
    fn overlap_and_degenerate_point() {
        let u = normalize_union(vec![iv(0, 2), iv(1, 3), iv(5, 5)]);
        assert_eq!(u.intervals(), &[iv(0, 3), iv(5, 5)]);
    }

    #[test]
    fn empty_input_gives_empty_union() {
        assert!(normalize_union(vec![]).is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let u = normalize_union(vec![Interval::new(rat(1, 3), rat(2, 3)), iv(1, 2)]);
        let back = IntervalUnion::from_csv(&u.to_csv()).unwrap();
        assert_eq!(u, back);
    }

    #[test]
    fn hausdorff_counts_filled_gaps() {
        let a = normalize_union(vec![iv(0, 1), iv(3, 4)]);
        let b = normalize_union(vec![iv(0, 4)]);
        assert_eq!(hausdorff(&a, &b).unwrap(), int(1));
        assert_eq!(hausdorff(&a, &a).unwrap(), int(0));
    }

    #[test]
    fn intersect_and_subset() {
        let a = normalize_union(vec![iv(0, 2), iv(4, 6)]);
        let b = normalize_union(vec![iv(1, 5)]);
        let c = a.intersect(&b);
        assert_eq!(c.intervals(), &[iv(1, 2), iv(4, 5)]);
        assert!(c.is_subset_of(&a) && c.is_subset_of(&b));
        assert!(!a.is_subset_of(&b));
    }
}
