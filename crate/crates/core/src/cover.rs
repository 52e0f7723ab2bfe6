//! Finite outer covers of constructions.
//!
//! `refine(c, d, n)` returns a finite union of closed intervals containing
//! the limit set of `c`. Endpoints are enclosures: exact for rational data,
//! genuine intervals where an irrational scale is involved.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::construction::{BlockCount, Construction};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::union::{normalize_union, Interval, IntervalUnion};

pub const DEFAULT_DEPTH: u32 = 8;
pub const DEFAULT_STACK_BLOCKS: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInterval {
    pub left: Enclosure,
    pub right: Enclosure,
}

impl CoverInterval {
    pub fn exact(lo: Rational, hi: Rational) -> Self {
        CoverInterval { left: Enclosure::exact(lo), right: Enclosure::exact(hi) }
    }

    fn map(&self, scale: &Enclosure, shift: &Rational) -> CoverInterval {
        let s = Enclosure::exact(shift.clone());
        let a = self.left.mul(scale).add(&s);
        let b = self.right.mul(scale).add(&s);
        if scale.sign() == Some(Ordering::Less) {
            CoverInterval { left: b, right: a }
        } else {
            CoverInterval { left: a, right: b }
        }
    }
}

/// A complementary component: `left == None` is the ray to `-inf`,
/// `right == None` the ray to `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub left: Option<Enclosure>,
    pub right: Option<Enclosure>,
}

impl Gap {
    pub fn is_bounded(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }

    /// Length, `None` for the unbounded rays.
    pub fn length(&self) -> Option<Enclosure> {
        Some(self.right.as_ref()?.sub(self.left.as_ref()?))
    }
}

#[derive(Clone, Debug)]
pub struct CoverApprox {
    pub depth: u32,
    pub intervals: Vec<CoverInterval>,
    pub gaps: Vec<Gap>,
    pub provenance: Option<Construction>,
}

impl CoverApprox {
    /// Builds a cover from raw pieces, sorting and merging; fails if the
    /// order of two enclosure endpoints cannot be decided.
    pub fn from_pieces(depth: u32, pieces: Vec<CoverInterval>, provenance: Option<Construction>) -> Result<CoverApprox> {
        let intervals = merge_pieces(pieces)?;
        let gaps = gaps_of(&intervals);
        Ok(CoverApprox { depth, intervals, gaps, provenance })
    }

    pub fn from_union(u: &IntervalUnion) -> CoverApprox {
        let intervals: Vec<CoverInterval> =
            u.intervals().iter().map(|iv| CoverInterval::exact(iv.lo.clone(), iv.hi.clone())).collect();
        let gaps = gaps_of(&intervals);
        CoverApprox { depth: 0, intervals, gaps, provenance: None }
    }

    pub fn is_exact(&self) -> bool {
        self.intervals.iter().all(|iv| iv.left.is_exact() && iv.right.is_exact())
    }

    pub fn bounded_gaps(&self) -> impl Iterator<Item = &Gap> {
        self.gaps.iter().filter(|g| g.is_bounded())
    }

    /// Rational outer cover: each interval widened to `[left.lo, right.hi]`.
    pub fn outer(&self) -> IntervalUnion {
        normalize_union(
            self.intervals
                .iter()
                .map(|iv| Interval::new(iv.left.lo().clone(), iv.right.hi().clone()))
                .collect(),
        )
    }

    /// CSV with header `left_lo,left_hi,right_lo,right_hi`, exact rationals.
    pub fn to_csv(&self) -> String {
        let f = crate::rational::fmt_rational;
        let mut s = String::from("left_lo,left_hi,right_lo,right_hi\n");
        for iv in &self.intervals {
            s.push_str(&format!("{},{},{},{}\n", f(iv.left.lo()), f(iv.left.hi()), f(iv.right.lo()), f(iv.right.hi())));
        }
        s
    }

    /// Hull as enclosures of the extreme endpoints.
    pub fn hull(&self) -> Option<(Enclosure, Enclosure)> {
        Some((self.intervals.first()?.left.clone(), self.intervals.last()?.right.clone()))
    }

    /// Pieces lying strictly right of 0, with a straddling piece clipped at 0.
    pub fn positive_part(&self) -> Result<CoverApprox> {
        let zero = Enclosure::exact(Rational::zero());
        let mut out = Vec::new();
        for iv in &self.intervals {
            match iv.right.compare(&zero) {
                Some(Ordering::Greater) => {}
                Some(_) => continue,
                None => return Err(Error::Indeterminate("cover endpoint straddles 0".into())),
            }
            match iv.left.compare(&zero) {
                Some(Ordering::Greater) => out.push(iv.clone()),
                Some(_) => out.push(CoverInterval { left: zero.clone(), right: iv.right.clone() }),
                None => return Err(Error::Indeterminate("cover endpoint straddles 0".into())),
            }
        }
        CoverApprox::from_pieces(self.depth, out, None)
    }

    /// Reflection `x -> -x` of the pieces left of 0 (the set `K_-`).
    pub fn negative_part(&self) -> Result<CoverApprox> {
        let reflected: Vec<CoverInterval> = self
            .intervals
            .iter()
            .map(|iv| CoverInterval { left: iv.right.neg(), right: iv.left.neg() })
            .collect();
        let mirrored = CoverApprox::from_pieces(self.depth, reflected, None)?;
        mirrored.positive_part()
    }

    /// Pieces inside the closed window `[lo, hi]` (clipping at the window).
    pub fn restrict(&self, lo: &Enclosure, hi: &Enclosure) -> Result<CoverApprox> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            let left_ok = cmp_edge(&iv.right, lo);
            let right_ok = cmp_edge(&iv.left, hi);
            match (left_ok, right_ok) {
                (Some(Ordering::Less), _) | (_, Some(Ordering::Greater)) => continue,
                (None, _) | (_, None) => return Err(Error::Indeterminate("window edge inside an endpoint enclosure".into())),
                _ => {}
            }
            let left = match cmp_edge(&iv.left, lo) {
                Some(Ordering::Less) => lo.clone(),
                Some(_) => iv.left.clone(),
                None => return Err(Error::Indeterminate("window edge inside an endpoint enclosure".into())),
            };
            let right = match cmp_edge(&iv.right, hi) {
                Some(Ordering::Greater) => hi.clone(),
                Some(_) => iv.right.clone(),
                None => return Err(Error::Indeterminate("window edge inside an endpoint enclosure".into())),
            };
            out.push(CoverInterval { left, right });
        }
        CoverApprox::from_pieces(self.depth, out, None)
    }
}

/// Window edges are often endpoints of the cover itself; an identical
/// enclosure is taken to be the same point.
fn cmp_edge(x: &Enclosure, edge: &Enclosure) -> Option<Ordering> {
    if x == edge {
        Some(Ordering::Equal)
    } else {
        x.compare(edge)
    }
}

fn merge_pieces(mut pieces: Vec<CoverInterval>) -> Result<Vec<CoverInterval>> {
    pieces.sort_by(|a, b| a.left.lo().cmp(b.left.lo()).then_with(|| a.left.hi().cmp(b.left.hi())));
    let mut out: Vec<CoverInterval> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) => {
                if p.left.hi() <= last.right.lo() {
                    last.right = last.right.max(&p.right);
                } else if p.left.lo() > last.right.hi() {
                    out.push(p);
                } else {
                    return Err(Error::Indeterminate(format!(
                        "cannot order endpoints {} and {}",
                        last.right, p.left
                    )));
                }
            }
            None => out.push(p),
        }
    }
    Ok(out)
}

fn gaps_of(intervals: &[CoverInterval]) -> Vec<Gap> {
    if intervals.is_empty() {
        return vec![];
    }
    let mut gaps = Vec::with_capacity(intervals.len() + 1);
    gaps.push(Gap { left: None, right: Some(intervals[0].left.clone()) });
    for w in intervals.windows(2) {
        gaps.push(Gap { left: Some(w[0].right.clone()), right: Some(w[1].left.clone()) });
    }
    gaps.push(Gap { left: Some(intervals.last().unwrap().right.clone()), right: None });
    gaps
}

/// Depth-`depth` outer cover. Infinite stacks keep `stack_blocks` explicit
/// blocks plus one tail interval `[0, ratio^stack_blocks * hull_right]`.
pub fn refine(c: &Construction, depth: u32, stack_blocks: u32) -> Result<CoverApprox> {
    c.validate()?;
    if stack_blocks == 0 {
        return Err(Error::Precondition("stack_blocks must be at least 1".into()));
    }
    let pieces = pieces(c, depth, stack_blocks)?;
    CoverApprox::from_pieces(depth, pieces, Some(c.clone()))
}

fn pieces(c: &Construction, depth: u32, stack_blocks: u32) -> Result<Vec<CoverInterval>> {
    match c {
        Construction::Subdivision(s) => {
            let mut current = vec![(s.hull.0.clone(), s.hull.1.clone())];
            if !s.levels.is_empty() {
                for k in 0..depth as usize {
                    let pattern = &s.levels[k.min(s.levels.len() - 1)];
                    let mut next = Vec::with_capacity(current.len() * pattern.len());
                    for (a, b) in &current {
                        let w = b - a;
                        for (x, y) in pattern {
                            next.push((a + &w * x, a + &w * y));
                        }
                    }
                    current = next;
                }
            }
            Ok(current.into_iter().map(|(a, b)| CoverInterval::exact(a, b)).collect())
        }
        Construction::Stack(st) => {
            let block = pieces(&st.block, depth, stack_blocks)?;
            let (blo, bhi) = st.block.hull()?;
            let explicit = match st.count {
                BlockCount::Finite(n) => n.min(stack_blocks),
                BlockCount::Infinite => stack_blocks,
            };
            let mut positive = Vec::new();
            let mut factor = Rational::from_integer(1.into());
            for _ in 0..explicit {
                let f = Enclosure::exact(factor.clone());
                positive.extend(block.iter().map(|iv| iv.map(&f, &Rational::zero())));
                factor *= &st.ratio;
            }
            let tail_left = match st.count {
                BlockCount::Finite(n) if n > stack_blocks => Some(if st.includes_zero {
                    Enclosure::exact(Rational::zero())
                } else {
                    blo.scale(&crate::rational::pow(&st.ratio, n - 1))
                }),
                BlockCount::Finite(_) => None,
                BlockCount::Infinite => Some(Enclosure::exact(Rational::zero())),
            };
            if let Some(left) = tail_left {
                // tail bracket keeps the superset property
                positive.push(CoverInterval { left, right: bhi.scale(&factor) });
            } else if st.includes_zero {
                positive.push(CoverInterval::exact(Rational::zero(), Rational::zero()));
            }
            let mut all = positive.clone();
            if let Some(sigma) = &st.negative_scale {
                let s = sigma.value()?.neg();
                all.extend(positive.iter().map(|iv| iv.map(&s, &Rational::zero())));
            }
            Ok(all)
        }
        Construction::Affine(a) => {
            let s = a.scale.value()?;
            Ok(pieces(&a.inner, depth, stack_blocks)?.iter().map(|iv| iv.map(&s, &a.shift)).collect())
        }
        Construction::Union(parts) => {
            let mut all = Vec::new();
            for p in parts {
                all.extend(pieces(p, depth, stack_blocks)?);
            }
            Ok(all)
        }
    }
}

/// Sorted endpoints of the cover intervals. Exact entries are points of the
/// underlying set (children touch hull endpoints, tails end at block ends).
pub fn cover_endpoints(cv: &CoverApprox) -> Vec<Enclosure> {
    let mut pts = Vec::with_capacity(cv.intervals.len() * 2);
    for iv in &cv.intervals {
        pts.push(iv.left.clone());
        if iv.right != iv.left {
            pts.push(iv.right.clone());
        }
    }
    pts
}

/// Exact endpoints only, as rationals.
pub fn certified_points(cv: &CoverApprox) -> Vec<Rational> {
    cover_endpoints(cv).into_iter().filter_map(|e| e.exact_value().cloned()).collect()
}
