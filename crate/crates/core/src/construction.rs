//! Declarative recursive descriptions of Cantor sets.
//!
//! A [`Construction`] is refinable to any depth by [`crate::cover::refine`].
//! Subdivision children always touch both hull endpoints, so every endpoint
//! produced by refinement is a genuine point of the limit set.

use num_traits::{One, Signed, Zero};

use crate::enclosure::{sqrt_enclosure, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};

/// A multiplier `factor * sqrt(radicand)`; the root is optional.
///
/// The root is stored symbolically (radicand and precision) so that spec
/// files serialize it exactly; its value is an enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    pub factor: Rational,
    pub root: Option<Root>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub radicand: Rational,
    pub precision: Rational,
}

impl Scalar {
    pub fn exact(r: Rational) -> Self {
        Scalar { factor: r, root: None }
    }

    pub fn sqrt(factor: Rational, radicand: Rational, precision: Rational) -> Self {
        Scalar { factor, root: Some(Root { radicand, precision }) }
    }

    pub fn value(&self) -> Result<Enclosure> {
        match &self.root {
            None => Ok(Enclosure::exact(self.factor.clone())),
            Some(r) => {
                let prec = if self.factor.is_zero() { r.precision.clone() } else { &r.precision / self.factor.abs() };
                Ok(sqrt_enclosure(&r.radicand, &prec)?.scale(&self.factor))
            }
        }
    }

    pub fn render(&self) -> String {
        match &self.root {
            None => fmt_rational(&self.factor),
            Some(r) => format!(
                "{}*sqrt({})@{}",
                fmt_rational(&self.factor),
                fmt_rational(&r.radicand),
                fmt_rational(&r.precision)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockCount {
    Finite(u32),
    Infinite,
}

/// Hull interval plus, for each level, children given by relative positions
/// in `[0, 1]`. The last level pattern repeats for deeper levels; no levels
/// means the hull itself (a solid interval or a point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionSystem {
    pub hull: (Rational, Rational),
    pub levels: Vec<Vec<(Rational, Rational)>>,
}

/// `⊔ ratio^n · block` for `n < count`, optionally with `{0}` and a mirrored
/// negative copy `-negative_scale · (positive part)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricStack {
    pub block: Box<Construction>,
    pub ratio: Rational,
    pub count: BlockCount,
    pub includes_zero: bool,
    pub negative_scale: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineImage {
    pub scale: Scalar,
    pub shift: Rational,
    pub inner: Box<Construction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Subdivision(SubdivisionSystem),
    Stack(GeometricStack),
    Affine(AffineImage),
    Union(Vec<Construction>),
}

impl Construction {
    pub fn interval(lo: Rational, hi: Rational) -> Construction {
        Construction::Subdivision(SubdivisionSystem { hull: (lo, hi), levels: vec![] })
    }

    pub fn point(x: Rational) -> Construction {
        Construction::interval(x.clone(), x)
    }

    pub fn affine(self, scale: Scalar, shift: Rational) -> Construction {
        Construction::Affine(AffineImage { scale, shift, inner: Box::new(self) })
    }

    pub fn scaled(self, a: Rational) -> Construction {
        self.affine(Scalar::exact(a), Rational::zero())
    }

    pub fn shifted(self, b: Rational) -> Construction {
        self.affine(Scalar::exact(Rational::one()), b)
    }

    /// Enclosures of the left and right endpoints of the convex hull.
    pub fn hull(&self) -> Result<(Enclosure, Enclosure)> {
        match self {
            Construction::Subdivision(s) => Ok((Enclosure::exact(s.hull.0.clone()), Enclosure::exact(s.hull.1.clone()))),
            Construction::Stack(st) => {
                let (_, hi) = st.block.hull()?;
                let lo = match &st.negative_scale {
                    Some(sigma) => hi.mul(&sigma.value()?).neg(),
                    None => {
                        match st.count {
                            BlockCount::Infinite => Enclosure::from_int(0),
                            BlockCount::Finite(n) => {
                                let (blo, _) = st.block.hull()?;
                                let r = crate::rational::pow(&st.ratio, n.saturating_sub(1));
                                let low = blo.scale(&r);
                                if st.includes_zero {
                                    Enclosure::from_int(0)
                                } else {
                                    low
                                }
                            }
                        }
                    }
                };
                Ok((lo, hi))
            }
            Construction::Affine(a) => {
                let (lo, hi) = a.inner.hull()?;
                let s = a.scale.value()?;
                let shift = Enclosure::exact(a.shift.clone());
                let (x, y) = (lo.mul(&s).add(&shift), hi.mul(&s).add(&shift));
                match s.sign() {
                    Some(std::cmp::Ordering::Less) => Ok((y, x)),
                    Some(std::cmp::Ordering::Greater) => Ok((x, y)),
                    _ => Err(Error::InvalidConstruction("affine scale must be nonzero with known sign".into())),
                }
            }
            Construction::Union(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::InvalidConstruction("empty union".into()))?;
                let (mut lo, mut hi) = first.hull()?;
                for p in it {
                    let (l, h) = p.hull()?;
                    lo = lo.min(&l);
                    hi = hi.max(&h);
                }
                Ok((lo, hi))
            }
        }
    }

    /// Structural checks: child ordering, ratio range, block separation.
    pub fn validate(&self) -> Result<()> {
        match self {
            Construction::Subdivision(s) => validate_subdivision(s),
            Construction::Stack(st) => {
                st.block.validate()?;
                if !(st.ratio.is_positive() && st.ratio < Rational::one()) {
                    return Err(Error::InvalidConstruction(format!(
                        "stack ratio {} outside (0,1)",
                        fmt_rational(&st.ratio)
                    )));
                }
                let (blo, bhi) = st.block.hull()?;
                if !blo.lo().is_positive() {
                    return Err(Error::InvalidConstruction("stack block must lie in (0, inf)".into()));
                }
                // consecutive scaled blocks: ratio * hull_hi < hull_lo
                if !bhi.scale(&st.ratio).compare(&blo).is_some_and(|o| o == std::cmp::Ordering::Less) {
                    return Err(Error::InvalidConstruction(format!(
                        "scaled blocks overlap or touch: {} * {} >= {}",
                        fmt_rational(&st.ratio),
                        bhi,
                        blo
                    )));
                }
                if let Some(sigma) = &st.negative_scale {
                    if sigma.value()?.sign() != Some(std::cmp::Ordering::Greater) {
                        return Err(Error::InvalidConstruction("negative-part scale must be positive".into()));
                    }
                }
                if let BlockCount::Finite(0) = st.count {
                    return Err(Error::InvalidConstruction("stack needs at least one block".into()));
                }
                Ok(())
            }
            Construction::Affine(a) => {
                a.inner.validate()?;
                match a.scale.value()?.sign() {
                    Some(std::cmp::Ordering::Equal) | None => {
                        Err(Error::InvalidConstruction("affine scale must be nonzero".into()))
                    }
                    _ => Ok(()),
                }
            }
            Construction::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidConstruction("empty union".into()));
                }
                let mut hulls = Vec::with_capacity(parts.len());
                for p in parts {
                    p.validate()?;
                    hulls.push(p.hull()?);
                }
                hulls.sort_by(|a, b| a.0.lo().cmp(b.0.lo()));
                for w in hulls.windows(2) {
                    // hulls may share an endpoint but must not overlap
                    let prev_hi = &w[0].1;
                    let next_lo = &w[1].0;
                    let ok = prev_hi.hi() <= next_lo.lo();
                    if !ok {
                        return Err(Error::InvalidConstruction(format!(
                            "union parts overlap: {} vs {}",
                            prev_hi, next_lo
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// True when no part carries an irrational scale.
    pub fn is_exact(&self) -> bool {
        match self {
            Construction::Subdivision(_) => true,
            Construction::Stack(st) => {
                st.block.is_exact() && st.negative_scale.as_ref().is_none_or(|s| s.value().is_ok_and(|v| v.is_exact()))
            }
            Construction::Affine(a) => a.inner.is_exact() && a.scale.value().is_ok_and(|v| v.is_exact()),
            Construction::Union(parts) => parts.iter().all(Construction::is_exact),
        }
    }
}

fn validate_subdivision(s: &SubdivisionSystem) -> Result<()> {
    let (a, b) = &s.hull;
    if a > b {
        return Err(Error::InvalidConstruction("hull with left > right".into()));
    }
    for (k, level) in s.levels.iter().enumerate() {
        if level.is_empty() {
            return Err(Error::InvalidConstruction(format!("level {k} has no children")));
        }
        if !level[0].0.is_zero() || !level.last().unwrap().1.is_one() {
            return Err(Error::InvalidConstruction(format!("level {k} children must touch both hull endpoints")));
        }
        for (lo, hi) in level {
            if lo >= hi || lo.is_negative() || hi > &Rational::one() {
                return Err(Error::InvalidConstruction(format!(
                    "level {k} child [{}, {}] is not a proper sub-interval",
                    fmt_rational(lo),
                    fmt_rational(hi)
                )));
            }
        }
        for w in level.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(Error::InvalidConstruction(format!("level {k} children overlap or touch")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn cantor_third() -> Construction {
        Construction::Subdivision(SubdivisionSystem {
            hull: (int(0), int(1)),
            levels: vec![vec![(int(0), rat(1, 3)), (rat(2, 3), int(1))]],
        })
    }

    #[test]
    fn rejects_overlapping_children() {
        let c = Construction::Subdivision(SubdivisionSystem {
            hull: (int(0), int(1)),
            levels: vec![vec![(int(0), rat(1, 2)), (rat(1, 3), int(1))]],
        });
        assert!(matches!(c.validate(), Err(Error::InvalidConstruction(_))));
    }

    #[test]
    fn rejects_bad_ratio_and_touching_blocks() {
        let block = cantor_third().scaled(rat(1, 4)).shifted(rat(3, 4));
        let bad_ratio = Construction::Stack(GeometricStack {
            block: Box::new(block.clone()),
            ratio: int(1),
            count: BlockCount::Infinite,
            includes_zero: true,
            negative_scale: None,
        });
        assert!(bad_ratio.validate().is_err());
        let touching = Construction::Stack(GeometricStack {
            block: Box::new(block),
            ratio: rat(3, 4),
            count: BlockCount::Infinite,
            includes_zero: true,
            negative_scale: None,
        });
        assert!(touching.validate().is_err());
    }

    #[test]
    fn hull_of_affine_negative_scale() {
        let c = cantor_third().scaled(int(-2)).shifted(int(1));
        let (lo, hi) = c.hull().unwrap();
        assert_eq!(lo, Enclosure::from_int(-1));
        assert_eq!(hi, Enclosure::from_int(1));
    }
}
