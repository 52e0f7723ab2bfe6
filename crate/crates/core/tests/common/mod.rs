#![allow(dead_code)]

use cantorprod::construction::{Construction, SubdivisionSystem};
use cantorprod::cover::{CoverApprox, CoverInterval};
use cantorprod::rational::{rat, Rational};
use cantorprod::union::{normalize_union, Interval, IntervalUnion};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Seed shared by every randomized suite.
pub const SEED: u64 = 0x5eed_cafe;

pub fn rng() -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(SEED)
}

/// All-pairs thickness straight from the definition: over ordered gap pairs
/// `U1 < U2` with at least one bounded, the max of bridge/|U1| and
/// bridge/|U2| (a ray contributes 0), minimized. `None` means infinite.
pub fn naive_thickness(cover: &[(Rational, Rational)]) -> Option<Rational> {
    // gap k sits left of interval k; gap n is the right ray
    let n = cover.len();
    let left_end = |k: usize| if k == 0 { None } else { Some(cover[k - 1].1.clone()) };
    let right_end = |k: usize| if k == n { None } else { Some(cover[k].0.clone()) };
    let len = |k: usize| match (left_end(k), right_end(k)) {
        (Some(a), Some(b)) => Some(b - a),
        _ => None,
    };
    let mut best: Option<Rational> = None;
    for i in 0..=n {
        for j in i + 1..=n {
            let (li, lj) = (len(i), len(j));
            if li.is_none() && lj.is_none() {
                continue;
            }
            let b = left_end(j).unwrap() - right_end(i).unwrap();
            let r = |l: &Option<Rational>| l.as_ref().map(|l| &b / l).unwrap_or_else(Rational::zero);
            let v = std::cmp::max(r(&li), r(&lj));
            if best.as_ref().is_none_or(|x| &v < x) {
                best = Some(v);
            }
        }
    }
    best
}

pub fn exact_cover(ivs: &[(Rational, Rational)]) -> CoverApprox {
    CoverApprox::from_pieces(0, ivs.iter().map(|(a, b)| CoverInterval::exact(a.clone(), b.clone())).collect(), None)
        .unwrap()
}

pub fn union_of(ivs: &[(Rational, Rational)]) -> IntervalUnion {
    normalize_union(ivs.iter().map(|(a, b)| Interval::new(a.clone(), b.clone())).collect())
}

/// Disjoint closed intervals with positive gaps between them, on a grid
/// of denominator `den`, starting at `start`.
pub fn random_cover(rng: &mut impl Rng, pieces: usize, den: i64, start: i64) -> Vec<(Rational, Rational)> {
    let mut out = Vec::with_capacity(pieces);
    let mut x = start;
    for _ in 0..pieces {
        x += rng.gen_range(1..=40);
        let lo = x;
        x += rng.gen_range(0..=60);
        out.push((rat(lo, den), rat(x, den)));
    }
    out
}

/// Two-child self-similar set on `[lo, lo + w]` with children of relative
/// lengths `a` and `b`; its thickness is `min(a, b) / (1 - a - b)`.
pub fn two_child(lo: Rational, w: Rational, a: Rational, b: Rational) -> Construction {
    Construction::Subdivision(SubdivisionSystem {
        hull: (lo.clone(), &lo + w),
        levels: vec![vec![(Rational::zero(), a), (Rational::one() - b, Rational::one())]],
    })
}

pub fn two_child_thickness(a: &Rational, b: &Rational) -> Rational {
    std::cmp::min(a, b) / (Rational::one() - a - b)
}

/// Random child lengths `(a, b)` with `a + b < 1`, on a grid of 1/40.
pub fn random_children(rng: &mut impl Rng) -> (Rational, Rational) {
    let a = rng.gen_range(4..=17);
    let b = rng.gen_range(4..=(36 - a).min(17));
    (rat(a, 40), rat(b, 40))
}
