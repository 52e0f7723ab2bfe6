mod common;

use cantorprod::rational::{int, pow2, rat, Rational};
use cantorprod::setops::{
    certified_gaps, interval_product, minkowski_sum, product, product_via_logs, reduce_for_product, reduce_for_sum,
    scale_periodic, InnerPoints,
};
use cantorprod::union::{hausdorff, normalize_union, Interval, IntervalUnion};
use common::union_of;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn union_strategy(lo: i64, hi: i64) -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((lo..hi, 0i64..12), 1..14).prop_map(|v| {
        normalize_union(v.into_iter().map(|(a, l)| Interval::new(rat(a, 4), rat(a + l, 4))).collect())
    })
}

fn pairwise(a: &IntervalUnion, b: &IntervalUnion, f: impl Fn(&Interval, &Interval) -> Interval) -> IntervalUnion {
    let mut raw = Vec::new();
    for x in a.intervals() {
        for y in b.intervals() {
            raw.push(f(x, y));
        }
    }
    normalize_union(raw)
}

fn naive_sum(a: &IntervalUnion, b: &IntervalUnion) -> IntervalUnion {
    pairwise(a, b, |x, y| Interval::new(&x.lo + &y.lo, &x.hi + &y.hi))
}

fn naive_product(a: &IntervalUnion, b: &IntervalUnion) -> IntervalUnion {
    // all four corner products of each rectangle
    pairwise(a, b, |x, y| {
        let c = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
        Interval::new(c.iter().min().unwrap().clone(), c.iter().max().unwrap().clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sum_matches_pairwise(a in union_strategy(-40, 40), b in union_strategy(-40, 40)) {
        prop_assert_eq!(minkowski_sum(&a, &b), naive_sum(&a, &b));
    }

    #[test]
    fn product_matches_pairwise(a in union_strategy(-40, 40), b in union_strategy(-40, 40)) {
        prop_assert_eq!(product(&a, &b), naive_product(&a, &b));
        prop_assert_eq!(product(&a, &b), product(&b, &a));
    }

    #[test]
    fn reductions_preserve_the_result(a in union_strategy(1, 60), b in union_strategy(1, 60)) {
        let (ra, rb) = reduce_for_sum(&a, &b);
        prop_assert!(a.is_subset_of(&ra) && b.is_subset_of(&rb));
        prop_assert_eq!(naive_sum(&ra, &rb), naive_sum(&a, &b));
        let (pa, pb) = reduce_for_product(&a, &b);
        prop_assert!(a.is_subset_of(&pa) && b.is_subset_of(&pb));
        prop_assert_eq!(naive_product(&pa, &pb), naive_product(&a, &b));
    }

    #[test]
    fn normalization_is_idempotent(a in union_strategy(-40, 40)) {
        let again = normalize_union(a.intervals().to_vec());
        prop_assert_eq!(&again, &a);
        for w in a.intervals().windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn log_route_contains_the_exact_product(a in union_strategy(1, 60), b in union_strategy(1, 60)) {
        let exact = product(&a, &b);
        let via = product_via_logs(&a, &b, 40).unwrap();
        prop_assert!(exact.is_subset_of(&via));
        let hull = exact.hull().unwrap();
        // relative rounding of four log/exp steps
        let slack = &hull.hi * pow2(-36);
        prop_assert!(hausdorff(&exact, &via).unwrap() <= slack);
    }

    #[test]
    fn hausdorff_is_a_metric_on_samples(a in union_strategy(-20, 20), b in union_strategy(-20, 20), c in union_strategy(-20, 20)) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(&ab, &hausdorff(&b, &a).unwrap());
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), Rational::zero());
        prop_assert!(ab <= hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap());
    }

    #[test]
    fn certified_gaps_separate_inner_points(a in union_strategy(-30, 30), picks in prop::collection::vec(0usize..100, 2..8)) {
        // inner points: endpoints of the union itself
        let mut pts: Vec<Rational> = a.intervals().iter().flat_map(|iv| [iv.lo.clone(), iv.hi.clone()]).collect();
        let chosen: Vec<Rational> = picks.iter().map(|i| pts[i % pts.len()].clone()).collect();
        pts = chosen;
        pts.sort();
        pts.dedup();
        for (lo, hi) in certified_gaps(&a, &pts) {
            prop_assert!(a.gaps().contains(&(lo.clone(), hi.clone())));
            prop_assert!(pts.iter().any(|p| p < &lo) && pts.iter().any(|p| p > &hi));
        }
    }
}

#[test]
fn interval_products_by_sign() {
    let iv = |a: i64, b: i64| Interval::new(int(a), int(b));
    assert_eq!(interval_product(&iv(-2, 3), &iv(-5, 1)), iv(-15, 10));
    assert_eq!(interval_product(&iv(-2, -1), &iv(-3, -2)), iv(2, 6));
    assert_eq!(interval_product(&iv(0, 0), &iv(-3, 7)), iv(0, 0));
}

#[test]
fn middle_third_sum_is_solid() {
    let third = union_of(&[(int(0), rat(1, 3)), (rat(2, 3), int(1))]);
    let ninth = union_of(&[
        (int(0), rat(1, 9)),
        (rat(2, 9), rat(1, 3)),
        (rat(2, 3), rat(7, 9)),
        (rat(8, 9), int(1)),
    ]);
    assert_eq!(minkowski_sum(&third, &third), IntervalUnion::single(int(0), int(2)));
    assert_eq!(minkowski_sum(&ninth, &ninth), IntervalUnion::single(int(0), int(2)));
}

#[test]
fn periodic_pattern_detection() {
    // {0} ∪ ⋃ (1/2)^k [3/4, 1]: the top window [1/2, 1] holds the block and the
    // right end of the next one
    let stack = |lens: &dyn Fn(i64) -> Rational| {
        let mut raw = vec![Interval::new(int(0), pow2(-6))];
        for k in 0..6 {
            raw.push(Interval::new((Rational::one() - lens(k)) * pow2(-k), pow2(-k)));
        }
        normalize_union(raw)
    };
    let u = stack(&|_| rat(1, 4));
    assert!(scale_periodic(&u, &rat(1, 2), 3, &Rational::zero()));
    assert!(!scale_periodic(&u, &rat(1, 3), 3, &Rational::zero()));
    // block lengths drift, so the windows differ
    let u = stack(&|k| rat(1, 4 + k));
    assert!(!scale_periodic(&u, &rat(1, 2), 3, &Rational::zero()));
    assert!(scale_periodic(&u, &rat(1, 2), 3, &rat(1, 8)), "within a loose slack");
    let mut raw = vec![Interval::new(int(0), pow2(-8))];
    for k in 0..8 {
        raw.push(Interval::new(rat(3, 4) * pow2(-k), rat(13, 16) * pow2(-k)));
        raw.push(Interval::new(rat(7, 8) * pow2(-k), pow2(-k)));
    }
    let u = normalize_union(raw);
    assert!(scale_periodic(&u, &rat(1, 2), 3, &Rational::zero()));
    assert!(!scale_periodic(&u, &rat(1, 3), 2, &Rational::zero()));
    // without 0 in the set there is no accumulation
    assert!(!scale_periodic(&u.clip(&pow2(-7), &Rational::one()), &rat(1, 2), 2, &Rational::zero()));
}

#[test]
fn inner_points_dense_and_sparse() {
    let p = [int(1), int(2), int(3)];
    let q = [int(-1), int(5)];
    let dense = InnerPoints::products(&p, &q, 100);
    assert!(dense.dense);
    assert_eq!(dense.points, vec![int(-3), int(-2), int(-1), int(5), int(10), int(15)]);
    let sparse = InnerPoints::products(&p, &q, 2);
    assert_eq!(sparse.points, vec![int(-3), int(15)]);
    let sums = InnerPoints::sums(&[rat(1, 2)], &[rat(1, 3), rat(2, 3)], 100);
    assert_eq!(sums.points, vec![rat(5, 6), rat(7, 6)]);
}
