//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cantorprod::constructions::{
    cm_cantor, cm_thickness, middle_alpha, scalar_precision, two_block_pair_with_constants, CMCantorParams,
};
use cantorprod::cover::refine;
use cantorprod::enclosure::{sqrt_enclosure, QuadraticSurd};
use cantorprod::rational::{fmt_rational, int, pow2, rat, Rational};
use cantorprod::setops::{evidence_gap_bound, log_map_cover, product, product_via_logs, VerdictTag};
use cantorprod::thickness::{classify_gaps, exact_thickness, log_thickness_bound, niceness_constants, thickness, GapTag};
use cantorprod::thresholds::{evaluate, grid_csv, region_grid, ConditionId, Verdict};
use cantorprod::union::hausdorff;
use cantorprod::verify::{
    cover_containment_check, diameter_ratios, intersection_check, parse_params, run_scenario, scenario, sweep_entry,
    two_block_containment,
};
use cantorprod::Enclosure;
use common::{exact_cover, naive_thickness, random_children, random_cover, rng, two_child, two_child_thickness, union_of};
use num_traits::{One, Zero};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: cantorprod::error::Error) -> String {
    e.to_string()
}

fn c1_thickness_oracle() -> Outcome {
    let mut rng = rng();
    for i in 0..500 {
        let pieces = rng.gen_range(1..=65);
        let ivs = random_cover(&mut rng, pieces, 16, 0);
        let fast = exact_thickness(&exact_cover(&ivs)).map_err(e2s)?;
        let slow = naive_thickness(&ivs);
        ensure(fast == slow, || format!("cover {i}: fast {fast:?} vs naive {slow:?}"))?;
    }
    Ok("500 covers, exact agreement".into())
}

fn c2_middle_sets() -> Outcome {
    for m in [rat(1, 2), int(1), int(2), int(5)] {
        let alpha = Rational::one() / (Rational::one() + int(2) * &m);
        let g = middle_alpha(&alpha, &int(0), &int(1)).map_err(e2s)?;
        let cv = refine(&g.construction, 5, 1).map_err(e2s)?;
        let t = exact_thickness(&cv).map_err(e2s)?;
        ensure(t.as_ref() == Some(&m), || format!("M={m}: depth-5 thickness {t:?}"))?;
    }
    Ok("M in {1/2, 1, 2, 5} exact".into())
}

fn c3_cm_sets() -> Outcome {
    // at C = M^2/(3M+1) the second branch C + sqrt(C(1+C+M)) equals M:
    // (M - C)^2 = C(1 + C + M) exactly
    for m in [rat(1, 3), int(1), int(2), rat(7, 2), int(10)] {
        let c = &m * &m / (int(3) * &m + int(1));
        let lhs = (&m - &c) * (&m - &c);
        ensure(lhs == &c * (int(1) + &c + &m), || format!("branches differ at M={m}"))?;
        let second = sqrt_enclosure(&(&c * (int(1) + &c + &m)), &scalar_precision()).map_err(e2s)?.add(&Enclosure::exact(c.clone()));
        ensure(second.contains(&m), || format!("M={m}: second branch {second}"))?;
        ensure(cm_thickness(&c, &m).map_err(e2s)? == Enclosure::exact(m.clone()), || format!("first branch at M={m}"))?;
    }
    ensure(cm_thickness(&rat(1, 4), &int(1)).map_err(e2s)? == Enclosure::from_int(1), || "M=1, C=1/4".into())?;
    let mut widths = Vec::new();
    for (m, c) in [(int(1), rat(1, 10)), (int(2), int(1)), (int(3), rat(1, 2))] {
        let g = cm_cantor(&CMCantorParams::new(c.clone(), m.clone())).map_err(e2s)?;
        let cv = refine(&g.construction, 3, 5).map_err(e2s)?;
        let tv = thickness(&cv).map_err(e2s)?;
        let t = tv.value().ok_or("no bounded gap")?;
        let want = cm_thickness(&c, &m).map_err(e2s)?;
        ensure(t.overlaps(&want), || format!("(M,C)=({m},{c}): cover {t} vs formula {want}"))?;
        ensure(t.width() <= pow2(-40), || format!("(M,C)=({m},{c}): width {}", t.width()))?;
        widths.push(t.to_f64());
    }
    Ok(format!("branch point exact; truncated thickness {widths:.6?}"))
}

fn c4_boundaries() -> Outcome {
    let phi = QuadraticSurd::new(rat(1, 2), rat(1, 2), int(5));
    let silver = QuadraticSurd::new(int(1), int(1), int(2));
    let one = phi.rational(int(1));
    // N M^2 - 2M - 1 at M = N = phi
    let p1 = phi.mul(&phi).mul(&phi).sub(&phi.rational(int(2)).mul(&phi)).sub(&one);
    ensure(p1.signum() == std::cmp::Ordering::Equal, || "golden boundary polynomial nonzero".into())?;
    // (MN - 1)^2 - 2(M+1)(N+1) at M = N = 1 + sqrt 2
    let s1 = silver.add(&silver.rational(int(1)));
    let d = silver.mul(&silver).sub(&silver.rational(int(1)));
    let p2 = d.mul(&d).sub(&silver.rational(int(2)).mul(&s1).mul(&s1));
    ensure(p2.signum() == std::cmp::Ordering::Equal, || "silver boundary polynomial nonzero".into())?;
    ensure(evaluate(ConditionId::Cond465, &phi, &phi).map_err(e2s)? == Verdict::Holds, || "cond465 at phi".into())?;
    ensure(evaluate(ConditionId::CondThm0, &phi, &phi).map_err(e2s)? == Verdict::Fails, || "condthm0 at phi".into())?;
    ensure(evaluate(ConditionId::Cond46578, &silver, &silver).map_err(e2s)? == Verdict::Holds, || "cond46578".into())?;
    ensure(evaluate(ConditionId::CondThm3, &silver, &silver).map_err(e2s)? == Verdict::Fails, || "condthm3".into())?;
    // the same polynomials in interval arithmetic around enclosures of the surds
    let eps = pow2(-64);
    let f = phi.enclose(&eps).map_err(e2s)?;
    let g = silver.enclose(&eps).map_err(e2s)?;
    let one = Enclosure::from_int(1);
    let two = Enclosure::from_int(2);
    let v1 = f.mul(&f).mul(&f).sub(&two.mul(&f)).sub(&one);
    let gg = g.mul(&g).sub(&one);
    let g1 = g.add(&one);
    let v2 = gg.mul(&gg).sub(&two.mul(&g1).mul(&g1));
    for (name, v) in [("golden", &v1), ("silver", &v2)] {
        ensure(v.contains(&Rational::zero()) && v.width() <= pow2(-40), || format!("{name}: {v} width {}", v.width()))?;
    }
    Ok(format!("exact zeros; enclosure widths {:.1e}, {:.1e}", cantorprod::rational::to_f64(&v1.width()), cantorprod::rational::to_f64(&v2.width())))
}

fn c5_two_components() -> Outcome {
    let s = scenario("thm4-twoComponents", &parse_params("M=2,N=2").map_err(e2s)?, Some(8)).map_err(e2s)?;
    let r = run_scenario(&s).map_err(e2s)?;
    ensure(r.verdict.tag == VerdictTag::Components(2), || format!("verdict {}", r.verdict.tag))?;
    ensure(r.verdict.depths.1 == 8, || format!("swept to {}", r.verdict.depths.1))?;
    let cert = r.certificate.ok_or("no gap certificate")?;
    ensure(cert.check(), || format!("certificate rejected: {}", cert.render()))?;
    Ok(format!("Components(2); {}", cert.render()))
}

fn c6_countable() -> Outcome {
    let s = scenario("thm2-countable", &parse_params("M=3/2,N=3/2").map_err(e2s)?, None).map_err(e2s)?;
    let r = run_scenario(&s).map_err(e2s)?;
    ensure(r.verdict.tag == VerdictTag::ZeroPlusGeometricTail(rat(3, 8)), || format!("verdict {}", r.verdict.tag))?;
    ensure(r.verdict.evidence.periods_checked >= 2, || "fewer than 2 periods".into())?;
    let top = r.verdict.evidence.hull.as_ref().ok_or("empty")?.hi.clone();
    let lo = &top * rat(3, 8);
    let in_top: Vec<_> = r.verdict.evidence.certified_gaps.iter().filter(|(a, _)| a >= &lo).collect();
    let (a, b) = in_top.first().ok_or("no certified gap in the top period")?;
    let mut comps = Vec::new();
    for k in 2..=4i64 {
        let p = vec![("M".to_string(), rat(3, 2)), ("N".to_string(), rat(3, 2)), ("K".to_string(), int(k))];
        let r = run_scenario(&scenario("thm2-kComponents", &p, None).map_err(e2s)?).map_err(e2s)?;
        ensure(r.verdict.tag == VerdictTag::Components(k as usize), || format!("k={k}: {}", r.verdict.tag))?;
        comps.push(k);
    }
    Ok(format!("ZeroPlusGeometricTail(3/8), top gap ({}, {}); Components(k) for k={comps:?}", fmt_rational(a), fmt_rational(b)))
}

fn c7_positive() -> Outcome {
    let s = scenario("thm2-positive", &parse_params("M=2,N=2").map_err(e2s)?, None).map_err(e2s)?;
    let mut hull = None;
    let mut bounds: Vec<Rational> = Vec::new();
    for d in 3..=8 {
        let e = sweep_entry(&s, d).map_err(e2s)?;
        ensure(e.union.len() == 1, || format!("depth {d}: {} components", e.union.len()))?;
        let h = e.union.hull();
        if hull.is_none() {
            hull = h.clone();
        }
        ensure(h == hull, || format!("depth {d}: hull moved"))?;
        ensure(e.inner.dense, || format!("depth {d}: inner points truncated"))?;
        let b = evidence_gap_bound(&e.union, &e.inner.points).ok_or("no evidence")?;
        if let Some(prev) = bounds.last() {
            ensure(&b * int(2) <= *prev, || format!("depth {d}: bound {b} vs previous {prev}"))?;
        }
        bounds.push(b);
    }
    let h = hull.unwrap();
    let r = run_scenario(&s).map_err(e2s)?;
    ensure(r.verdict.tag == VerdictTag::SingleInterval, || format!("verdict {}", r.verdict.tag))?;
    Ok(format!(
        "hull [{}, {}], evidence spacing {} -> {}",
        fmt_rational(&h.lo),
        fmt_rational(&h.hi),
        fmt_rational(&bounds[0]),
        fmt_rational(bounds.last().unwrap())
    ))
}

/// Positive cover whose gaps all satisfy `left end / length >= c`.
fn nice_cover(rng: &mut impl Rng, c: &Rational) -> Vec<(Rational, Rational)> {
    let den = 64i64;
    let pieces = rng.gen_range(2..=24);
    let mut x: i64 = rng.gen_range(den..=4 * den);
    let mut out = Vec::new();
    for i in 0..pieces {
        if i > 0 {
            let cap = (Rational::from_integer(x.into()) / c).floor().to_integer();
            let cap: i64 = i64::try_from(cap).unwrap().min(8 * den).max(1);
            x += rng.gen_range(1..=cap);
        }
        let lo = x;
        x += rng.gen_range(1..=3 * den);
        out.push((rat(lo, den), rat(x, den)));
    }
    out
}

fn c8_log_bound() -> Outcome {
    let mut rng = rng();
    let slack = Enclosure::exact(pow2(-30));
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let c = [rat(1, 2), int(1), int(2)][i % 3].clone();
        let cv = exact_cover(&nice_cover(&mut rng, &c));
        let classes = classify_gaps(&cv, &c).map_err(e2s)?;
        ensure(classes.iter().all(|(_, g)| g.tag != GapTag::Bad), || format!("cover {i} has a bad gap"))?;
        let tau = exact_thickness(&cv).map_err(e2s)?.ok_or("cover without a bounded gap")?;
        let bound = log_thickness_bound(&tau, &c).map_err(e2s)?;
        let logs = log_map_cover(&cv, 64).map_err(e2s)?;
        let tv = thickness(&logs).map_err(e2s)?;
        let t = tv.value().ok_or("log cover without a bounded gap")?;
        ensure(t.certainly_ge(&bound.sub(&slack)), || format!("cover {i}, C={c}: {t} < {bound}"))?;
        worst = worst.min(t.to_f64() - bound.to_f64());
    }
    Ok(format!("100 covers; min margin {worst:.4}"))
}

fn c9_containment() -> Outcome {
    // (2,2) violates 2(M+1)(N+1) <= (MN-1)^2 and must be refused
    let guard = two_block_containment(&int(2), &int(2), 6, true);
    ensure(matches!(guard, Err(cantorprod::error::Error::Hypothesis(_))), || format!("(2,2) accepted: {guard:?}"))?;
    let relaxed = two_block_containment(&int(2), &int(2), 6, false).map_err(e2s)?;
    let (m, n) = (int(3), rat(5, 2));
    let derived = two_block_containment(&m, &n, 6, true).map_err(e2s)?;
    ensure(derived.passed(), || "(3,5/2) with derived constants".into())?;
    let p = two_block_pair_with_constants(&m, &n, &rat(1, 2), &rat(1, 2)).map_err(e2s)?;
    let consts = niceness_constants(&m, &n).map_err(e2s)?;
    let wide = cover_containment_check(&p.k, &p.l, &consts, 6, true).map_err(e2s)?;
    ensure(!wide.pairs.is_empty() && wide.passed(), || format!("(3,5/2) with C1=C2=1/2: {} pairs", wide.pairs.len()))?;
    Ok(format!(
        "(2,2) refused by the condition (unguarded: {}/{} pairs hold); (3,5/2): {} + {} pairs hold exactly",
        relaxed.pairs.iter().filter(|p| p.holds()).count(),
        relaxed.pairs.len(),
        derived.pairs.len(),
        wide.pairs.len()
    ))
}

fn c10_intersection() -> Outcome {
    let s = scenario("williams-intersection", &parse_params("M=2,N=2").map_err(e2s)?, None).map_err(e2s)?;
    let r = run_scenario(&s).map_err(e2s)?;
    let VerdictTag::SinglePoint(q) = &r.verdict.tag else { return Err(format!("verdict {}", r.verdict.tag)) };
    let rows = intersection_check(&s.k, &s.l, s.depths, s.stack_blocks).map_err(e2s)?;
    let ratios = diameter_ratios(&rows);
    ensure(ratios.iter().all(|x| x.as_ref() == Some(q)), || format!("ratios {ratios:?}"))?;
    let mut rng = rng();
    let mut applied = 0;
    for _ in 0..200 {
        let (k, l) = loop {
            let (a, b) = random_children(&mut rng);
            let (c, d) = random_children(&mut rng);
            if two_child_thickness(&a, &b) * two_child_thickness(&c, &d) >= Rational::one() {
                let lo = rat(rng.gen_range(-20..=20), 40);
                let w = rat(rng.gen_range(20..=80), 40);
                break (two_child(int(0), int(1), a, b), two_child(lo, w, c, d));
            }
        };
        for row in intersection_check(&k, &l, (0, 6), 1).map_err(e2s)? {
            if row.gap_lemma_applies() {
                applied += 1;
                ensure(row.components > 0, || format!("empty intersection at depth {}", row.depth))?;
            }
        }
    }
    ensure(applied > 0, || "no interleaved pair generated".into())?;
    Ok(format!("diameter ratio {} at every depth; {applied} interleaved thick rows all meet", fmt_rational(q)))
}

fn c11_route_consistency() -> Outcome {
    let mut rng = rng();
    let bits = 40;
    let mut worst = 0f64;
    for i in 0..100 {
        let (na, nb) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let a = union_of(&random_cover(&mut rng, na, 32, 8));
        let b = union_of(&random_cover(&mut rng, nb, 32, 8));
        let exact = product(&a, &b);
        let via = product_via_logs(&a, &b, bits).map_err(e2s)?;
        let r = exact.hull().ok_or("empty")?.hi;
        // log a, log b, their sum and exp each round outward by 2^-bits
        let slack = (Rational::one() + &r) * int(4) * pow2(-(bits as i64));
        let d = hausdorff(&exact, &via).ok_or("empty")?;
        ensure(d <= slack, || format!("union {i}: distance {d} > {slack}"))?;
        ensure(exact.is_subset_of(&via), || format!("union {i}: log route lost points"))?;
        worst = worst.max(cantorprod::rational::to_f64(&(&d / &slack)));
    }
    Ok(format!("100 unions; worst distance/slack {worst:.3}"))
}

fn c12_region_map() -> Outcome {
    let (lo, hi, step) = (rat(1, 2), int(4), rat(1, 20));
    let at = |rows: &[cantorprod::thresholds::GridRow], m: i64, n: i64| {
        rows.iter().find(|r| r.m == int(m) && r.n == int(n)).map(|r| r.verdict)
    };
    let a = region_grid(ConditionId::Cond465, (&lo, &hi), (&lo, &hi), &step).map_err(e2s)?;
    let b = region_grid(ConditionId::Cond46578, (&lo, &hi), (&lo, &hi), &step).map_err(e2s)?;
    ensure(a.len() == 71 * 71 && grid_csv(&a).lines().count() == 71 * 71 + 1, || format!("{} rows", a.len()))?;
    ensure(at(&a, 2, 2) == Some(Verdict::Holds) && at(&a, 1, 1) == Some(Verdict::Fails), || "cond465 regions".into())?;
    ensure(at(&b, 3, 3) == Some(Verdict::Holds) && at(&b, 2, 2) == Some(Verdict::Fails), || "cond46578 regions".into())?;
    let share = |rows: &[cantorprod::thresholds::GridRow]| rows.iter().filter(|r| r.verdict == Verdict::Holds).count();
    Ok(format!("71x71 grids; holds at {} and {} points", share(&a), share(&b)))
}

/// (id, name, time budget in seconds, check)
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "thickness oracle equivalence", 5, c1_thickness_oracle),
        (2, "middle-set thickness", 1, c2_middle_sets),
        (3, "(C,M)-set thickness", 5, c3_cm_sets),
        (4, "boundary identities", 1, c4_boundaries),
        (5, "two-component product", 10, c5_two_components),
        (6, "countable product and k components", 30, c6_countable),
        (7, "positive interval product", 30, c7_positive),
        (8, "log thickness bound", 10, c8_log_bound),
        (9, "log-cover containment", 5, c9_containment),
        (10, "intersections", 20, c10_intersection),
        (11, "route consistency", 10, c11_route_consistency),
        (12, "region map", 5, c12_region_map),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let (status, detail) = match &result {
            Ok(d) if in_time => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("over the {limit}s budget; {d}")),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} {status} [{:>6.2}s/{limit}s] {name}: {detail}", took.as_secs_f64());
    }
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
