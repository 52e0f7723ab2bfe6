//! Scenario harness: refine both factors, combine, classify across depths,
//! and package the result with a re-checkable certificate.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};

use crate::construction::Construction;
use crate::constructions::{
    middle_alpha, paper_pair, two_block_pair, PairOperation, PaperPair, PaperPairId, PaperPairSpec,
};
use crate::cover::{certified_points, refine, CoverApprox};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, parse_rational, pow2, rat, Rational};
use crate::setops::{
    classify_structure, log_map_cover, minkowski_sum, product, ClassifyOptions, InnerPoints, StructureVerdict,
    SweepEntry, VerdictTag,
};
use crate::thickness::{
    classify_gaps, find_cover, log_thickness_bound, thickness, GapTag, LogCover, NicenessConstants, ThicknessValue,
};
use crate::union::{Interval, IntervalUnion};

/// Above this many pairwise inner points only the extremes are kept.
pub const INNER_LIMIT: usize = 300_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Product,
    Sum,
    Intersection,
}

impl Operation {
    fn name(self) -> &'static str {
        match self {
            Operation::Product => "product",
            Operation::Sum => "sum",
            Operation::Intersection => "intersection",
        }
    }

    fn apply(self, x: &Rational, y: &Rational) -> Rational {
        match self {
            Operation::Product => x * y,
            Operation::Sum => x + y,
            Operation::Intersection => unreachable!("no pointwise form"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    /// the statement whose conclusion is being exercised
    pub reference: String,
    pub params: Vec<(String, Rational)>,
    pub k: Construction,
    pub l: Construction,
    pub operation: Operation,
    pub depths: (u32, u32),
    /// explicit blocks per infinite stack
    pub stack_blocks: u32,
    /// add the depth to `stack_blocks` at every step
    pub grow_stack: bool,
    pub expected: VerdictTag,
    pub ratio_hint: Option<Rational>,
    pub options: ClassifyOptions,
}

impl Scenario {
    fn blocks_at(&self, depth: u32) -> u32 {
        if self.grow_stack {
            self.stack_blocks + depth
        } else {
            self.stack_blocks
        }
    }
}

pub const SCENARIOS: &[&str] = &[
    "thm2-positive",
    "thm2-countable",
    "thm2-kComponents",
    "thm2-sum-baseline",
    "thm3-mixed",
    "thm4-twoComponents",
    "thm5-countable",
    "s5-case1",
    "s5-case2",
    "s5-case3",
    "s5-case4",
    "williams-intersection",
];

fn param(params: &[(String, Rational)], key: &str, default: Rational) -> Rational {
    params.iter().find(|(k, _)| k.eq_ignore_ascii_case(key)).map(|(_, v)| v.clone()).unwrap_or(default)
}

/// Parses `M=2,N=5/2`.
pub fn parse_params(s: &str) -> Result<Vec<(String, Rational)>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Precondition(format!("parameter '{part}' is not KEY=VALUE")))?;
        out.push((k.trim().to_string(), parse_rational(v.trim())?));
    }
    Ok(out)
}

fn from_pair(name: &str, reference: &str, params: Vec<(String, Rational)>, p: PaperPair, depths: (u32, u32)) -> Scenario {
    let operation = match p.operation {
        PairOperation::Product => Operation::Product,
        PairOperation::Intersection => Operation::Intersection,
    };
    let periodic = p.ratio_hint.is_some();
    Scenario {
        name: name.to_string(),
        reference: reference.to_string(),
        params,
        k: p.k,
        l: p.l,
        operation,
        depths,
        stack_blocks: if periodic { 4 } else { 6 },
        grow_stack: operation == Operation::Intersection,
        expected: p.expected,
        ratio_hint: p.ratio_hint,
        options: ClassifyOptions::default(),
    }
}

/// Builds a named scenario. `params` may set `M`, `N` and (for
/// `thm2-kComponents`) `K`.
pub fn scenario(name: &str, params: &[(String, Rational)], max_depth: Option<u32>) -> Result<Scenario> {
    let m = param(params, "M", int(2));
    let n = param(params, "N", int(2));
    let echo = vec![("M".to_string(), m.clone()), ("N".to_string(), n.clone())];
    let pair = |id: PaperPairId, m: &Rational, n: &Rational| paper_pair(&PaperPairSpec::new(id, m.clone(), n.clone()));
    let mut s = match name {
        "thm2-positive" => {
            let one = Rational::one();
            let k = middle_alpha(&(&one / (&one + int(2) * &m)), &Rational::zero(), &one)?.construction;
            let l = middle_alpha(&(&one / (&one + int(2) * &n)), &Rational::zero(), &one)?.construction;
            crate::thresholds::require(crate::thresholds::ConditionId::Cond465, &m, &n)?;
            Scenario {
                name: name.into(),
                reference: "0+ sets above the one-sided threshold: the product is an interval".into(),
                params: echo,
                k,
                l,
                operation: Operation::Product,
                depths: (3, 8),
                stack_blocks: 1,
                grow_stack: false,
                expected: VerdictTag::SingleInterval,
                ratio_hint: None,
                options: ClassifyOptions::default(),
            }
        }
        "thm2-sum-baseline" => {
            let third = rat(1, 3);
            let k = middle_alpha(&third, &Rational::zero(), &Rational::one())?.construction;
            Scenario {
                name: name.into(),
                reference: "thickness product >= 1: the sum is an interval".into(),
                params: vec![],
                l: k.clone(),
                k,
                operation: Operation::Sum,
                depths: (1, 6),
                stack_blocks: 1,
                grow_stack: false,
                expected: VerdictTag::SingleInterval,
                ratio_hint: None,
                options: ClassifyOptions::default(),
            }
        }
        "thm2-countable" => {
            let m = param(params, "M", rat(3, 2));
            let n = param(params, "N", rat(3, 2));
            let p = pair(PaperPairId::T13Countable, &m, &n)?;
            from_pair(name, "0+ pair below the threshold: {0} and countably many intervals", vec![("M".into(), m), ("N".into(), n)], p, (2, 6))
        }
        "thm2-kComponents" => {
            let m = param(params, "M", rat(3, 2));
            let n = param(params, "N", rat(3, 2));
            let k = param(params, "K", int(3));
            if !k.is_integer() || k < int(2) || k > int(64) {
                return Err(Error::Precondition("K must be an integer in 2..=64".into()));
            }
            let kk = k.to_integer().try_into().unwrap_or(2u32);
            let p = pair(PaperPairId::T13KComponents(kk), &m, &n)?;
            from_pair(name, "0+ pair below the threshold: exactly k intervals", vec![("M".into(), m), ("N".into(), n), ("K".into(), k)], p, (3, 6))
        }
        "thm3-mixed" => {
            let m = param(params, "M", rat(3, 2));
            let n = param(params, "N", rat(3, 2));
            let p = pair(PaperPairId::T14Mixed, &m, &n)?;
            from_pair(name, "0+ set times 0-set: {0} and countably many intervals", vec![("M".into(), m), ("N".into(), n)], p, (2, 6))
        }
        "thm4-twoComponents" => {
            let p = pair(PaperPairId::T15TwoComponents, &m, &n)?;
            from_pair(name, "two 0-sets below the two-sided threshold: two intervals", echo, p, (3, 8))
        }
        "thm5-countable" => {
            let p = pair(PaperPairId::T16Countable, &m, &n)?;
            from_pair(name, "(C,M)-sets: {0} and countably many intervals", echo, p, (2, 6))
        }
        "s5-case1" | "s5-case2" | "s5-case3" | "s5-case4" => {
            let case: u8 = name.as_bytes()[7] - b'0';
            let (dm, dn) = if case == 1 { (rat(3, 2), rat(3, 2)) } else { (int(2), int(2)) };
            let m = param(params, "M", dm);
            let n = param(params, "N", dn);
            let p = pair(PaperPairId::S5Case(case), &m, &n)?;
            let reference = match case {
                1 => "0+ set times 0+- set: k intervals",
                2 => "0-set times 0+- set: two intervals",
                3 => "two 0x sets: three intervals",
                _ => "set away from 0 times a 0+ set: {0} and countably many intervals",
            };
            from_pair(name, reference, vec![("M".into(), m), ("N".into(), n)], p, (3, 7))
        }
        "williams-intersection" => {
            let p = pair(PaperPairId::WilliamsIntersection, &m, &n)?;
            let mut s = from_pair(name, "interleaved pair meeting in exactly one point", echo, p, (1, 6));
            s.stack_blocks = 1;
            s
        }
        other => {
            return Err(Error::Precondition(format!("unknown scenario '{other}'; known: {}", SCENARIOS.join(", "))))
        }
    };
    if let Some(d) = max_depth {
        s.depths = (s.depths.0.min(d), d);
    }
    Ok(s)
}

fn outer_pair(s: &Scenario, depth: u32) -> Result<(CoverApprox, CoverApprox)> {
    let b = s.blocks_at(depth);
    Ok((refine(&s.k, depth, b)?, refine(&s.l, depth, b)?))
}

/// One depth of the sweep: the combined outer cover and certified inner points.
pub fn sweep_entry(s: &Scenario, depth: u32) -> Result<SweepEntry> {
    let (ck, cl) = outer_pair(s, depth)?;
    let (a, b) = (ck.outer(), cl.outer());
    let (pk, pl) = (certified_points(&ck), certified_points(&cl));
    let (union, inner) = match s.operation {
        Operation::Product => (product(&a, &b), InnerPoints::products(&pk, &pl, INNER_LIMIT)),
        Operation::Sum => (minkowski_sum(&a, &b), InnerPoints::sums(&pk, &pl, INNER_LIMIT)),
        Operation::Intersection => (a.intersect(&b), InnerPoints::default()),
    };
    Ok(SweepEntry { depth, union, inner })
}

pub fn sweep(s: &Scenario) -> Result<Vec<SweepEntry>> {
    (s.depths.0..=s.depths.1).map(|d| sweep_entry(s, d)).collect()
}

/// A gap of an outer cover of `K ∘ L` with a certified point of the true
/// set on each side, each given with its factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub operation: Operation,
    pub gap: (Rational, Rational),
    pub cover: IntervalUnion,
    pub left: (Rational, Rational),
    pub right: (Rational, Rational),
}

impl GapCertificate {
    /// Checks the payload alone: the gap is a gap of the cover and the
    /// witnesses combine to cover points strictly on either side.
    pub fn check(&self) -> bool {
        let (a, b) = &self.gap;
        let l = self.operation.apply(&self.left.0, &self.left.1);
        let r = self.operation.apply(&self.right.0, &self.right.1);
        self.cover.gaps().contains(&self.gap) && &l < a && &r > b && self.cover.contains_point(&l) && self.cover.contains_point(&r)
    }

    /// Still valid against a finer cover of the same set, whose factor
    /// covers must contain the witnesses.
    pub fn check_against(&self, finer: &IntervalUnion, k_cover: &IntervalUnion, l_cover: &IntervalUnion) -> bool {
        let (a, b) = &self.gap;
        let inside_gap = finer.clip(a, b).intervals().iter().all(|iv| &iv.hi == a || &iv.lo == b);
        self.check()
            && inside_gap
            && k_cover.contains_point(&self.left.0)
            && l_cover.contains_point(&self.left.1)
            && k_cover.contains_point(&self.right.0)
            && l_cover.contains_point(&self.right.1)
    }

    pub fn render(&self) -> String {
        let f = fmt_rational;
        format!(
            "gap ({}, {}) of the {} cover; witnesses {} {} {} = {} < gap < {} = {} {} {}",
            f(&self.gap.0),
            f(&self.gap.1),
            self.operation.name(),
            f(&self.left.0),
            op_symbol(self.operation),
            f(&self.left.1),
            f(&self.operation.apply(&self.left.0, &self.left.1)),
            f(&self.operation.apply(&self.right.0, &self.right.1)),
            f(&self.right.0),
            op_symbol(self.operation),
            f(&self.right.1),
        )
    }
}

fn op_symbol(op: Operation) -> &'static str {
    match op {
        Operation::Product => "*",
        _ => "+",
    }
}

/// Witness factors for a point below `a` and one above `b`. Extremes of a
/// bilinear (or additive) map over a product are attained at corners.
fn witnesses(op: Operation, p: &[Rational], q: &[Rational], gap: &(Rational, Rational)) -> Option<((Rational, Rational), (Rational, Rational))> {
    let corners = |v: &[Rational]| -> Vec<Rational> {
        let lo = v.iter().min().cloned();
        let hi = v.iter().max().cloned();
        lo.into_iter().chain(hi).collect()
    };
    let (cp, cq) = (corners(p), corners(q));
    let mut below = None;
    let mut above = None;
    for x in &cp {
        for y in &cq {
            let v = op.apply(x, y);
            if v < gap.0 && below.is_none() {
                below = Some((x.clone(), y.clone()));
            }
            if v > gap.1 && above.is_none() {
                above = Some((x.clone(), y.clone()));
            }
        }
    }
    Some((below?, above?))
}

/// Certificate for the largest certified gap at the given depth.
pub fn certificate_at(s: &Scenario, depth: u32) -> Result<Option<GapCertificate>> {
    if s.operation == Operation::Intersection {
        return Ok(None);
    }
    let (ck, cl) = outer_pair(s, depth)?;
    let entry = sweep_entry(s, depth)?;
    let Some(gap) = crate::setops::gap_certificate(&entry.union, &entry.inner.points) else { return Ok(None) };
    let (pk, pl) = (certified_points(&ck), certified_points(&cl));
    Ok(witnesses(s.operation, &pk, &pl, &gap).map(|(left, right)| GapCertificate {
        operation: s.operation,
        gap,
        cover: entry.union.clone(),
        left,
        right,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Match,
    Mismatch,
    Indeterminate,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Match => 0,
            Outcome::Mismatch => 1,
            Outcome::Indeterminate => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Match => "match",
            Outcome::Mismatch => "mismatch",
            Outcome::Indeterminate => "indeterminate",
        }
    }
}

/// Compares a verdict with the expectation. A rigorous gap against an
/// expected interval is a contradiction; a gap without stabilization
/// against an expected multi-component structure asks for more depth.
pub fn judge(expected: &VerdictTag, v: &StructureVerdict) -> Outcome {
    use VerdictTag::*;
    match (expected, &v.tag) {
        (_, Indeterminate) => Outcome::Indeterminate,
        (Components(k), Components(j)) if k == j => {
            if v.evidence.certified_gaps.len() + 1 >= *k {
                Outcome::Match
            } else {
                Outcome::Indeterminate
            }
        }
        (e, t) if e == t => Outcome::Match,
        (SingleInterval, GapCertified(..)) => Outcome::Mismatch,
        (_, GapCertified(..)) => Outcome::Indeterminate,
        _ => Outcome::Mismatch,
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub depth: u32,
    pub components: usize,
    pub hull: Option<Interval>,
    pub largest_internal_gap: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub scenario: String,
    pub reference: String,
    pub params: Vec<(String, Rational)>,
    pub operation: Operation,
    pub expected: VerdictTag,
    pub rows: Vec<SweepRow>,
    pub verdict: StructureVerdict,
    pub certificate: Option<GapCertificate>,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

pub const SWEEP_CSV_HEADER: &str = "depth,components,hull_left,hull_right,largest_internal_gap";

impl Report {
    pub fn csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let (hl, hr) = match &r.hull {
                Some(h) => (fmt_rational(&h.lo), fmt_rational(&h.hi)),
                None => (String::new(), String::new()),
            };
            let g = r.largest_internal_gap.as_ref().map(fmt_rational).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.depth, r.components, hl, hr, g);
        }
        out
    }

    /// Deterministic part of the report.
    pub fn body(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", fmt_rational(v))).collect();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        let _ = writeln!(out, "statement: {}", self.reference);
        let _ = writeln!(out, "params: {}", params.join(","));
        let _ = writeln!(out, "operation: {}", self.operation.name());
        let _ = writeln!(out, "depths: {}..{}", self.verdict.depths.0, self.verdict.depths.1);
        let _ = writeln!(out, "expected: {}", self.expected);
        let _ = writeln!(out, "verdict: {}", self.verdict.tag);
        let ev = &self.verdict.evidence;
        if let Some(h) = &ev.hull {
            let _ = writeln!(out, "hull: [{}, {}]", fmt_rational(&h.lo), fmt_rational(&h.hi));
        }
        let _ = writeln!(out, "components: {}", ev.components);
        let _ = writeln!(out, "stable depths: {}", ev.stable_depths);
        let _ = writeln!(out, "certified gaps: {}", ev.certified_gaps.len());
        if let Some(b) = &ev.evidence_gap_bound {
            let _ = writeln!(out, "inner evidence spacing: {}", fmt_rational(b));
        }
        match &self.certificate {
            Some(c) => {
                let _ = writeln!(out, "certificate: {}", c.render());
                let _ = writeln!(out, "certificate check: {}", if c.check() { "ok" } else { "FAILED" });
            }
            None => {
                let _ = writeln!(out, "certificate: none");
            }
        }
        let _ = writeln!(out, "status: {}", self.outcome.name());
        out
    }

    pub fn text(&self) -> String {
        format!("{}wall time: {:.3}s\n", self.body(), self.elapsed.as_secs_f64())
    }
}

pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let start = Instant::now();
    let entries = sweep(s)?;
    let verdict = match s.operation {
        Operation::Intersection => classify_intersection(&entries, &s.options)?,
        _ => classify_structure(&entries, s.ratio_hint.as_ref(), &s.options)?,
    };
    let rows = entries
        .iter()
        .map(|e| SweepRow {
            depth: e.depth,
            components: e.union.len(),
            hull: e.union.hull(),
            largest_internal_gap: e.union.largest_gap(),
        })
        .collect();
    let certificate = if verdict.evidence.certified_gaps.is_empty() { None } else { certificate_at(s, s.depths.1)? };
    let outcome = judge(&s.expected, &verdict);
    Ok(Report {
        scenario: s.name.clone(),
        reference: s.reference.clone(),
        params: s.params.clone(),
        operation: s.operation,
        expected: s.expected.clone(),
        rows,
        verdict,
        certificate,
        outcome,
        elapsed: start.elapsed(),
    })
}

/// `SinglePoint(r)` when the last `persistence` covers are single
/// nonempty components with diameters in the constant ratio `r < 1`;
/// otherwise the generic classification.
pub fn classify_intersection(entries: &[SweepEntry], opts: &ClassifyOptions) -> Result<StructureVerdict> {
    let mut v = classify_structure(entries, None, opts)?;
    let n = opts.persistence.max(2);
    if entries.len() < n {
        return Ok(v);
    }
    let tail = &entries[entries.len() - n..];
    let diam: Option<Vec<Rational>> =
        tail.iter().map(|e| if e.union.len() == 1 { e.union.hull().map(|h| h.len()) } else { None }).collect();
    let Some(diam) = diam else { return Ok(v) };
    if diam.iter().any(|d| !d.is_positive()) {
        return Ok(v);
    }
    let ratios: Vec<Rational> = diam.windows(2).map(|w| &w[1] / &w[0]).collect();
    if ratios.iter().all(|r| r == &ratios[0]) && ratios[0] < Rational::one() {
        v.tag = VerdictTag::SinglePoint(ratios[0].clone());
    }
    Ok(v)
}

/// True when neither hull lies in a complementary domain of the other cover.
pub fn interleaved(a: &IntervalUnion, b: &IntervalUnion) -> bool {
    let inside_gap = |x: &IntervalUnion, y: &IntervalUnion| match x.hull() {
        Some(h) => y.clip(&h.lo, &h.hi).is_empty(),
        None => true,
    };
    !inside_gap(a, b) && !inside_gap(b, a)
}

#[derive(Clone, Debug)]
pub struct IntersectionRow {
    pub depth: u32,
    pub components: usize,
    /// `max - min` of the intersection cover, `None` when empty
    pub diameter: Option<Rational>,
    /// total length of the intersection cover
    pub measure: Rational,
    pub interleaved: bool,
    /// thickness product of the two truncations
    pub thickness_product: Option<Enclosure>,
}

impl IntersectionRow {
    pub fn gap_lemma_applies(&self) -> bool {
        self.interleaved && self.thickness_product.as_ref().is_some_and(|t| t.certainly_ge(&Enclosure::from_int(1)))
    }
}

/// Per-depth intersection of the two outer covers. Infinite stacks keep
/// `stack_blocks + depth` explicit blocks so tails shrink with depth.
pub fn intersection_check(k: &Construction, l: &Construction, depths: (u32, u32), stack_blocks: u32) -> Result<Vec<IntersectionRow>> {
    let mut rows = Vec::new();
    for d in depths.0..=depths.1 {
        let ck = refine(k, d, stack_blocks + d)?;
        let cl = refine(l, d, stack_blocks + d)?;
        let (a, b) = (ck.outer(), cl.outer());
        let i = a.intersect(&b);
        let product = match (thickness(&ck)?, thickness(&cl)?) {
            (ThicknessValue::Value { value: x, .. }, ThicknessValue::Value { value: y, .. }) => Some(x.mul(&y)),
            _ => None,
        };
        rows.push(IntersectionRow {
            depth: d,
            components: i.len(),
            diameter: i.hull().map(|h| h.len()),
            measure: i.intervals().iter().map(|iv| iv.len()).fold(Rational::zero(), |s, x| s + x),
            interleaved: interleaved(&a, &b),
            thickness_product: product,
        });
    }
    Ok(rows)
}

/// Ratios `diameter(d+1) / diameter(d)` of consecutive rows.
pub fn diameter_ratios(rows: &[IntersectionRow]) -> Vec<Option<Rational>> {
    rows.windows(2)
        .map(|w| match (&w[0].diameter, &w[1].diameter) {
            (Some(a), Some(b)) if a.is_positive() => Some(b / a),
            _ => None,
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ContainmentPair {
    /// bad gaps of `K+` and `L+`
    pub gaps: ((Rational, Rational), (Rational, Rational)),
    /// `X^R Y^R >= U1^R U2^R`, decided exactly where possible
    pub upper: bool,
    /// `X^L Y^L <= U1^L U2^L` (vacuous when either cover reaches 0)
    pub lower: bool,
}

impl ContainmentPair {
    pub fn holds(&self) -> bool {
        self.upper && self.lower
    }
}

#[derive(Clone, Debug)]
pub struct ContainmentReport {
    pub constants: NicenessConstants,
    pub bad_gaps: (usize, usize),
    pub pairs: Vec<ContainmentPair>,
}

impl ContainmentReport {
    /// All pairs hold; vacuously true without bad gaps.
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(ContainmentPair::holds)
    }
}

fn gap_bounds(g: &crate::cover::Gap) -> Result<(Rational, Rational)> {
    let (Some(a), Some(b)) = (&g.left, &g.right) else {
        return Err(Error::Precondition("unbounded gap".into()));
    };
    match (a.exact_value(), b.exact_value()) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::Indeterminate("bad gap with inexact endpoints".into())),
    }
}

fn bad_gap_covers(cv: &CoverApprox, c: &Rational) -> Result<Vec<((Rational, Rational), LogCover)>> {
    let mut out = Vec::new();
    for (gap, class) in classify_gaps(cv, c)? {
        if class.tag == GapTag::Bad {
            let cover = find_cover(cv, c, &gap)?;
            out.push((gap_bounds(&gap)?, cover));
        }
    }
    Ok(out)
}

/// For every pair of bad gaps `(U1, U2)` of `K+`, `L+` (with respect to
/// `C_KL`, `C_LK`), builds the log-covers `X`, `Y` and checks
/// `log X + log Y ⊇ log U1 + log U2` through the equivalent product
/// inequalities. With `guard`, the niceness condition on `(τ(K), τ(L))` is
/// a precondition.
pub fn cover_containment_check(
    k: &Construction,
    l: &Construction,
    constants: &NicenessConstants,
    depth: u32,
    guard: bool,
) -> Result<ContainmentReport> {
    if guard && !constants.condition {
        return Err(Error::Hypothesis(format!(
            "2(x+1)(y+1) <= (xy-1)^2 fails for x = {}, y = {}",
            fmt_rational(&constants.x),
            fmt_rational(&constants.y)
        )));
    }
    let ck = refine(k, depth, 6)?;
    let cl = refine(l, depth, 6)?;
    let xs = bad_gap_covers(&ck, &constants.c_xy)?;
    let ys = bad_gap_covers(&cl, &constants.c_yx)?;
    let mut pairs = Vec::new();
    for (u1, x) in &xs {
        for (u2, y) in &ys {
            let top = x.right.mul(&y.right);
            let upper = top.certainly_ge(&Enclosure::exact(&u1.1 * &u2.1));
            let lower = match (&x.left, &y.left) {
                (Some(a), Some(b)) => Enclosure::exact(&u1.0 * &u2.0).certainly_ge(&a.mul(b)),
                _ => true,
            };
            pairs.push(ContainmentPair { gaps: (u1.clone(), u2.clone()), upper, lower });
        }
    }
    Ok(ContainmentReport { constants: constants.clone(), bad_gaps: (xs.len(), ys.len()), pairs })
}

/// The T15 shape at `(M, N)` checked without the hypothesis of its
/// existence statement, used where only the niceness condition matters.
pub fn two_block_containment(m: &Rational, n: &Rational, depth: u32, guard: bool) -> Result<ContainmentReport> {
    let p = two_block_pair(m, n)?;
    let consts = crate::thickness::niceness_constants(m, n)?;
    cover_containment_check(&p.k, &p.l, &consts, depth, guard)
}

#[derive(Clone, Debug)]
pub struct TruncationPoint {
    /// cut point in log coordinates (right end of a gap of the log cover)
    pub cut: Enclosure,
    pub thickness: ThicknessValue,
    pub target: Enclosure,
}

/// Bits used for the log image in [`stable_truncation`].
pub const TRUNCATION_BITS: u32 = 64;

/// Cut points `k` of the log image of `K+` (gap right ends) at which
/// `log K+ ∩ [k, top]` has thickness at least `target - epsilon`, where the
/// target is `log(1 + τ/(1+C)) / log(1 + 1/C)`. Returns the points found,
/// lowest cut last; an empty list comes with a diagnostic.
pub fn stable_truncation(
    c: &Construction,
    tau: &Rational,
    c_const: &Rational,
    epsilon: &Rational,
    depth: u32,
    stack_blocks: u32,
) -> Result<(Vec<TruncationPoint>, Option<String>)> {
    if !epsilon.is_positive() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    let cv = refine(c, depth, stack_blocks)?;
    let (lo, _) = cv.hull().ok_or_else(|| Error::Empty("empty cover".into()))?;
    if lo.exact_value() != Some(&Rational::zero()) {
        return Err(Error::Precondition("construction must have minimum 0".into()));
    }
    let pos = cv.positive_part()?;
    // the tail bracket starting at 0 has no logarithm
    let pieces: Vec<_> = pos.intervals.iter().filter(|iv| iv.left.sign() == Some(std::cmp::Ordering::Greater)).cloned().collect();
    let pos = CoverApprox::from_pieces(depth, pieces, None)?;
    let logs = log_map_cover(&pos, TRUNCATION_BITS)?;
    let target = log_thickness_bound(tau, c_const)?;
    let need = target.sub(&Enclosure::exact(epsilon.clone()));
    let top = logs.hull().ok_or_else(|| Error::Empty("nothing left of the positive part".into()))?.1;
    let mut found = Vec::new();
    for g in logs.bounded_gaps().collect::<Vec<_>>().into_iter().rev() {
        let cut = g.right.clone().unwrap();
        let trunc = logs.restrict(&cut, &top)?;
        let t = thickness(&trunc)?;
        let ok = match &t {
            ThicknessValue::Infinite => true,
            ThicknessValue::Value { value, .. } => value.certainly_ge(&need),
        };
        if ok {
            found.push(TruncationPoint { cut, thickness: t, target: target.clone() });
        }
    }
    let diag = if found.is_empty() {
        Some(format!("no admissible cut point at depth {depth} with {stack_blocks} stack blocks; inconclusive"))
    } else {
        None
    };
    Ok((found, diag))
}

/// Default tolerance for log-domain comparisons.
pub fn log_slack() -> Rational {
    pow2(-30)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_baseline_is_interval() {
        let s = scenario("thm2-sum-baseline", &[], None).unwrap();
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.verdict.tag, VerdictTag::SingleInterval);
        for row in &r.rows {
            assert_eq!(row.hull, Some(Interval::new(int(0), int(2))));
            assert_eq!(row.components, 1);
        }
        assert_eq!(r.outcome, Outcome::Match);
    }

    #[test]
    fn params_parse() {
        let p = parse_params("M=2, N=5/2").unwrap();
        assert_eq!(p, vec![("M".into(), int(2)), ("N".into(), rat(5, 2))]);
        assert!(parse_params("M2").is_err());
    }

    #[test]
    fn interleaving() {
        let a = IntervalUnion::single(int(0), int(1));
        let b = IntervalUnion::single(int(2), int(3));
        assert!(!interleaved(&a, &b));
        let c = crate::union::normalize_union(vec![Interval::new(int(-1), int(0)), Interval::new(int(2), int(3))]);
        assert!(!interleaved(&rat_single(1, 2), &c));
        assert!(interleaved(&IntervalUnion::single(int(-1), int(3)), &c));
    }

    fn rat_single(a: i64, b: i64) -> IntervalUnion {
        IntervalUnion::single(rat(a, 10), rat(b, 10) + int(1))
    }

    #[test]
    fn judge_protocol() {
        let v = |tag: VerdictTag, gaps: usize| StructureVerdict {
            tag,
            depths: (1, 1),
            evidence: crate::setops::Evidence {
                certified_gaps: vec![(int(0), int(1)); gaps],
                ..Default::default()
            },
        };
        assert_eq!(judge(&VerdictTag::Components(2), &v(VerdictTag::Components(2), 1)), Outcome::Match);
        assert_eq!(judge(&VerdictTag::Components(2), &v(VerdictTag::Components(2), 0)), Outcome::Indeterminate);
        assert_eq!(judge(&VerdictTag::SingleInterval, &v(VerdictTag::GapCertified(int(0), int(1)), 1)), Outcome::Mismatch);
        assert_eq!(judge(&VerdictTag::Components(2), &v(VerdictTag::Indeterminate, 0)), Outcome::Indeterminate);
        assert_eq!(judge(&VerdictTag::Components(2), &v(VerdictTag::Components(3), 2)), Outcome::Mismatch);
    }
}
