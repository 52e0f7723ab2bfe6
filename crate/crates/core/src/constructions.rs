//! Generators for the explicit Cantor sets: middle-α sets, geometric stacks,
//! (C, M)-sets and the pairs realizing each product structure.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::construction::{BlockCount, Construction, GeometricStack, Scalar, SubdivisionSystem};
use crate::enclosure::{sqrt_enclosure, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, pow, pow2, rat, Rational};
use crate::setops::VerdictTag;
use crate::thresholds::{require, ConditionId};

/// Default α of the "very thick" stand-in blocks (thickness 499.5).
pub fn default_thick_alpha() -> Rational {
    rat(1, 1000)
}

/// Default ε for the constructions that need a small separation.
pub fn default_epsilon() -> Rational {
    rat(1, 100)
}

/// Precision of irrational scale factors.
pub fn scalar_precision() -> Rational {
    pow2(-64)
}

/// A construction together with its closed-form thickness, when known.
#[derive(Clone, Debug)]
pub struct Generated {
    pub construction: Construction,
    pub analytic_thickness: Option<Enclosure>,
}

/// `(1 - α) / (2α)`
pub fn middle_alpha_thickness(alpha: &Rational) -> Rational {
    (Rational::one() - alpha) / (int(2) * alpha)
}

/// Removes the open middle `α`-fraction of `[lo, hi]` at every level.
pub fn middle_alpha(alpha: &Rational, lo: &Rational, hi: &Rational) -> Result<Generated> {
    if !(alpha.is_positive() && alpha < &Rational::one()) {
        return Err(Error::Precondition(format!("alpha {} outside (0,1)", fmt_rational(alpha))));
    }
    if lo >= hi {
        return Err(Error::Precondition("middle-alpha hull must have positive length".into()));
    }
    let a = (Rational::one() - alpha) / int(2);
    let construction = Construction::Subdivision(SubdivisionSystem {
        hull: (lo.clone(), hi.clone()),
        levels: vec![vec![(Rational::zero(), a.clone()), (Rational::one() - a, Rational::one())]],
    });
    Ok(Generated { construction, analytic_thickness: Some(Enclosure::exact(middle_alpha_thickness(alpha))) })
}

fn thick_block(alpha: &Rational, lo: &Rational, hi: &Rational) -> Result<Construction> {
    Ok(middle_alpha(alpha, lo, hi)?.construction)
}

/// `⊔ ratio^n · block`, validated.
pub fn geometric_stack(
    block: Construction,
    ratio: Rational,
    count: BlockCount,
    includes_zero: bool,
    negative_scale: Option<Scalar>,
) -> Result<Construction> {
    let c = Construction::Stack(GeometricStack { block: Box::new(block), ratio, count, includes_zero, negative_scale });
    c.validate()?;
    Ok(c)
}

/// `sqrt(r)` as a scale factor, exact when `r` is a rational square.
pub fn sqrt_scalar(r: &Rational) -> Result<Scalar> {
    let e = sqrt_enclosure(r, &scalar_precision())?;
    Ok(match e.exact_value() {
        Some(v) => Scalar::exact(v.clone()),
        None => Scalar::sqrt(Rational::one(), r.clone(), scalar_precision()),
    })
}

/// A thick set with `min = 0` on `[0, hi]`: thick blocks on
/// `[hi (1+α)/2, hi]` stacked with ratio 1/2.
pub fn thick_zero_plus(alpha: &Rational, hi: &Rational) -> Result<Construction> {
    let lo = hi * (Rational::one() + alpha) / int(2);
    geometric_stack(thick_block(alpha, &lo, hi)?, rat(1, 2), BlockCount::Infinite, true, None)
}

/// A thick set on `[lo, hi]` (`lo < 0 < hi`) accumulating at 0 from both sides.
pub fn thick_zero_set(alpha: &Rational, lo: &Rational, hi: &Rational) -> Result<Construction> {
    if !(lo.is_negative() && hi.is_positive()) {
        return Err(Error::Precondition("thick 0-set needs lo < 0 < hi".into()));
    }
    let block_lo = hi * (Rational::one() + alpha) / int(2);
    geometric_stack(
        thick_block(alpha, &block_lo, hi)?,
        rat(1, 2),
        BlockCount::Infinite,
        true,
        Some(Scalar::exact(-lo / hi)),
    )
}

/// Thickness of a (C, M)-set: `M` when `C >= M^2/(3M+1)`, otherwise
/// `C + sqrt(C(1+C+M))`.
pub fn cm_thickness(c: &Rational, m: &Rational) -> Result<Enclosure> {
    if !(c.is_positive() && m.is_positive()) {
        return Err(Error::Precondition("C and M must be positive".into()));
    }
    if c >= &(m * m / (int(3) * m + int(1))) {
        Ok(Enclosure::exact(m.clone()))
    } else {
        let r = sqrt_enclosure(&(c * (Rational::one() + c + m)), &scalar_precision())?;
        Ok(r.add(&Enclosure::exact(c.clone())))
    }
}

#[derive(Clone, Debug)]
pub struct CMCantorParams {
    pub c: Rational,
    pub m: Rational,
    /// α of the middle-α block `K0`
    pub block_alpha: Rational,
}

impl CMCantorParams {
    pub fn new(c: Rational, m: Rational) -> Self {
        CMCantorParams { c, m, block_alpha: default_thick_alpha() }
    }

    /// `C / (1 + C + M)`
    pub fn ratio(&self) -> Rational {
        &self.c / (Rational::one() + &self.c + &self.m)
    }

    /// `[(1+C)/(1+C+M), 1]`
    pub fn block_hull(&self) -> (Rational, Rational) {
        let d = Rational::one() + &self.c + &self.m;
        ((Rational::one() + &self.c) / d, Rational::one())
    }

    /// `log(1 + (1+M)/C)`, the log-period of the positive part.
    pub fn log_period(&self) -> Result<Enclosure> {
        crate::enclosure::ln_enclosure(&(Rational::one() + (Rational::one() + &self.m) / &self.c), 128)
    }
}

/// The (C, M)-set: positive part `⊔ ρ^n K0` with `ρ = C/(1+C+M)`, negative
/// part `sqrt(ρ)` times the positive part, and `{0}`.
pub fn cm_cantor(p: &CMCantorParams) -> Result<Generated> {
    let tau = cm_thickness(&p.c, &p.m)?;
    let block_tau = Enclosure::exact(middle_alpha_thickness(&p.block_alpha));
    let bound = tau.max(&Enclosure::from_int(1)).max(&Enclosure::exact(p.m.clone()));
    let branch = sqrt_enclosure(&(&p.c * (Rational::one() + &p.c + &p.m)), &scalar_precision())?.add(&Enclosure::exact(p.c.clone()));
    let bound = bound.max(&branch);
    if !block_tau.certainly_gt(&bound) {
        return Err(Error::InvalidConstruction(format!(
            "block thickness {block_tau} must exceed max(1, M, C+sqrt(C(1+C+M))) = {bound}"
        )));
    }
    let (lo, hi) = p.block_hull();
    let ratio = p.ratio();
    let sigma = sqrt_scalar(&ratio)?;
    let construction = geometric_stack(thick_block(&p.block_alpha, &lo, &hi)?, ratio, BlockCount::Infinite, true, Some(sigma))?;
    Ok(Generated { construction, analytic_thickness: Some(tau) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaperPairId {
    /// both 0+ sets, product `{0}` plus countably many intervals
    T13Countable,
    /// both 0+ sets, product with exactly k intervals
    T13KComponents(u32),
    /// 0+ set times 0-set, countably many intervals
    T14Mixed,
    /// both 0-sets, product with two intervals
    T15TwoComponents,
    /// both (C, M)-sets, `{0}` plus countably many intervals
    T16Countable,
    /// the remaining sign classes, see [`paper_pair`]
    S5Case(u8),
    /// interleaved pair meeting in a single point
    WilliamsIntersection,
}

impl fmt::Display for PaperPairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaperPairId::T13Countable => write!(f, "t13-countable"),
            PaperPairId::T13KComponents(k) => write!(f, "t13-k{k}"),
            PaperPairId::T14Mixed => write!(f, "t14-mixed"),
            PaperPairId::T15TwoComponents => write!(f, "t15-two"),
            PaperPairId::T16Countable => write!(f, "t16-countable"),
            PaperPairId::S5Case(c) => write!(f, "s5-case{c}"),
            PaperPairId::WilliamsIntersection => write!(f, "williams"),
        }
    }
}

impl FromStr for PaperPairId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let parsed = match key.as_str() {
            "t13-countable" => Some(PaperPairId::T13Countable),
            "t14-mixed" => Some(PaperPairId::T14Mixed),
            "t15-two" => Some(PaperPairId::T15TwoComponents),
            "t16-countable" => Some(PaperPairId::T16Countable),
            "williams" => Some(PaperPairId::WilliamsIntersection),
            _ => {
                if let Some(k) = key.strip_prefix("t13-k") {
                    k.parse().ok().map(PaperPairId::T13KComponents)
                } else if let Some(c) = key.strip_prefix("s5-case") {
                    c.parse().ok().map(PaperPairId::S5Case)
                } else {
                    None
                }
            }
        };
        parsed.ok_or_else(|| Error::Precondition(format!("unknown construction id '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct PaperPairSpec {
    pub id: PaperPairId,
    pub m: Rational,
    pub n: Rational,
    pub thick_alpha: Rational,
    pub epsilon: Rational,
}

impl PaperPairSpec {
    pub fn new(id: PaperPairId, m: Rational, n: Rational) -> Self {
        PaperPairSpec { id, m, n, thick_alpha: default_thick_alpha(), epsilon: default_epsilon() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOperation {
    Product,
    Intersection,
}

#[derive(Clone, Debug)]
pub struct PaperPair {
    pub k: Construction,
    pub l: Construction,
    /// derived constants by name, exact
    pub constants: Vec<(String, Rational)>,
    pub operation: PairOperation,
    pub expected: VerdictTag,
    /// scale ratio of the expected periodic tail
    pub ratio_hint: Option<Rational>,
    /// analytic thicknesses `(τ(K), τ(L))`
    pub thickness: (Rational, Rational),
}

fn named(v: &[(&str, &Rational)]) -> Vec<(String, Rational)> {
    v.iter().map(|(k, r)| (k.to_string(), (*r).clone())).collect()
}

/// Builds the pair for `spec`, after checking the hypothesis of the
/// corresponding existence statement.
pub fn paper_pair(spec: &PaperPairSpec) -> Result<PaperPair> {
    let (m, n) = (&spec.m, &spec.n);
    if !(m.is_positive() && n.is_positive()) {
        return Err(Error::Precondition("M and N must be positive".into()));
    }
    match spec.id {
        PaperPairId::T13Countable => {
            require(ConditionId::CondThm0, m, n)?;
            countable_zero_plus(spec, None)
        }
        PaperPairId::T13KComponents(k) => {
            require(ConditionId::CondThm0, m, n)?;
            if k < 2 {
                return Err(Error::Precondition("k must be at least 2".into()));
            }
            countable_zero_plus(spec, Some(k))
        }
        PaperPairId::T14Mixed => {
            require(ConditionId::CondThm2, m, n)?;
            mixed_pair(spec)
        }
        PaperPairId::T15TwoComponents => {
            require(ConditionId::CondThm3, m, n)?;
            two_block_pair_with(spec, ZeroSide::Both)
        }
        PaperPairId::T16Countable => {
            require(ConditionId::CondIntersection, m, n)?;
            cm_pair(spec, false)
        }
        PaperPairId::WilliamsIntersection => {
            require(ConditionId::CondIntersection, m, n)?;
            cm_pair(spec, true)
        }
        PaperPairId::S5Case(1) => {
            require(ConditionId::CondThm2, m, n)?;
            if m < n {
                return Err(Error::Hypothesis("case 1 is built for M >= N".into()));
            }
            let mut p = countable_zero_plus(spec, Some(2))?;
            // negative part bounded away from 0: a thick block on [-10, -1/(2N)]
            let lo = -int(10);
            let hi = -(Rational::one() / (int(2) * n));
            let block = thick_block(&spec.thick_alpha, &lo, &hi)?;
            p.l = Construction::Union(vec![block, p.l]);
            p.l.validate()?;
            Ok(p)
        }
        PaperPairId::S5Case(2) => {
            require(ConditionId::CondThm3, m, n)?;
            two_block_pair_with(spec, ZeroSide::LeftOnlyForL)
        }
        PaperPairId::S5Case(3) => {
            require(ConditionId::CondThm3, m, n)?;
            two_block_pair_with(spec, ZeroSide::Neither)
        }
        PaperPairId::S5Case(4) => min_positive_pair(spec),
        PaperPairId::S5Case(c) => Err(Error::Precondition(format!("unknown case {c}"))),
    }
}

/// `(M', N', swapped)` with `M' >= N'`.
fn ordered(m: &Rational, n: &Rational) -> (Rational, Rational, bool) {
    if m >= n {
        (m.clone(), n.clone(), false)
    } else {
        (n.clone(), m.clone(), true)
    }
}

/// The 0+ pair: K the middle-1/(1+2M) set written as `{0} ⊔ ⊔ ρ^n K0`, L a
/// stack of thick blocks with `C = M(1+N)/(1+M)`, and with `k` given,
/// L truncated to `k-1` blocks plus a thick set on `[0, ρ^(k-1)]`.
fn countable_zero_plus(spec: &PaperPairSpec, k: Option<u32>) -> Result<PaperPair> {
    let (m, n, swapped) = ordered(&spec.m, &spec.n);
    let one = Rational::one();
    let c = &m * (&one + &n) / (&one + &m);
    let ratio = &m / (&one + int(2) * &m);
    let alpha = &one / (&one + int(2) * &m);
    let k0 = thick_block(&alpha, &((&one + &m) / (&one + int(2) * &m)), &one)?;
    let kset = geometric_stack(k0, ratio.clone(), BlockCount::Infinite, true, None)?;
    let l_lo = (&one + &c) / (&one + &c + &n);
    let l0 = thick_block(&spec.thick_alpha, &l_lo, &one)?;
    let (lset, expected) = match k {
        None => (
            geometric_stack(l0, ratio.clone(), BlockCount::Infinite, true, None)?,
            VerdictTag::ZeroPlusGeometricTail(ratio.clone()),
        ),
        Some(k) => {
            let blocks = geometric_stack(l0, ratio.clone(), BlockCount::Finite(k - 1), false, None)?;
            let l1 = thick_block(&spec.thick_alpha, &Rational::zero(), &pow(&ratio, k - 1))?;
            let u = Construction::Union(vec![l1, blocks]);
            u.validate()?;
            (u, VerdictTag::Components(k as usize))
        }
    };
    let (kk, ll, tk, tl) = if swapped { (lset, kset, n.clone(), m.clone()) } else { (kset, lset, m.clone(), n.clone()) };
    Ok(PaperPair {
        k: kk,
        l: ll,
        constants: named(&[("C", &c), ("ratio", &ratio)]),
        operation: PairOperation::Product,
        ratio_hint: if k.is_none() { Some(ratio) } else { None },
        expected,
        thickness: (tk, tl),
    })
}

/// 0+ set K times a 0-set L: L has the positive part of the 0+ pair and a
/// thick negative part reaching 0, on `[-10, 0]`.
fn mixed_pair(spec: &PaperPairSpec) -> Result<PaperPair> {
    let (m, n) = (&spec.m, &spec.n);
    if m < n {
        // only the role-swapped 0+ pair is available, which needs both one-sided inequalities
        require(ConditionId::CondThm0, m, n)?;
    }
    let mut p = countable_zero_plus(spec, None)?;
    let negative = thick_zero_plus(&spec.thick_alpha, &int(10))?.scaled(-int(1));
    let l = Construction::Union(vec![negative, p.l]);
    l.validate()?;
    p.l = l;
    Ok(p)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ZeroSide {
    /// both `K1` and `L1` are thick 0-sets
    Both,
    /// `L1` keeps 0 only as the infimum of its positive part
    LeftOnlyForL,
    /// neither contains 0: `(-ε, ε)` is a gap of both
    Neither,
}

/// The T15 constants `C1 = MN(M+1)/D`, `C2 = MN(N+1)/D`, with
/// `D = 3MN + 2M + 2N + 1`.
pub fn two_block_constants(m: &Rational, n: &Rational) -> (Rational, Rational) {
    let d = int(3) * m * n + int(2) * m + int(2) * n + int(1);
    (m * n * (m + int(1)) / &d, m * n * (n + int(1)) / &d)
}

/// The two-block 0-set pair `K = K1 ⊔ K2`, `0 ∈ K1`, hulls
/// `[C1 - M, C1]` and `[1 + C1, 1 + C1 + M]`; no hypothesis check.
pub fn two_block_pair(m: &Rational, n: &Rational) -> Result<PaperPair> {
    two_block_pair_with(&PaperPairSpec::new(PaperPairId::T15TwoComponents, m.clone(), n.clone()), ZeroSide::Both)
}

/// The same shape with arbitrary `C1, C2` in place of the derived ones.
pub fn two_block_pair_with_constants(m: &Rational, n: &Rational, c1: &Rational, c2: &Rational) -> Result<PaperPair> {
    let spec = PaperPairSpec::new(PaperPairId::T15TwoComponents, m.clone(), n.clone());
    build_two_block(&spec, ZeroSide::Both, c1.clone(), c2.clone())
}

fn two_block_pair_with(spec: &PaperPairSpec, side: ZeroSide) -> Result<PaperPair> {
    let (c1, c2) = two_block_constants(&spec.m, &spec.n);
    build_two_block(spec, side, c1, c2)
}

fn build_two_block(spec: &PaperPairSpec, side: ZeroSide, c1: Rational, c2: Rational) -> Result<PaperPair> {
    let (m, n) = (&spec.m, &spec.n);
    if !(c1.is_positive() && c2.is_positive()) {
        return Err(Error::Precondition("C1 and C2 must be positive".into()));
    }
    if !(&c1 < m && &c2 < n) {
        return Err(Error::Hypothesis("two-block construction needs C1 < M and C2 < N".into()));
    }
    let eps = &spec.epsilon;
    let alpha = &spec.thick_alpha;
    let one = Rational::one();
    let build = |c: &Rational, t: &Rational, inner: ZeroSide, is_l: bool| -> Result<Construction> {
        let lo = c - t;
        let k1 = match (inner, is_l) {
            (ZeroSide::Both, _) | (ZeroSide::LeftOnlyForL, false) => thick_zero_set(alpha, &lo, c)?,
            (ZeroSide::LeftOnlyForL, true) => {
                if eps >= &(-&lo) {
                    return Err(Error::Precondition("epsilon too large for the negative block".into()));
                }
                Construction::Union(vec![thick_block(alpha, &lo, &-eps)?, thick_zero_plus(alpha, c)?])
            }
            (ZeroSide::Neither, _) => {
                if eps >= c || eps >= &(-&lo) {
                    return Err(Error::Precondition("epsilon too large for the blocks around 0".into()));
                }
                Construction::Union(vec![thick_block(alpha, &lo, &-eps)?, thick_block(alpha, eps, c)?])
            }
        };
        let k2 = thick_block(alpha, &(&one + c), &(&one + c + t))?;
        let u = Construction::Union(vec![k1, k2]);
        u.validate()?;
        Ok(u)
    };
    let k = build(&c1, m, side, false)?;
    let l = build(&c2, n, side, true)?;
    let expected = if side == ZeroSide::Neither { VerdictTag::Components(3) } else { VerdictTag::Components(2) };
    Ok(PaperPair {
        k,
        l,
        constants: named(&[("C1", &c1), ("C2", &c2)]),
        operation: PairOperation::Product,
        expected,
        ratio_hint: None,
        thickness: (m.clone(), n.clone()),
    })
}

/// Constants `(C_K, M_K, C_L, M_L)` of the two (C, M)-sets, choosing the
/// first branch when `N < (2M+1)^2/M^3` (with `M >= N`).
pub fn cm_pair_constants(m: &Rational, n: &Rational) -> Result<(Rational, Rational, Rational, Rational)> {
    let one = Rational::one();
    let three_m1 = int(3) * m + &one;
    let first = n < &((int(2) * m + &one) * (int(2) * m + &one) / (m * m * m));
    if first {
        let c1 = m * m / &three_m1;
        let c2 = m * m * (&one + n) / ((&one + m) * &three_m1);
        Ok((c1, m.clone(), c2, n.clone()))
    } else if m < &((n * n + int(3) * n + &one) / (n * n)) {
        let three_n1 = int(3) * n + &one;
        Ok((m * n / &three_n1, m + m / n - &one, n * n / &three_n1, n.clone()))
    } else {
        Err(Error::Hypothesis("neither branch of the intersection condition holds".into()))
    }
}

fn cm_pair(spec: &PaperPairSpec, intersection: bool) -> Result<PaperPair> {
    let (m, n, swapped) = ordered(&spec.m, &spec.n);
    let (ck, mk, cl, ml) = cm_pair_constants(&m, &n)?;
    let pk = CMCantorParams { c: ck.clone(), m: mk.clone(), block_alpha: spec.thick_alpha.clone() };
    let pl = CMCantorParams { c: cl.clone(), m: ml.clone(), block_alpha: spec.thick_alpha.clone() };
    let ratio = pk.ratio();
    let k = cm_cantor(&pk)?.construction;
    let mut l = cm_cantor(&pl)?.construction;
    if intersection {
        l = l.scaled(-int(1));
    }
    let (k, l) = if swapped && !intersection { (l, k) } else { (k, l) };
    let thickness = if swapped { (n.clone(), m.clone()) } else { (m.clone(), n.clone()) };
    let (operation, expected, ratio_hint) = if intersection {
        (PairOperation::Intersection, VerdictTag::SinglePoint(ratio.clone()), None)
    } else {
        (PairOperation::Product, VerdictTag::ZeroPlusGeometricTail(ratio.clone()), Some(ratio.clone()))
    };
    Ok(PaperPair {
        k,
        l,
        constants: named(&[("C_K", &ck), ("M_K", &mk), ("C_L", &cl), ("M_L", &ml), ("ratio", &ratio)]),
        operation,
        expected,
        ratio_hint,
        thickness,
    })
}

/// `K ⊂ [1, 1+ε]` made of two thick blocks with thickness M, times the
/// middle-1/(1+2N) set on `[0, 1]` written as a stack.
fn min_positive_pair(spec: &PaperPairSpec) -> Result<PaperPair> {
    let (m, n, eps) = (&spec.m, &spec.n, &spec.epsilon);
    let one = Rational::one();
    let a = eps / (int(2) + &one / m);
    let g = &a / m;
    let b1 = thick_block(&spec.thick_alpha, &one, &(&one + &a))?;
    let b2 = thick_block(&spec.thick_alpha, &(&one + &a + &g), &(&one + eps))?;
    let k = Construction::Union(vec![b1, b2]);
    k.validate()?;
    let ratio = n / (&one + int(2) * n);
    let alpha = &one / (&one + int(2) * n);
    let l0 = thick_block(&alpha, &((&one + n) / (&one + int(2) * n)), &one)?;
    let l = geometric_stack(l0, ratio.clone(), BlockCount::Infinite, true, None)?;
    Ok(PaperPair {
        k,
        l,
        constants: named(&[("block", &a), ("gap", &g), ("ratio", &ratio)]),
        operation: PairOperation::Product,
        expected: VerdictTag::ZeroPlusGeometricTail(ratio.clone()),
        ratio_hint: Some(ratio),
        thickness: (m.clone(), n.clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

fn check(name: &'static str, holds: bool) -> IdentityCheck {
    IdentityCheck { name, holds }
}

/// Relations behind the 0+ pair, for `M >= N` in the counterexample region.
pub fn countable_identities(m: &Rational, n: &Rational) -> Vec<IdentityCheck> {
    let one = Rational::one();
    let c = m * (&one + n) / (&one + m);
    vec![
        check("1+1/M > 1+N/(1+C)", &one + &one / m > &one + n / (&one + &c)),
        check("(1+2M)/M = (1+C+N)/C", (&one + int(2) * m) / m == (&one + &c + n) / &c),
        check("C >= N", &c >= n),
    ]
}

/// Relations behind the two-block pair.
pub fn two_block_identities(m: &Rational, n: &Rational) -> Vec<IdentityCheck> {
    let one = Rational::one();
    let (c1, c2) = two_block_constants(m, n);
    let lhs = (&one + &c1 + m) / (m - &c1) * ((&one + &c2 + n) / (n - &c2));
    let mid = &one + (&one + m) / &c1;
    let rhs = &one + (&one + n) / &c2;
    vec![
        check("C1 < M and C2 < N", &c1 < m && &c2 < n),
        check("(1+C1+M)/(M-C1) (1+C2+N)/(N-C2) = 1+(1+M)/C1", lhs == mid),
        check("1+(1+M)/C1 = 1+(1+N)/C2", mid == rhs),
        check("1+1/C1 > 1+N/(1+C2)", &one + &one / &c1 > &one + n / (&one + &c2)),
        check("1+1/C2 > 1+M/(1+C1)", &one + &one / &c2 > &one + m / (&one + &c1)),
    ]
}

/// Relations behind the first-branch (C, M)-pair.
pub fn cm_pair_identities(m: &Rational, n: &Rational) -> Vec<IdentityCheck> {
    let one = Rational::one();
    let c1 = m * m / (int(3) * m + &one);
    let c2 = m * m * (&one + n) / ((&one + m) * (int(3) * m + &one));
    vec![
        check("1+(1+M)/C1 = 1+(1+N)/C2", &one + (&one + m) / &c1 == &one + (&one + n) / &c2),
        check("C2 >= N^2/(3N+1)", c2.clone() >= n * n / (int(3) * n + &one)),
        check("1+1/C1 > 1+N/(1+C2)", &one + &one / &c1 > &one + n / (&one + &c2)),
    ]
}
