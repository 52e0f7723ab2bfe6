//! Exact predicates for the thickness conditions and the region mapper.
//!
//! Every condition is a boolean combination of polynomial sign tests in
//! `(M, N)` (denominators cleared using `M, N > 0`), so it evaluates
//! exactly over rationals and quadratic surds, and three-valued over
//! enclosures.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::enclosure::{Enclosure, QuadraticSurd};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConditionId {
    /// `N >= (2M+1)/M^2` or `M >= (2N+1)/N^2`: both 0+ sets, product is an interval
    Cond465,
    /// `N >= (2M+1)/M^2`: 0+ times 0-set, product is an interval
    Cond3654,
    /// `2(M+1)(N+1) <= (MN-1)^2`: both 0-sets, product is an interval
    Cond46578,
    /// `N < (2M+1)/M^2` and `M < (2N+1)/N^2`
    CondThm0,
    /// `N < (2M+1)/M^2`
    CondThm2,
    /// `2(M+1)(N+1) > (MN-1)^2`
    CondThm3,
    /// with `A = max, B = min`: `A < (B^2+3B+1)/B^2` or `B < (2A+1)^2/A^3`
    CondIntersection,
}

impl ConditionId {
    pub const ALL: [ConditionId; 7] = [
        ConditionId::Cond465,
        ConditionId::Cond3654,
        ConditionId::Cond46578,
        ConditionId::CondThm0,
        ConditionId::CondThm2,
        ConditionId::CondThm3,
        ConditionId::CondIntersection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::Cond465 => "cond465",
            ConditionId::Cond3654 => "cond3654",
            ConditionId::Cond46578 => "cond46578",
            ConditionId::CondThm0 => "condthm0",
            ConditionId::CondThm2 => "condthm2",
            ConditionId::CondThm3 => "condthm3",
            ConditionId::CondIntersection => "condintersection",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            ConditionId::Cond465 => "N >= (2M+1)/M^2 or M >= (2N+1)/N^2",
            ConditionId::Cond3654 => "N >= (2M+1)/M^2",
            ConditionId::Cond46578 => "2(M+1)(N+1) <= (MN-1)^2",
            ConditionId::CondThm0 => "N < (2M+1)/M^2 and M < (2N+1)/N^2",
            ConditionId::CondThm2 => "N < (2M+1)/M^2",
            ConditionId::CondThm3 => "2(M+1)(N+1) > (MN-1)^2",
            ConditionId::CondIntersection => "max < (min^2+3min+1)/min^2 or min < (2max+1)^2/max^3",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        ConditionId::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::Precondition(format!("unknown condition '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    fn from_opt(b: Option<bool>) -> Verdict {
        match b {
            Some(true) => Verdict::Holds,
            Some(false) => Verdict::Fails,
            None => Verdict::Indeterminate,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

/// Numbers the predicates can be evaluated over.
pub trait Number: Clone {
    fn constant(&self, r: i64) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    /// `None` when the sign cannot be decided.
    fn sign(&self) -> Option<Ordering>;
}

impl Number for Rational {
    fn constant(&self, r: i64) -> Self {
        Rational::from_integer(r.into())
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn sign(&self) -> Option<Ordering> {
        Some(self.cmp(&Rational::zero()))
    }
}

impl Number for QuadraticSurd {
    fn constant(&self, r: i64) -> Self {
        self.rational(Rational::from_integer(r.into()))
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn sign(&self) -> Option<Ordering> {
        Some(self.signum())
    }
}

impl Number for Enclosure {
    fn constant(&self, r: i64) -> Self {
        Enclosure::from_int(r)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn sign(&self) -> Option<Ordering> {
        Enclosure::sign(self)
    }
}

fn ge0<T: Number>(x: &T) -> Option<bool> {
    x.sign().map(|s| s != Ordering::Less)
}

fn gt0<T: Number>(x: &T) -> Option<bool> {
    x.sign().map(|s| s == Ordering::Greater)
}

fn lt0<T: Number>(x: &T) -> Option<bool> {
    x.sign().map(|s| s == Ordering::Less)
}

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

/// `N M^2 - 2M - 1`, nonnegative iff `N >= (2M+1)/M^2`.
fn one_sided<T: Number>(m: &T, n: &T) -> T {
    n.times(m).times(m).minus(&m.constant(2).times(m)).minus(&m.constant(1))
}

/// `(MN-1)^2 - 2(M+1)(N+1)`
fn two_sided<T: Number>(m: &T, n: &T) -> T {
    let one = m.constant(1);
    let d = m.times(n).minus(&one);
    d.times(&d).minus(&m.constant(2).times(&m.plus(&one)).times(&n.plus(&one)))
}

pub fn evaluate<T: Number>(cond: ConditionId, m: &T, n: &T) -> Result<Verdict> {
    for (name, v) in [("M", m), ("N", n)] {
        match v.sign() {
            Some(Ordering::Greater) => {}
            None => return Ok(Verdict::Indeterminate),
            _ => return Err(Error::Precondition(format!("{name} must be positive"))),
        }
    }
    let r = match cond {
        ConditionId::Cond465 => or3(ge0(&one_sided(m, n)), ge0(&one_sided(n, m))),
        ConditionId::Cond3654 => ge0(&one_sided(m, n)),
        ConditionId::Cond46578 => ge0(&two_sided(m, n)),
        ConditionId::CondThm0 => and3(lt0(&one_sided(m, n)), lt0(&one_sided(n, m))),
        ConditionId::CondThm2 => lt0(&one_sided(m, n)),
        ConditionId::CondThm3 => lt0(&two_sided(m, n)),
        ConditionId::CondIntersection => {
            let (a, b) = match m.minus(n).sign() {
                Some(Ordering::Less) => (n, m),
                Some(_) => (m, n),
                None => return Ok(Verdict::Indeterminate),
            };
            let one = a.constant(1);
            let bb = b.times(b);
            // B^2 + 3B + 1 - A B^2 > 0
            let first = bb.plus(&a.constant(3).times(b)).plus(&one).minus(&a.times(&bb));
            // (2A+1)^2 - B A^3 > 0
            let t = a.constant(2).times(a).plus(&one);
            let second = t.times(&t).minus(&b.times(a).times(a).times(a));
            or3(gt0(&first), gt0(&second))
        }
    };
    Ok(Verdict::from_opt(r))
}

/// Evaluation that fails with the violated inequality named.
pub fn require(cond: ConditionId, m: &Rational, n: &Rational) -> Result<()> {
    match evaluate(cond, m, n)? {
        Verdict::Holds => Ok(()),
        _ => Err(Error::Hypothesis(format!(
            "{cond} ({}) fails at M={}, N={}",
            cond.formula(),
            crate::rational::fmt_rational(m),
            crate::rational::fmt_rational(n)
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRow {
    pub m: Rational,
    pub n: Rational,
    pub verdict: Verdict,
}

fn axis(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        out.push(x.clone());
        x += step;
    }
    out
}

/// Verdicts on the grid `M in [m_lo, m_hi]`, `N in [n_lo, n_hi]`, M-major.
pub fn region_grid(
    cond: ConditionId,
    m_range: (&Rational, &Rational),
    n_range: (&Rational, &Rational),
    step: &Rational,
) -> Result<Vec<GridRow>> {
    if !step.is_positive() {
        return Err(Error::Precondition("step must be positive".into()));
    }
    if m_range.0 > m_range.1 || n_range.0 > n_range.1 {
        return Err(Error::Empty("empty range".into()));
    }
    if !m_range.0.is_positive() || !n_range.0.is_positive() {
        return Err(Error::Precondition("ranges must be positive".into()));
    }
    let ms = axis(m_range.0, m_range.1, step);
    let ns = axis(n_range.0, n_range.1, step);
    let mut rows = Vec::with_capacity(ms.len() * ns.len());
    for m in &ms {
        for n in &ns {
            rows.push(GridRow { m: m.clone(), n: n.clone(), verdict: evaluate(cond, m, n)? });
        }
    }
    Ok(rows)
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut s = String::from("M_num,M_den,N_num,N_den,verdict\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.m.numer(), r.m.denom(), r.n.numer(), r.n.denom(), r.verdict));
    }
    s
}

/// Boundary `N*(M)` of the one-sided condition, `(2M+1)/M^2`.
pub fn one_sided_boundary(m: &Rational) -> Rational {
    (Rational::from_integer(2.into()) * m + Rational::one()) / (m * m)
}
