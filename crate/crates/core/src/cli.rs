//! Command-line front end. Every numeric argument is an exact rational
//! (`p/q`, integer or finite decimal).
//!
//! Exit status: 0 success or match, 1 mismatch, 2 usage error,
//! 3 indeterminate, 4 computational failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{builder::PossibleValuesParser, Args, Parser, Subcommand};

use crate::construction::Construction;
use crate::constructions::{cm_cantor, middle_alpha, paper_pair, CMCantorParams, PaperPairId, PaperPairSpec};
use crate::cover::{refine, CoverApprox, DEFAULT_DEPTH, DEFAULT_STACK_BLOCKS};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::setops::{minkowski_sum, product};
use crate::specfile::{parse_spec, to_spec};
use crate::thickness::{classify_gaps, split_decomposition, thickness};
use crate::thresholds::{grid_csv, region_grid, ConditionId};
use crate::verify::{intersection_check, parse_params, run_scenario, scenario, SCENARIOS};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_FAILURE: i32 = 4;

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn pair_arg(s: &str) -> std::result::Result<(Rational, Rational), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("'{s}' is not lo:hi"))?;
    Ok((rational_arg(a)?, rational_arg(b)?))
}

fn range_arg(s: &str) -> std::result::Result<(Rational, Rational, Rational), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("'{s}' is not lo:hi:step"));
    }
    Ok((rational_arg(parts[0])?, rational_arg(parts[1])?, rational_arg(parts[2])?))
}

fn condition_arg(s: &str) -> std::result::Result<ConditionId, String> {
    s.parse::<ConditionId>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "cantorprod", version, about = "Thickness, sums and products of Cantor sets in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a construction file: `middle-alpha`, `cm`, or a pair id
    /// (t13-countable, t13-k<k>, t14-mixed, t15-two, t16-countable,
    /// s5-case<1..4>, williams).
    Construct(ConstructArgs),
    /// Outer cover of a construction at a depth, as CSV.
    Refine(CoverArgs),
    /// Thickness of the depth-d outer cover.
    Thickness(CoverArgs),
    /// Classify the gaps of the positive part against C.
    ClassifyGaps(GapArgs),
    /// Log-C-split of the positive part.
    Split(GapArgs),
    /// Minkowski sum of two outer covers.
    Sum(PairArgs),
    /// Product of two outer covers.
    Product(PairArgs),
    /// Run a named scenario and compare with its expected structure.
    Verify(VerifyArgs),
    /// Grid of a threshold condition over a parameter box, as CSV.
    RegionMap(RegionArgs),
    /// Per-depth intersection of two outer covers.
    Intersect(IntersectArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub kind: String,
    /// removed middle fraction, for middle-alpha
    #[arg(long, value_parser = rational_arg)]
    pub alpha: Option<Rational>,
    /// hull as lo:hi, for middle-alpha (default 0:1)
    #[arg(long, value_parser = pair_arg)]
    pub hull: Option<(Rational, Rational)>,
    /// C, for cm
    #[arg(long = "c", value_parser = rational_arg)]
    pub c: Option<Rational>,
    /// M, for cm
    #[arg(long = "m", value_parser = rational_arg)]
    pub m: Option<Rational>,
    /// M=..,N=.. for pair ids
    #[arg(long)]
    pub params: Option<String>,
    /// which member of a pair to write
    #[arg(long, default_value = "k", value_parser = PossibleValuesParser::new(["k", "l"]))]
    pub which: String,
    /// output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[arg(long)]
    pub construction: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: u32,
    /// explicit blocks kept per infinite stack
    #[arg(long, default_value_t = DEFAULT_STACK_BLOCKS)]
    pub stack_blocks: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GapArgs {
    #[command(flatten)]
    pub cover: CoverArgs,
    /// niceness constant C
    #[arg(long = "c", value_parser = rational_arg)]
    pub c: Rational,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: u32,
    #[arg(long, default_value_t = DEFAULT_STACK_BLOCKS)]
    pub stack_blocks: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(SCENARIOS))]
    pub scenario: String,
    /// M=..,N=.. (and K=.. for thm2-kComponents)
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long)]
    pub max_depth: Option<u32>,
    /// also write the sweep table here
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[arg(long, value_parser = condition_arg)]
    pub condition: ConditionId,
    /// lo:hi:step for M (and N unless --n-range is given)
    #[arg(long, value_parser = range_arg)]
    pub range: (Rational, Rational, Rational),
    /// lo:hi for N
    #[arg(long, value_parser = pair_arg)]
    pub n_range: Option<(Rational, Rational)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IntersectArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub min_depth: u32,
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
    /// explicit stack blocks at depth 0; one more is added per depth
    #[arg(long, default_value_t = 1)]
    pub stack_blocks: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read_construction(path: &Path) -> Result<Construction> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", p.display()))),
        None => {
            // a closed pipe (`| head`) is not an error
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn cover_of(a: &CoverArgs) -> Result<CoverApprox> {
    refine(&read_construction(&a.construction)?, a.depth, a.stack_blocks)
}

fn construct(a: &ConstructArgs) -> Result<Construction> {
    match a.kind.as_str() {
        "middle-alpha" => {
            let alpha = a.alpha.clone().ok_or_else(|| Error::Precondition("middle-alpha needs --alpha".into()))?;
            let (lo, hi) = a.hull.clone().unwrap_or((Rational::from_integer(0.into()), Rational::from_integer(1.into())));
            Ok(middle_alpha(&alpha, &lo, &hi)?.construction)
        }
        "cm" => {
            let (Some(c), Some(m)) = (a.c.clone(), a.m.clone()) else {
                return Err(Error::Precondition("cm needs --c and --m".into()));
            };
            Ok(cm_cantor(&CMCantorParams::new(c, m))?.construction)
        }
        id => {
            let id: PaperPairId = id.parse()?;
            let params = parse_params(a.params.as_deref().unwrap_or(""))?;
            let get = |k: &str| {
                params
                    .iter()
                    .find(|(n, _)| n.eq_ignore_ascii_case(k))
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| Error::Precondition(format!("--params must set {k}")))
            };
            let p = paper_pair(&PaperPairSpec::new(id, get("M")?, get("N")?))?;
            Ok(if a.which == "l" { p.l } else { p.k })
        }
    }
}

/// Runs one command; returns the exit status.
fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Construct(a) => {
            emit(&a.out, &to_spec(&construct(a)?))?;
        }
        Command::Refine(a) => emit(&a.out, &cover_of(a)?.to_csv())?,
        Command::Thickness(a) => {
            let t = thickness(&cover_of(a)?)?;
            emit(&a.out, &format!("{t}\n"))?;
        }
        Command::ClassifyGaps(a) => {
            let mut s = String::from("left_lo,left_hi,right_lo,right_hi,ratio_lo,ratio_hi,class\n");
            for (g, class) in classify_gaps(&cover_of(&a.cover)?, &a.c)? {
                let (l, r) = (g.left.unwrap(), g.right.unwrap());
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_rational(l.lo()),
                    fmt_rational(l.hi()),
                    fmt_rational(r.lo()),
                    fmt_rational(r.hi()),
                    fmt_rational(class.ratio.lo()),
                    fmt_rational(class.ratio.hi()),
                    class.tag
                ));
            }
            emit(&a.cover.out, &s)?;
        }
        Command::Split(a) => {
            let d = split_decomposition(&cover_of(&a.cover)?, &a.c)?;
            let mut s = String::new();
            let end = |e: &Option<crate::enclosure::Enclosure>| e.as_ref().map_or("inf".to_string(), |x| x.to_string());
            for (i, g) in d.split_gaps.iter().enumerate() {
                s.push_str(&format!("U{i}: ({}, {})\n", end(&g.left), end(&g.right)));
            }
            for (i, v) in d.split_sets.iter().enumerate() {
                let (lo, hi) = v.hull().expect("split pieces are nonempty");
                s.push_str(&format!("V{i}: [{lo}, {hi}] in {} intervals\n", v.intervals.len()));
            }
            emit(&a.cover.out, &s)?;
        }
        Command::Sum(a) | Command::Product(a) => {
            let x = refine(&read_construction(&a.a)?, a.depth, a.stack_blocks)?.outer();
            let y = refine(&read_construction(&a.b)?, a.depth, a.stack_blocks)?.outer();
            let u = if matches!(cmd, Command::Sum(_)) { minkowski_sum(&x, &y) } else { product(&x, &y) };
            emit(&a.out, &u.to_csv())?;
        }
        Command::Verify(a) => {
            let s = scenario(&a.scenario, &parse_params(&a.params)?, a.max_depth)?;
            let r = run_scenario(&s)?;
            emit(&None, &r.text())?;
            if let Some(p) = &a.csv {
                emit(&Some(p.clone()), &r.csv())?;
            }
            return Ok(r.outcome.exit_code());
        }
        Command::RegionMap(a) => {
            let (lo, hi, step) = &a.range;
            let (nlo, nhi) = a.n_range.clone().unwrap_or((lo.clone(), hi.clone()));
            let rows = region_grid(a.condition, (lo, hi), (&nlo, &nhi), step)?;
            emit(&a.out, &grid_csv(&rows))?;
        }
        Command::Intersect(a) => {
            let k = read_construction(&a.a)?;
            let l = read_construction(&a.b)?;
            if a.min_depth > a.depth {
                return Err(Error::Precondition("--min-depth exceeds --depth".into()));
            }
            let rows = intersection_check(&k, &l, (a.min_depth, a.depth), a.stack_blocks)?;
            let mut s = String::from("depth,components,diameter,measure,interleaved,gap_lemma\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.depth,
                    r.components,
                    r.diameter.as_ref().map(fmt_rational).unwrap_or_default(),
                    fmt_rational(&r.measure),
                    r.interleaved,
                    r.gap_lemma_applies()
                ));
            }
            emit(&a.out, &s)?;
        }
    }
    Ok(0)
}

fn failure_code(e: &Error) -> i32 {
    match e {
        Error::Indeterminate(_) | Error::InsufficientDepth(_) => EXIT_INDETERMINATE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `argv` (program name first) and runs it.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            failure_code(&e)
        }
    }
}
