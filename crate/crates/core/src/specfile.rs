//! Plain-text construction files.
//!
//! ```text
//! version=1
//! union
//!   subdivision 0/1 1/1
//!     level 0/1:1/3 2/3:1/1
//!   end
//!   stack ratio=1/2 count=inf zero=true negscale=1/1*sqrt(2/5)@1/18446744073709551616
//!     subdivision 3/4 1/1
//!     end
//!   end
//! end
//! ```
//!
//! `affine scale=S shift=B` wraps one block. Counts are integers or `inf`.
//! Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_traits::One;

use crate::construction::{AffineImage, BlockCount, Construction, GeometricStack, Scalar, SubdivisionSystem};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};

pub const VERSION_LINE: &str = "version=1";

pub fn to_spec(c: &Construction) -> String {
    let mut out = String::from(VERSION_LINE);
    out.push('\n');
    write_block(&mut out, c, 0);
    out
}

fn write_block(out: &mut String, c: &Construction, indent: usize) {
    let pad = "  ".repeat(indent);
    match c {
        Construction::Subdivision(s) => {
            let _ = writeln!(out, "{pad}subdivision {} {}", fmt_rational(&s.hull.0), fmt_rational(&s.hull.1));
            for level in &s.levels {
                let parts: Vec<String> =
                    level.iter().map(|(a, b)| format!("{}:{}", fmt_rational(a), fmt_rational(b))).collect();
                let _ = writeln!(out, "{pad}  level {}", parts.join(" "));
            }
        }
        Construction::Stack(st) => {
            let count = match st.count {
                BlockCount::Finite(n) => n.to_string(),
                BlockCount::Infinite => "inf".into(),
            };
            let _ = write!(out, "{pad}stack ratio={} count={count} zero={}", fmt_rational(&st.ratio), st.includes_zero);
            if let Some(s) = &st.negative_scale {
                let _ = write!(out, " negscale={}", s.render());
            }
            out.push('\n');
            write_block(out, &st.block, indent + 1);
        }
        Construction::Affine(a) => {
            let _ = writeln!(out, "{pad}affine scale={} shift={}", a.scale.render(), fmt_rational(&a.shift));
            write_block(out, &a.inner, indent + 1);
        }
        Construction::Union(parts) => {
            let _ = writeln!(out, "{pad}union");
            for p in parts {
                write_block(out, p, indent + 1);
            }
        }
    }
    let _ = writeln!(out, "{pad}end");
}

/// `r` or `f*sqrt(r)@prec`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    match s.split_once("*sqrt(") {
        None => Ok(Scalar::exact(parse_rational(s)?)),
        Some((f, rest)) => {
            let (r, prec) = rest
                .split_once(")@")
                .ok_or_else(|| Error::Precondition(format!("scalar '{s}' is not f*sqrt(r)@prec")))?;
            Ok(Scalar::sqrt(parse_rational(f)?, parse_rational(r)?, parse_rational(prec)?))
        }
    }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_spec(text: &str) -> Result<Construction> {
    let items: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut lines = Lines { items, pos: 0 };
    match lines.next() {
        Some((_, l)) if l == VERSION_LINE => {}
        Some((n, l)) => return Err(perr(n, format!("expected '{VERSION_LINE}', found '{l}'"))),
        None => return Err(perr(1, "empty spec file")),
    }
    let c = parse_block(&mut lines)?;
    if let Some((n, l)) = lines.next() {
        return Err(perr(n, format!("trailing content '{l}'")));
    }
    c.validate()?;
    Ok(c)
}

fn keyvals(n: usize, words: &[&str]) -> Result<Vec<(String, String)>> {
    words
        .iter()
        .map(|w| {
            w.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| perr(n, format!("expected key=value, found '{w}'")))
        })
        .collect()
}

fn take<'a>(n: usize, kv: &'a [(String, String)], key: &str) -> Result<Option<&'a str>> {
    let mut found = kv.iter().filter(|(k, _)| k == key);
    let first = found.next().map(|(_, v)| v.as_str());
    if found.next().is_some() {
        return Err(perr(n, format!("duplicate key '{key}'")));
    }
    Ok(first)
}

fn check_keys(n: usize, kv: &[(String, String)], allowed: &[&str]) -> Result<()> {
    match kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(perr(n, format!("unknown key '{k}'"))),
        None => Ok(()),
    }
}

fn rational_at(n: usize, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| perr(n, e.to_string()))
}

fn expect_end(lines: &mut Lines) -> Result<()> {
    match lines.next() {
        Some((_, "end")) => Ok(()),
        Some((n, l)) => Err(perr(n, format!("expected 'end', found '{l}'"))),
        None => Err(perr(0, "unexpected end of file, missing 'end'")),
    }
}

fn parse_block(lines: &mut Lines) -> Result<Construction> {
    let (n, line) = lines.next().ok_or_else(|| perr(0, "unexpected end of file"))?;
    let words: Vec<&str> = line.split_whitespace().collect();
    match words[0] {
        "subdivision" => {
            if words.len() != 3 {
                return Err(perr(n, "subdivision takes two endpoints"));
            }
            let hull = (rational_at(n, words[1])?, rational_at(n, words[2])?);
            let mut levels = Vec::new();
            while let Some((m, l)) = lines.peek() {
                let Some(rest) = l.strip_prefix("level") else { break };
                lines.next();
                let mut level = Vec::new();
                for part in rest.split_whitespace() {
                    let (a, b) = part.split_once(':').ok_or_else(|| perr(m, format!("child '{part}' is not a:b")))?;
                    level.push((rational_at(m, a)?, rational_at(m, b)?));
                }
                if level.is_empty() {
                    return Err(perr(m, "level without children"));
                }
                levels.push(level);
            }
            expect_end(lines)?;
            Ok(Construction::Subdivision(SubdivisionSystem { hull, levels }))
        }
        "stack" => {
            let kv = keyvals(n, &words[1..])?;
            check_keys(n, &kv, &["ratio", "count", "zero", "negscale"])?;
            let ratio = rational_at(n, take(n, &kv, "ratio")?.ok_or_else(|| perr(n, "stack needs ratio="))?)?;
            let count = match take(n, &kv, "count")?.unwrap_or("inf") {
                "inf" => BlockCount::Infinite,
                c => BlockCount::Finite(c.parse().map_err(|_| perr(n, format!("bad count '{c}'")))?),
            };
            let includes_zero = match take(n, &kv, "zero")?.unwrap_or("false") {
                "true" => true,
                "false" => false,
                z => return Err(perr(n, format!("zero= must be true or false, found '{z}'"))),
            };
            let negative_scale = take(n, &kv, "negscale")?.map(parse_scalar).transpose().map_err(|e| perr(n, e.to_string()))?;
            let block = parse_block(lines)?;
            expect_end(lines)?;
            Ok(Construction::Stack(GeometricStack { block: Box::new(block), ratio, count, includes_zero, negative_scale }))
        }
        "affine" => {
            let kv = keyvals(n, &words[1..])?;
            check_keys(n, &kv, &["scale", "shift"])?;
            let scale = match take(n, &kv, "scale")? {
                Some(s) => parse_scalar(s).map_err(|e| perr(n, e.to_string()))?,
                None => Scalar::exact(Rational::one()),
            };
            let shift = match take(n, &kv, "shift")? {
                Some(s) => rational_at(n, s)?,
                None => Rational::from_integer(0.into()),
            };
            let inner = parse_block(lines)?;
            expect_end(lines)?;
            Ok(Construction::Affine(AffineImage { scale, shift, inner: Box::new(inner) }))
        }
        "union" => {
            if words.len() != 1 {
                return Err(perr(n, "union takes no arguments"));
            }
            let mut parts = Vec::new();
            while let Some((_, l)) = lines.peek() {
                if l == "end" {
                    break;
                }
                parts.push(parse_block(lines)?);
            }
            expect_end(lines)?;
            if parts.is_empty() {
                return Err(perr(n, "empty union"));
            }
            Ok(Construction::Union(parts))
        }
        other => Err(perr(n, format!("unknown block '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{paper_pair, PaperPairId, PaperPairSpec};
    use crate::rational::{int, rat};

    #[test]
    fn round_trips_paper_pairs() {
        for (id, m, n) in [
            (PaperPairId::T13Countable, rat(3, 2), rat(3, 2)),
            (PaperPairId::T14Mixed, rat(3, 2), rat(3, 2)),
            (PaperPairId::T15TwoComponents, int(2), int(2)),
            (PaperPairId::T16Countable, int(2), rat(3, 2)),
            (PaperPairId::S5Case(3), int(2), int(2)),
        ] {
            let p = paper_pair(&PaperPairSpec::new(id, m, n)).unwrap();
            for c in [p.k, p.l] {
                let text = to_spec(&c);
                let back = parse_spec(&text).unwrap();
                assert_eq!(back, c, "{text}");
                assert_eq!(to_spec(&back), text);
            }
        }
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_spec("version=1\nsubdivision 0 1\n  level 0:1/3 2/3\nend\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_spec("version=2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_spec("version=1\nstack ratio=1/2 colour=red\n").unwrap_err();
        assert!(e.to_string().contains("colour"));
    }

    #[test]
    fn comments_and_defaults() {
        let text = "version=1\n# middle third\nsubdivision 0 1 # hull\n level 0:1/3 2/3:1\nend\n";
        let c = parse_spec(text).unwrap();
        assert_eq!(
            c,
            Construction::Subdivision(SubdivisionSystem {
                hull: (int(0), int(1)),
                levels: vec![vec![(int(0), rat(1, 3)), (rat(2, 3), int(1))]]
            })
        );
    }
}
