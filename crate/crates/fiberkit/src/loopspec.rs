//! Textual loop descriptions for the command line.
//!
//! Grammar (whitespace around separators is ignored):
//!
//! ```text
//! trivial
//! gluck:px,py,pz
//! gluck-concat:(px,py,pz);(qx,qy,qz)
//! james:(x1);(x2);...;(xk)
//! file:path.json        (or any other string: treated as a JSON file path)
//! ```
//!
//! Points may be written with or without surrounding parentheses and are
//! normalized, so `gluck:0,0,2` is the north-pole twist.

use std::path::PathBuf;

use crate::james::{james_concat, JamesWord};
use crate::loops::LoopSO3;
use crate::rotation::S2Point;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum LoopSpec {
    Trivial,
    Gluck(S2Point),
    GluckConcat(S2Point, S2Point),
    James(Vec<S2Point>),
    File(PathBuf),
}

fn parse_point(text: &str) -> Result<S2Point> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(inner);
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::MalformedSpec(format!(
            "expected three comma-separated coordinates, got {text:?}"
        )));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<f64>().map_err(|_| {
            Error::MalformedSpec(format!("bad coordinate {:?} in {text:?}", part.trim()))
        })?;
    }
    S2Point::normalize(v)
        .map_err(|_| Error::MalformedSpec(format!("zero-length point in {text:?}")))
}

fn parse_points(text: &str) -> Result<Vec<S2Point>> {
    text.split(';').map(parse_point).collect()
}

/// Parses a loop description. Performs no file IO; a `File` variant only
/// records the path.
pub fn parse_loop_spec(text: &str) -> Result<LoopSpec> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::MalformedSpec("empty loop description".into()));
    }
    if text.eq_ignore_ascii_case("trivial") {
        return Ok(LoopSpec::Trivial);
    }
    if let Some(rest) = text.strip_prefix("gluck-concat:") {
        let pts = parse_points(rest)?;
        if pts.len() != 2 {
            return Err(Error::MalformedSpec(format!(
                "gluck-concat takes exactly two points, got {}",
                pts.len()
            )));
        }
        return Ok(LoopSpec::GluckConcat(pts[0], pts[1]));
    }
    if let Some(rest) = text.strip_prefix("gluck:") {
        return Ok(LoopSpec::Gluck(parse_point(rest)?));
    }
    if let Some(rest) = text.strip_prefix("james:") {
        let pts = parse_points(rest)?;
        return Ok(LoopSpec::James(pts));
    }
    if let Some(rest) = text.strip_prefix("file:") {
        return Ok(LoopSpec::File(PathBuf::from(rest)));
    }
    if text.contains(':') {
        return Err(Error::MalformedSpec(format!(
            "unknown loop kind in {text:?}; expected trivial, gluck, gluck-concat, james, or file"
        )));
    }
    Ok(LoopSpec::File(PathBuf::from(text)))
}

/// Realizes a parsed description as a sampled loop at resolution `n`.
/// Reads the file for the `File` variant.
pub fn build_loop(spec: &LoopSpec, n: usize) -> Result<LoopSO3> {
    match spec {
        LoopSpec::Trivial => Ok(LoopSO3::constant_identity(n)),
        LoopSpec::Gluck(p) => LoopSO3::gluck(*p, n),
        LoopSpec::GluckConcat(p, q) => {
            Ok(LoopSO3::gluck(*p, n)?.concatenate(&LoopSO3::gluck(*q, n)?))
        }
        LoopSpec::James(points) => {
            let word = JamesWord::normalize(points);
            Ok(james_concat(&word, n))
        }
        LoopSpec::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            LoopSO3::from_json_str(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::ComponentClass;

    #[test]
    fn parses_trivial() {
        assert_eq!(parse_loop_spec("trivial").unwrap(), LoopSpec::Trivial);
        assert_eq!(parse_loop_spec("  Trivial ").unwrap(), LoopSpec::Trivial);
    }

    #[test]
    fn parses_gluck_and_normalizes() {
        let spec = parse_loop_spec("gluck:0,0,2").unwrap();
        match spec {
            LoopSpec::Gluck(p) => assert!(p.angle_to(S2Point::north()) < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_gluck_concat_with_parens() {
        let spec = parse_loop_spec("gluck-concat:(1,0,0);(0,0,-1)").unwrap();
        match spec {
            LoopSpec::GluckConcat(p, q) => {
                assert!(p.angle_to(S2Point::new([1.0, 0.0, 0.0]).unwrap()) < 1e-12);
                assert!(q.angle_to(S2Point::south()) < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_james_word() {
        let spec = parse_loop_spec("james:(1,0,0);(0,1,0);(0,0,1)").unwrap();
        match spec {
            LoopSpec::James(pts) => assert_eq!(pts.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bare_string_is_a_path() {
        assert_eq!(
            parse_loop_spec("out/loop.json").unwrap(),
            LoopSpec::File(PathBuf::from("out/loop.json"))
        );
        assert_eq!(
            parse_loop_spec("file:x.json").unwrap(),
            LoopSpec::File(PathBuf::from("x.json"))
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_loop_spec("").is_err());
        assert!(parse_loop_spec("gluck:1,2").is_err());
        assert!(parse_loop_spec("gluck:0,0,0").is_err());
        assert!(parse_loop_spec("gluck:a,b,c").is_err());
        assert!(parse_loop_spec("gluck-concat:(1,0,0)").is_err());
        assert!(parse_loop_spec("spin:1,0,0").is_err());
    }

    #[test]
    fn builds_expected_classes() {
        let g = build_loop(&parse_loop_spec("gluck:0,0,1").unwrap(), 64).unwrap();
        assert_eq!(g.classify().unwrap(), ComponentClass::Nontrivial);
        let gc =
            build_loop(&parse_loop_spec("gluck-concat:(0,0,1);(0,0,-1)").unwrap(), 64).unwrap();
        assert_eq!(gc.classify().unwrap(), ComponentClass::Trivial);
        let t = build_loop(&LoopSpec::Trivial, 64).unwrap();
        assert_eq!(t.classify().unwrap(), ComponentClass::Trivial);
    }

    #[test]
    fn james_spec_drops_basepoints() {
        let spec = parse_loop_spec("james:(0,0,1);(1,0,0)").unwrap();
        let l = build_loop(&spec, 64).unwrap();
        // single effective letter, odd word
        assert_eq!(l.classify().unwrap(), ComponentClass::Nontrivial);
    }
}
