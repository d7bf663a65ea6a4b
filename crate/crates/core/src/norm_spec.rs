//! Line-oriented `key=value` text format for norms.
//!
//! ```text
//! kind=pnorm p=4
//! kind=polygon vertices=[(1,0),(1,1),(0,1),(-1,0),(-1,-1),(0,-1)]
//! kind=piecewise_quadrant pos=linf neg=l1
//! ```
//!
//! Pairs may be separated by whitespace or newlines; `#` starts a comment.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::Point2;
use crate::norm::{Norm, NormError, QuadrantNorm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid norm: {0}")]
    Validation(#[from] NormError),
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    column: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SpecError {
    SpecError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses norm text into a validated [`Norm`].
pub fn parse_norm_spec(text: &str) -> Result<Norm, SpecError> {
    let entries = tokenize(text)?;
    let kind = entries
        .get("kind")
        .ok_or_else(|| parse_err(1, 1, "missing required key `kind`"))?;

    let allowed: &[&str] = match kind.value.as_str() {
        "pnorm" => &["kind", "p"],
        "euclid" => &["kind"],
        "polygon" => &["kind", "vertices"],
        "max_functionals" => &["kind", "rows"],
        "piecewise_quadrant" => &["kind", "pos", "neg"],
        other => {
            return Err(parse_err(
                kind.line,
                kind.column,
                format!("unknown kind `{other}`"),
            ))
        }
    };
    if let Some((key, e)) = entries.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(parse_err(
            e.line,
            e.column,
            format!("key `{key}` is not valid for kind `{}`", kind.value),
        ));
    }
    let require = |key: &str| {
        entries.get(key).ok_or_else(|| {
            parse_err(
                kind.line,
                kind.column,
                format!("kind `{}` requires key `{key}`", kind.value),
            )
        })
    };

    let norm = match kind.value.as_str() {
        "pnorm" => {
            let e = require("p")?;
            let p = parse_real(&e.value)
                .ok_or_else(|| parse_err(e.line, e.column, format!("`{}` is not a number", e.value)))?;
            Norm::p_norm(p)?
        }
        "euclid" => Norm::euclidean(),
        "polygon" => Norm::polygon(parse_pairs(require("vertices")?)?)?,
        "max_functionals" => Norm::max_of_functionals(parse_pairs(require("rows")?)?)?,
        "piecewise_quadrant" => {
            let sub = |key: &str| -> Result<QuadrantNorm, SpecError> {
                let e = require(key)?;
                QuadrantNorm::from_name(&e.value).ok_or_else(|| {
                    parse_err(
                        e.line,
                        e.column,
                        format!("`{}` is not one of linf, l1, l2", e.value),
                    )
                })
            };
            Norm::piecewise_quadrant(sub("pos")?, sub("neg")?)
        }
        _ => unreachable!("kind checked above"),
    };
    Ok(norm)
}

fn parse_real(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        _ => s.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

/// Splits into `key=value` tokens, whitespace-separated outside brackets.
fn tokenize(text: &str) -> Result<BTreeMap<String, Entry>, SpecError> {
    let mut out = BTreeMap::new();
    let mut depth = 0i32;
    let mut token = String::new();
    let mut start = (1, 1);

    let mut flush = |token: &mut String, start: (usize, usize)| -> Result<(), SpecError> {
        if token.is_empty() {
            return Ok(());
        }
        let (line, column) = start;
        let Some((key, value)) = token.split_once('=') else {
            return Err(parse_err(
                line,
                column,
                format!("expected key=value, got `{token}`"),
            ));
        };
        if key.is_empty() || value.is_empty() {
            return Err(parse_err(
                line,
                column,
                format!("empty key or value in `{token}`"),
            ));
        }
        let entry = Entry {
            value: value.to_owned(),
            line,
            column: column + key.len() + 1,
        };
        if out.insert(key.to_owned(), entry).is_some() {
            return Err(parse_err(line, column, format!("duplicate key `{key}`")));
        }
        token.clear();
        Ok(())
    };

    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for (ci, ch) in line.chars().enumerate() {
            let here = (li + 1, ci + 1);
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(parse_err(here.0, here.1, format!("unbalanced `{ch}`")));
                    }
                }
                _ => {}
            }
            if ch.is_whitespace() {
                if depth == 0 {
                    flush(&mut token, start)?;
                }
                continue;
            }
            if token.is_empty() {
                start = here;
            }
            token.push(ch);
        }
        if depth != 0 {
            return Err(parse_err(li + 1, line.len() + 1, "unterminated bracket"));
        }
        flush(&mut token, start)?;
    }
    Ok(out)
}

/// `[(a,b),(c,d),...]`
fn parse_pairs(entry: &Entry) -> Result<Vec<Point2>, SpecError> {
    let s = entry.value.as_str();
    let err = |offset: usize, msg: &str| parse_err(entry.line, entry.column + offset, msg);
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err(0, "expected `[(x,y),...]`"))?;
    let mut points = Vec::new();
    let mut rest = inner;
    let mut offset = 1;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| err(offset, "expected `(`"))?;
        let close = open.find(')').ok_or_else(|| err(offset, "missing `)`"))?;
        let body = &open[..close];
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| err(offset + 1, "expected `x,y`"))?;
        let (x, y) = match (parse_real(a), parse_real(b)) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => (x, y),
            _ => return Err(err(offset + 1, &format!("invalid pair `({body})`"))),
        };
        points.push(Point2::new(x, y));
        let consumed = close + 2;
        offset += consumed;
        rest = &rest[consumed..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(err(offset, "trailing `,`"));
            }
            rest = r;
            offset += 1;
        } else if !rest.is_empty() {
            return Err(err(offset, "expected `,` between pairs"));
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{Exponent, NormKind};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn pnorm_two() {
        let n = parse_norm_spec("kind=pnorm p=2").unwrap();
        assert_eq!(n.kind(), &NormKind::PNorm(Exponent::Finite(2.0)));
        assert_eq!(n.evaluate(Point2::new(3.0, 4.0)), 5.0);
        assert_eq!(
            parse_norm_spec("kind=pnorm p=inf").unwrap(),
            crate::norm::Norm::linf()
        );
    }

    #[test]
    fn max_functionals_rows() {
        let n = parse_norm_spec(
            "kind=max_functionals rows=[(1,0),(0,1),(0.7071067811865475,0.7071067811865475)]",
        )
        .unwrap();
        let v = Point2::new(0.3, 0.9);
        let expected = 0.9f64.max((0.3 + 0.9) * FRAC_1_SQRT_2);
        assert!((n.evaluate(v) - expected).abs() < 1e-15);

        let full = parse_norm_spec(
            "kind=max_functionals\nrows=[(1,0), (0,1), (0.7071067811865476,0.7071067811865476), (0.7071067811865476,-0.7071067811865476)]",
        )
        .unwrap();
        assert_eq!(full.to_spec_string(), Norm::sqrt2_max().to_spec_string());
    }

    #[test]
    fn piecewise() {
        let n = parse_norm_spec("kind=piecewise_quadrant pos=linf neg=l1").unwrap();
        assert_eq!(n, Norm::linf_l1());
    }

    #[test]
    fn canonical_round_trip_is_byte_stable() {
        for norm in crate::norm::zoo() {
            let text = norm.to_spec_string();
            let again = parse_norm_spec(&text).unwrap();
            assert_eq!(again.to_spec_string(), text);
            assert_eq!(again.kind(), norm.kind());
        }
        assert_eq!(
            Norm::hexagon().to_spec_string(),
            "kind=polygon\nvertices=[(1,0),(1,1),(0,1),(-1,0),(-1,-1),(0,-1)]\n"
        );
    }

    #[test]
    fn errors_carry_locations() {
        match parse_norm_spec("kind=pnorm\np=abc") {
            Err(SpecError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse_norm_spec("  kind=blob") {
            Err(SpecError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_norm_spec("p=2"), Err(SpecError::Parse { .. })));
        assert!(matches!(
            parse_norm_spec("kind=euclid kind=euclid"),
            Err(SpecError::Parse { .. })
        ));
        assert!(matches!(
            parse_norm_spec("kind=polygon vertices=[(1,0),(0,1)"),
            Err(SpecError::Parse { .. })
        ));
        assert!(matches!(
            parse_norm_spec("kind=euclid p=3"),
            Err(SpecError::Parse { .. })
        ));
    }

    #[test]
    fn validation_delegates_to_polygon() {
        assert!(matches!(
            parse_norm_spec("kind=polygon vertices=[(1,0),(0,1),(-1,0),(0,-2)]"),
            Err(SpecError::Validation(NormError::NonSymmetricVertices { .. }))
        ));
        assert!(matches!(
            parse_norm_spec("kind=pnorm p=0.5"),
            Err(SpecError::Validation(NormError::InvalidExponent(_)))
        ));
    }

    #[test]
    fn comments_and_newlines() {
        let n = parse_norm_spec(
            "# a hexagon\nkind=polygon\nvertices=[(1,0),(1,1),(0,1),(-1,0),(-1,-1),(0,-1)] # tail\n",
        )
        .unwrap();
        assert_eq!(n.kind(), Norm::hexagon().kind());
    }
}
