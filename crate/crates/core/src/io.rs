//! Text and JSON formats for valuations, matroids, catalogs and trees.
//!
//! Valuation text format:
//!
//! ```text
//! n=3
//! {}: 0
//! {1,2}: -1
//! {1,2,3}: -3/2
//! ```
//!
//! Unlisted subsets are zero; blank lines and `#` comments are ignored.

use std::collections::HashSet;
use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matroid::{Matroid, MatroidCatalog};
use crate::rational::{format_rational, parse_rational};
use crate::subset::{SubsetMask, MAX_ITEMS};
use crate::tree::LabeledTree;
use crate::valuation::Valuation;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn with_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidInput(m) => parse_err(line, m),
        other => other,
    }
}

fn parse_header(line_no: usize, line: &str) -> Result<usize> {
    let rest = line
        .strip_prefix("n=")
        .ok_or_else(|| parse_err(line_no, format!("expected `n=<int>`, found `{line}`")))?;
    let n: usize = rest
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad item count `{}`", rest.trim())))?;
    if n > MAX_ITEMS {
        return Err(parse_err(line_no, format!("n={n} exceeds {MAX_ITEMS}")));
    }
    Ok(n)
}

/// Lines that carry content, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn valuation_to_text(v: &Valuation) -> String {
    let mut out = format!("n={}\n", v.n());
    for (s, val) in v.iter() {
        writeln!(out, "{s}: {}", format_rational(val)).expect("writing to a String");
    }
    out
}

pub fn parse_valuation_text(text: &str) -> Result<Valuation> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty valuation file"))?;
    let n = parse_header(hl, header)?;
    let mut v = Valuation::zero(n);
    let mut seen = HashSet::new();
    for (line_no, line) in lines {
        let (set_text, val_text) = line.split_once(':').ok_or_else(|| {
            parse_err(
                line_no,
                format!("expected `{{...}}: value`, found `{line}`"),
            )
        })?;
        let set_text = set_text.trim();
        if !(set_text.starts_with('{') && set_text.ends_with('}')) {
            return Err(parse_err(
                line_no,
                format!("subset must be braced, found `{set_text}`"),
            ));
        }
        let s = SubsetMask::parse_list(set_text).map_err(with_line(line_no))?;
        s.check(n).map_err(with_line(line_no))?;
        if !seen.insert(s) {
            return Err(parse_err(line_no, format!("duplicate subset {s}")));
        }
        let val = parse_rational(val_text).map_err(with_line(line_no))?;
        v.set_value(s, val)?;
    }
    Ok(v)
}

pub fn valuation_to_json(v: &Valuation) -> Value {
    let values: Map<String, Value> = v
        .iter()
        .map(|(s, val)| (s.to_list(), Value::String(format_rational(val))))
        .collect();
    json!({ "n": v.n(), "values": values })
}

pub fn parse_valuation_json(text: &str) -> Result<Valuation> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let n = doc
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(1, "missing integer field `n`"))? as usize;
    if n > MAX_ITEMS {
        return Err(parse_err(1, format!("n={n} exceeds {MAX_ITEMS}")));
    }
    let mut v = Valuation::zero(n);
    let values = doc
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err(1, "missing object field `values`"))?;
    for (key, val) in values {
        let s = SubsetMask::parse_list(key).map_err(with_line(1))?;
        s.check(n).map_err(with_line(1))?;
        let text = match val {
            Value::String(t) => t.clone(),
            Value::Number(num) => num.to_string(),
            other => {
                return Err(parse_err(
                    1,
                    format!("bad value {other} for subset `{key}`"),
                ))
            }
        };
        v.set_value(s, parse_rational(&text).map_err(with_line(1))?)?;
    }
    Ok(v)
}

/// Either format, chosen by the first non-blank character.
pub fn parse_valuation(text: &str) -> Result<Valuation> {
    if text.trim_start().starts_with('{') {
        parse_valuation_json(text)
    } else {
        parse_valuation_text(text)
    }
}

pub fn matroid_to_text(m: &Matroid) -> String {
    format!("{m}\n")
}

/// `n=<int>` then `bases: {1,2} {1,3} ...`.
pub fn parse_matroid_text(text: &str) -> Result<Matroid> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty matroid file"))?;
    let n = parse_header(hl, header)?;
    let (bl, bases_line) = lines
        .next()
        .ok_or_else(|| parse_err(hl + 1, "missing `bases:` line"))?;
    let rest = bases_line
        .strip_prefix("bases:")
        .ok_or_else(|| parse_err(bl, "expected `bases:`"))?;
    let mut bases = Vec::new();
    let mut remaining = rest.trim();
    while !remaining.is_empty() {
        let end = remaining
            .find('}')
            .ok_or_else(|| parse_err(bl, "unterminated subset"))?;
        let s = SubsetMask::parse_list(&remaining[..=end]).map_err(with_line(bl))?;
        s.check(n).map_err(with_line(bl))?;
        bases.push(s);
        remaining = remaining[end + 1..].trim_start();
    }
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "unexpected trailing content"));
    }
    Matroid::new(n, bases).map_err(with_line(bl))
}

pub fn catalog_to_json(catalog: &MatroidCatalog) -> Value {
    Value::Array(
        catalog
            .entries
            .iter()
            .zip(&catalog.iso_class)
            .map(|(m, class)| {
                json!({
                    "n": m.n(),
                    "rank": m.rank(),
                    "bases": m.bases().iter().map(|b| b.to_list()).collect::<Vec<_>>(),
                    "iso_class": class,
                })
            })
            .collect(),
    )
}

pub fn tree_to_json(tree: &LabeledTree) -> Value {
    json!({
        "S": tree.set.to_list(),
        "nodes": tree.nodes.iter().map(|node| json!({
            "set": node.subset.to_list(),
            "label": format_rational(&node.label),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn text_defaults_and_errors() {
        let v = parse_valuation_text("# comment\nn=2\n{1,2}: -1/2\n\n{}: 3\n").unwrap();
        assert_eq!(v[SubsetMask::from_items([1, 2])], frac(-1, 2));
        assert_eq!(v[SubsetMask::EMPTY], int(3));
        assert_eq!(v[SubsetMask::singleton(1)], int(0));

        let dup = parse_valuation_text("n=2\n{1}: 1\n{1}: 2\n").unwrap_err();
        assert_eq!(
            dup,
            Error::Parse {
                line: 3,
                message: "duplicate subset {1}".into()
            }
        );
        assert!(matches!(
            parse_valuation_text("n=2\n{3}: 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_valuation_text("n=2\n{1}: x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_valuation_text("m=2\n").is_err());
        assert!(parse_valuation_text("").is_err());
        assert!(parse_valuation_text("n=2\n1,2: 1\n").is_err());
    }

    #[test]
    fn json_reads_numbers_and_strings() {
        let v = parse_valuation(r#"{"n": 2, "values": {"1,2": "-1", "1": 2}}"#).unwrap();
        assert_eq!(v[SubsetMask::from_items([1, 2])], int(-1));
        assert_eq!(v[SubsetMask::singleton(1)], int(2));
        assert!(parse_valuation(r#"{"n": 2, "values": {"3": "1"}}"#).is_err());
        assert!(parse_valuation(r#"{"values": {}}"#).is_err());
    }

    #[test]
    fn matroid_text() {
        let m = parse_matroid_text("n=3\nbases: {1,2} {1,3}\n").unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(matroid_to_text(&m), "n=3\nbases: {1,2} {1,3}\n");
        assert!(parse_matroid_text("n=4\nbases: {1,2} {3,4}\n").is_err());
        assert!(parse_matroid_text("n=3\nbases: {1,2\n").is_err());
        assert!(parse_matroid_text("n=3\n").is_err());
    }
}
