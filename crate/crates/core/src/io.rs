//! The `mrdcode v1` text format.
//!
//! ```text
//! # mrdcode v1
//! q=4 modulus=GF(2^2; 1,1,1) m=2 n=2 d=2 kind=linear
//! 1.0 0.1 0.1 1.1
//! ```
//!
//! One matrix per line, row-major: basis matrices for linear codes, every
//! codeword (sorted) for explicit ones.

use std::collections::BTreeMap;

use crate::code::{CodeBody, CodeParams, RankCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

pub const CODE_HEADER: &str = "# mrdcode v1";

pub fn write_code(c: &RankCode) -> String {
    let p = c.params();
    let f = c.field();
    let (kind, words) = match c.body() {
        CodeBody::Linear(b) => ("linear", b),
        CodeBody::Explicit(w) => ("explicit", w),
    };
    let mut out =
        format!("{CODE_HEADER}\nq={} modulus={} m={} n={} d={} kind={kind}\n", p.q, f.descriptor(), p.m, p.n, p.d);
    for x in words {
        out.push_str(&x.to_line(f));
        out.push('\n');
    }
    out
}

/// Splits `k=v` tokens, keeping parenthesized values with spaces intact.
pub fn parse_key_values(line: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut pending: Option<(String, String)> = None;
    for tok in line.split_whitespace() {
        if let Some((k, mut v)) = pending.take() {
            v.push(' ');
            v.push_str(tok);
            if v.matches('(').count() > v.matches(')').count() {
                pending = Some((k, v));
            } else {
                out.insert(k, v);
            }
            continue;
        }
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, found `{tok}`")))?;
        if v.matches('(').count() > v.matches(')').count() {
            pending = Some((k.to_string(), v.to_string()));
        } else if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse(format!("duplicate key `{k}`")));
        }
    }
    if let Some((k, _)) = pending {
        return Err(Error::Parse(format!("unbalanced parentheses in `{k}`")));
    }
    Ok(out)
}

pub fn get_usize(kv: &BTreeMap<String, String>, key: &str) -> Result<usize> {
    kv.get(key)
        .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("`{key}` is not a non-negative integer")))
}

pub fn read_code(text: &str) -> Result<RankCode> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some(CODE_HEADER) {
        return Err(Error::Parse(format!("missing `{CODE_HEADER}` header")));
    }
    let header = lines.next().ok_or_else(|| Error::Parse("missing parameter line".into()))?;
    let kv = parse_key_values(header)?;
    let q = get_usize(&kv, "q")? as u32;
    let field = match kv.get("modulus") {
        Some(desc) => Field::parse_descriptor(desc)?,
        None => Field::of_order(q)?,
    };
    if field.order() != q {
        return Err(Error::Parse(format!("q={q} does not match modulus {}", field.descriptor())));
    }
    let (m, n, d) = (get_usize(&kv, "m")?, get_usize(&kv, "n")?, get_usize(&kv, "d")?);
    let params = CodeParams::new(q, m, n, d)?;
    let words = lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| Matrix::parse_line(&field, m, n, l))
        .collect::<Result<Vec<_>>>()?;
    match kv.get("kind").map(String::as_str) {
        Some("linear") => RankCode::linear(&field, params, words),
        Some("explicit") => RankCode::explicit(&field, params, words),
        other => Err(Error::Parse(format!("unknown kind {other:?}"))),
    }
}
