//! Switch plans: one directive per coset, in order of the coset
//! representatives.
//!
//! ```text
//! # mrdplan v1
//! base=code.mrd rows=2
//! keep
//! translate 1 0 0 1
//! replace other.mrd
//! keep
//! ```

use std::fs;
use std::path::Path;

use mrd_core::io::{get_usize, parse_key_values, read_code};
use mrd_core::switching::{Directive, SwitchPlan};
use mrd_core::{Error, Matrix, RankCode};

use crate::Failure;

pub const PLAN_HEADER: &str = "# mrdplan v1";

pub fn read_plan(path: &Path, code: &RankCode) -> Result<SwitchPlan, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let dir = path.parent().unwrap_or(Path::new(""));
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some(PLAN_HEADER) {
        return Err(Error::Parse(format!("missing `{PLAN_HEADER}` header")).into());
    }
    let mut lines = lines.filter(|l| !l.starts_with('#'));
    let rows_line = lines.next().ok_or_else(|| Error::Parse("missing `rows=`".into()))?;
    let kv = parse_key_values(rows_line)?;
    let rows = get_usize(&kv, "rows")?;
    if let Some(base) = kv.get("base") {
        let p = dir.join(base);
        let text = fs::read_to_string(&p).map_err(|e| Failure::io(&p, e))?;
        if !read_code(&text)?.same_members(code)? {
            return Err(Error::ParamMismatch(format!("plan was written for {base}")).into());
        }
    }
    let f = code.field();
    let n = code.params().n;
    let mut directives = Vec::new();
    for line in lines {
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let d = match word {
            "keep" => Directive::Keep,
            "translate" => Directive::Translate(Matrix::parse_line(f, rows, n, rest)?),
            "replace" => {
                let p = dir.join(rest.trim());
                let text = fs::read_to_string(&p).map_err(|e| Failure::io(&p, e))?;
                Directive::Replace(read_code(&text)?)
            }
            other => return Err(Error::Parse(format!("unknown directive `{other}`")).into()),
        };
        directives.push(d);
    }
    Ok(SwitchPlan { rows, directives })
}
