//! Module description files.
//!
//! ```text
//! [field]      p = 3
//!              e = 1
//! [module]     rank = 2
//!              g1 = "T^5 + 2*T"
//!              g2 = "T"
//! ```
//!
//! A key may share a line with its section header. `#` starts a comment outside
//! quotes. `[field] d` (default 1) is the degree of the coefficient field over
//! F_q(T); for d > 1 heights come from a separate table and the `g` keys are optional.

use std::collections::BTreeMap;

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fq::FqContext;
use crate::parse::parse_rational_at;
use crate::ratfunc::RationalFunctionField;

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSpec {
    pub fq: FqContext,
    pub field: RationalFunctionField,
    pub d: u64,
    pub rank: usize,
    /// Absent only when d > 1 and no coefficients were given.
    pub module: Option<DrinfeldModule<RationalFunctionField>>,
}

impl ModuleSpec {
    pub fn module(&self) -> Result<&DrinfeldModule<RationalFunctionField>> {
        self.module
            .as_ref()
            .ok_or_else(|| Error::InvalidModule("no coefficients g1..gr in the module file".into()))
    }
}

struct Entry {
    value: String,
    line: usize,
    col: usize,
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Splits `key = value` starting at char column `col` (1-based) of `line`.
fn key_value(text: &str, line: usize, col: usize) -> Result<(String, Entry)> {
    let Some(eq) = text.find('=') else {
        return Err(Error::parse(line, col, "expected `key = value`"));
    };
    let key = text[..eq].trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::parse(line, col, format!("invalid key `{key}`")));
    }
    let rest = &text[eq + 1..];
    let lead = rest.len() - rest.trim_start().len();
    let raw = rest.trim();
    let mut vcol = col + text[..eq + 1 + lead].chars().count();
    let value = if let Some(inner) = raw.strip_prefix('"') {
        let Some(end) = inner.find('"') else {
            return Err(Error::parse(line, vcol, "unterminated string"));
        };
        if !inner[end + 1..].trim().is_empty() {
            return Err(Error::parse(line, vcol + end + 2, "unexpected text after string"));
        }
        vcol += 1;
        inner[..end].to_string()
    } else {
        raw.to_string()
    };
    Ok((
        key.to_string(),
        Entry {
            value,
            line,
            col: vcol,
        },
    ))
}

fn read_sections(src: &str) -> Result<BTreeMap<(String, String), Entry>> {
    let mut section: Option<String> = None;
    let mut entries = BTreeMap::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = strip_comment(raw);
        let indent = text.len() - text.trim_start().len();
        let mut body = text.trim_start();
        let mut col = text[..indent].chars().count() + 1;
        if body.trim().is_empty() {
            continue;
        }
        if let Some(after) = body.strip_prefix('[') {
            let Some(end) = after.find(']') else {
                return Err(Error::parse(line, col, "unterminated section header"));
            };
            let name = after[..end].trim();
            if name != "field" && name != "module" {
                return Err(Error::parse(line, col + 1, format!("unknown section `{name}`")));
            }
            section = Some(name.to_string());
            let rest = &after[end + 1..];
            let lead = rest.len() - rest.trim_start().len();
            col += after[..end + 1 + lead].chars().count() + 1;
            body = rest.trim_start();
            if body.trim().is_empty() {
                continue;
            }
        }
        let Some(sec) = &section else {
            return Err(Error::parse(line, col, "key outside of a section"));
        };
        let (key, entry) = key_value(body, line, col)?;
        let slot = (sec.clone(), key.clone());
        if entries.contains_key(&slot) {
            return Err(Error::parse(line, col, format!("duplicate key `{key}`")));
        }
        entries.insert(slot, entry);
    }
    Ok(entries)
}

fn int_entry<T: std::str::FromStr>(e: &Entry, what: &str) -> Result<T> {
    e.value
        .trim()
        .parse()
        .map_err(|_| Error::parse(e.line, e.col, format!("expected an integer for `{what}`")))
}

pub fn parse_module_file(src: &str) -> Result<ModuleSpec> {
    let mut entries = read_sections(src)?;
    let mut take = |sec: &str, key: &str| entries.remove(&(sec.to_string(), key.to_string()));
    let p: u64 = match take("field", "p") {
        Some(e) => int_entry(&e, "p")?,
        None => return Err(Error::InvalidModule("missing `[field] p`".into())),
    };
    let e: u32 = match take("field", "e") {
        Some(en) => int_entry(&en, "e")?,
        None => 1,
    };
    let d: u64 = match take("field", "d") {
        Some(en) => int_entry(&en, "d")?,
        None => 1,
    };
    if d == 0 {
        return Err(Error::InvalidModule("d must be at least 1".into()));
    }
    let rank: usize = match take("module", "rank") {
        Some(en) => int_entry(&en, "rank")?,
        None => return Err(Error::InvalidModule("missing `[module] rank`".into())),
    };
    if rank == 0 {
        return Err(Error::InvalidModule("rank must be at least 1".into()));
    }
    let fq = FqContext::new(p, e)?;
    let field = RationalFunctionField::new(&fq);
    let mut g = Vec::new();
    for i in 1..=rank {
        match take("module", &format!("g{i}")) {
            Some(en) => g.push(parse_rational_at(&field, &en.value, en.line, en.col)?),
            None => break,
        }
    }
    if let Some(((sec, key), en)) = entries.into_iter().next() {
        return Err(Error::parse(en.line, en.col, format!("unknown key `{key}` in [{sec}]")));
    }
    let module = match g.len() {
        0 if d > 1 => None,
        n if n == rank => Some(DrinfeldModule::over_function_field(&field, rank, g)?),
        n => {
            return Err(Error::InvalidModule(format!(
                "rank {rank} needs g1..g{rank}, found {n}"
            )))
        }
    };
    Ok(ModuleSpec {
        fq,
        field,
        d,
        rank,
        module,
    })
}

/// Canonical text form; parses back to an equal spec.
pub fn render_module_file(spec: &ModuleSpec) -> String {
    let mut out = format!("[field]      p = {}\n             e = {}\n", spec.fq.p(), spec.fq.e());
    if spec.d != 1 {
        out.push_str(&format!("             d = {}\n", spec.d));
    }
    out.push_str(&format!("[module]     rank = {}\n", spec.rank));
    if let Some(m) = &spec.module {
        for (i, g) in m.coefficients().iter().enumerate() {
            out.push_str(&format!("             g{} = \"{}\"\n", i + 1, spec.field.format(g)));
        }
    }
    out
}
