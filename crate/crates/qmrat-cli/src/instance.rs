//! Instance files.
//!
//! ```toml
//! group = "C4"
//! H = "sigma^2"
//! epsilon = 1          # also epsilon1, epsilon2
//!
//! [params]
//! a = 2
//! c = "1/3"
//!
//! [field]              # only where K is not k(sqrt(a))
//! kind = "cyclic_quartic"
//! a = 5
//! b = 1
//! ```

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use qmrat::decider::{DeciderError, FieldData, Instance};
use qmrat::glz::ConjugacyLabel;
use toml::de::{DeTable, DeValue};
use toml::Spanned;

#[derive(Debug)]
pub enum InstanceError {
    /// Syntax or schema problem, with 1-based line and column.
    Parse { line: usize, col: usize, msg: String },
    Invalid(DeciderError),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Parse { line, col, msg } => write!(f, "{line}:{col}: {msg}"),
            InstanceError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

struct Doc<'s> {
    src: &'s str,
}

impl Doc<'_> {
    fn err(&self, span: Range<usize>, msg: impl Into<String>) -> InstanceError {
        let before = &self.src[..span.start.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        InstanceError::Parse { line, col, msg: msg.into() }
    }

    fn rational(&self, key: &str, v: &Spanned<DeValue>) -> Result<BigRational, InstanceError> {
        match v.get_ref() {
            DeValue::Integer(i) => BigInt::parse_bytes(i.as_str().as_bytes(), i.radix())
                .map(BigRational::from_integer)
                .ok_or_else(|| self.err(v.span(), format!("{key}: integer out of range"))),
            DeValue::String(s) => parse_rational(s)
                .ok_or_else(|| self.err(v.span(), format!("{key}: {s:?} is not a rational number like \"-3/4\""))),
            other => Err(self.err(v.span(), format!("{key}: expected an integer or a rational string, found {}", other.type_str()))),
        }
    }

    fn sign(&self, key: &str, v: &Spanned<DeValue>) -> Result<i8, InstanceError> {
        match v.get_ref().as_integer().and_then(|i| i64::from_str_radix(i.as_str(), i.radix()).ok()) {
            Some(1) => Ok(1),
            Some(-1) => Ok(-1),
            _ => Err(self.err(v.span(), format!("{key} must be 1 or -1"))),
        }
    }

    fn string<'v>(&self, key: &str, v: &'v Spanned<DeValue>) -> Result<&'v str, InstanceError> {
        v.get_ref().as_str().ok_or_else(|| self.err(v.span(), format!("{key} must be a string")))
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let r: BigRational = s.parse().ok()?;
    Some(r)
}

/// Reads an instance file. Keys are checked against the schema; the
/// decider validates the values.
pub fn parse_instance(src: &str) -> Result<Instance, InstanceError> {
    let doc = Doc { src };
    let root = DeTable::parse(src).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        doc.err(span, e.message().trim().to_string())
    })?;
    let table = root.get_ref();
    let whole = root.span();

    let mut group = None;
    let mut h = None;
    let mut signs: [Option<i8>; 3] = [None; 3];
    let mut params = Vec::new();
    let mut field = None;
    for (k, v) in table.iter() {
        let key = k.get_ref().as_ref();
        match key {
            "group" => group = Some((doc.string(key, v)?, v.span())),
            "H" | "h" => h = Some(doc.string(key, v)?),
            "epsilon" => signs[0] = Some(doc.sign(key, v)?),
            "epsilon1" => signs[1] = Some(doc.sign(key, v)?),
            "epsilon2" => signs[2] = Some(doc.sign(key, v)?),
            "params" => {
                let t = v.get_ref().as_table().ok_or_else(|| doc.err(v.span(), "params must be a table"))?;
                for (pk, pv) in t.iter() {
                    let name = pk.get_ref().as_ref();
                    if !["a", "b", "c", "d", "e"].contains(&name) {
                        return Err(doc.err(pk.span(), format!("unknown parameter {name:?} (expected a..e)")));
                    }
                    params.push((name.to_string(), doc.rational(&format!("params.{name}"), pv)?));
                }
            }
            "field" => {
                let t = v.get_ref().as_table().ok_or_else(|| doc.err(v.span(), "field must be a table"))?;
                let kind = t.get("kind").ok_or_else(|| doc.err(v.span(), "field.kind is required"))?;
                let kind_str = doc.string("field.kind", kind)?;
                let mut entries = Vec::new();
                for (fk, fv) in t.iter() {
                    let name = fk.get_ref().as_ref();
                    if name != "kind" {
                        entries.push((name.to_string(), doc.rational(&format!("field.{name}"), fv)?, fk.span()));
                    }
                }
                let f = FieldData::from_entries(kind_str, |n| {
                    entries.iter().find(|(e, _, _)| e == n).map(|(_, q, _)| q.clone())
                })
                .map_err(|e| doc.err(kind.span(), e.to_string()))?;
                let known: Vec<&str> = f.entries().iter().map(|(n, _)| *n).collect();
                if let Some((n, _, span)) = entries.iter().find(|(n, _, _)| !known.contains(&n.as_str())) {
                    return Err(doc.err(span.clone(), format!("field.{n} is not used by kind {kind_str:?}")));
                }
                field = Some(f);
            }
            other => return Err(doc.err(k.span(), format!("unknown key {other:?}"))),
        }
    }
    let (group, gspan) = group.ok_or_else(|| doc.err(whole.start..whole.start, "missing key \"group\""))?;
    let label: ConjugacyLabel = group.parse().map_err(|_| doc.err(gspan, format!("unknown group {group:?}")))?;
    let h = h.unwrap_or(if label == ConjugacyLabel::C1 { "1" } else { "" });
    if h.is_empty() {
        return Err(doc.err(whole.start..whole.start, "missing key \"H\""));
    }
    let mut inst = Instance::new(label, h).map_err(InstanceError::Invalid)?;
    for (name, q) in params {
        inst = inst.param(&name, q);
    }
    if let Some(e) = signs[0] {
        inst = inst.with_epsilon(e);
    }
    if let Some(e) = signs[1] {
        inst = inst.with_epsilon1(e);
    }
    if let Some(e) = signs[2] {
        inst = inst.with_epsilon2(e);
    }
    if let Some(f) = field {
        inst = inst.with_field(f);
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_documented_example() {
        let i = parse_instance("group = \"C4\"\nH = \"<sigma^2>\"\n[params]\na = 2\nc = \"1/3\"\n").unwrap();
        assert_eq!(i.h, "sigma^2");
        assert_eq!(i.params["c"], BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_instance("group = \"C4\"\nH = \"1\"\n[params]\nz = 1\n").unwrap_err();
        assert!(matches!(e, InstanceError::Parse { line: 4, col: 1, .. }), "{e}");
        let e = parse_instance("group = \"C4\"\nH = \n").unwrap_err();
        assert!(matches!(e, InstanceError::Parse { line: 2, .. }), "{e}");
        let e = parse_instance("group = \"C4\"\nH = \"1\"\nepsilon = 2\n").unwrap_err();
        assert!(matches!(e, InstanceError::Parse { line: 3, col: 11, .. }), "{e}");
        let e = parse_instance("group = \"C4\"\nH = \"tau\"\n").unwrap_err();
        assert!(matches!(e, InstanceError::Invalid(_)));
    }
}
