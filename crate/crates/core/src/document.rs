//! JSON documents describing a polarized surface.
//!
//! ```json
//! {
//!   "name": "cubic-scroll",
//!   "basis": ["l", "e1"],
//!   "gram": [[1, 0], [0, -1]],
//!   "K": [-3, 1],
//!   "h": [2, -1],
//!   "pg": 0,
//!   "q": 0,
//!   "kind": "blowup_p2(anticanonical=true)",
//!   "flags": {"very_ample": "true", "non_special": "true"},
//!   "provenance": ""
//! }
//! ```
//!
//! `kind`, `flags` and `provenance` may be omitted (`abstract`, all unknown,
//! empty). Integers are JSON numbers of any size. [`serialize_surface`]
//! writes the canonical form, which [`parse_surface`] reads back unchanged.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Number;
use thiserror::Error;

use crate::invariants::{HypothesisFlags, InvariantsError, PolarizedSurface, SurfaceKind};
use crate::lattice::{make_lattice, DivisorClass, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid `{path}`: {message}")]
    Validation { path: String, message: String },
}

impl DocumentError {
    fn at(path: impl Into<String>, message: impl ToString) -> Self {
        DocumentError::Validation {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: String,
    basis: Vec<String>,
    gram: Vec<Vec<Number>>,
    #[serde(rename = "K")]
    k: Vec<Number>,
    h: Vec<Number>,
    pg: Number,
    q: Number,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    flags: HypothesisFlags,
    #[serde(default)]
    provenance: String,
}

fn integer(n: &Number, path: &str) -> Result<BigInt, DocumentError> {
    let text = n.to_string();
    text.parse::<BigInt>()
        .map_err(|_| DocumentError::at(path, format!("expected an integer, found {text}")))
}

fn integers(v: &[Number], path: &str) -> Result<Vec<BigInt>, DocumentError> {
    v.iter()
        .enumerate()
        .map(|(i, n)| integer(n, &format!("{path}[{i}]")))
        .collect()
}

fn count(n: &Number, path: &str) -> Result<u64, DocumentError> {
    n.as_u64()
        .ok_or_else(|| DocumentError::at(path, format!("expected a non-negative integer, found {n}")))
}

fn lattice_path(e: &LatticeError) -> String {
    match e {
        LatticeError::EmptyLattice | LatticeError::AsymmetricGram { .. } => "gram".into(),
        LatticeError::DimensionMismatch { what, .. } => match *what {
            "canonical class" => "K".into(),
            "basis labels" => "basis".into(),
            _ => "gram".into(),
        },
        LatticeError::ParityViolation { index, .. } => format!("gram[{index}][{index}]"),
    }
}

/// Reads and validates a surface document.
pub fn parse_surface(text: &str) -> Result<PolarizedSurface, DocumentError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| DocumentError::Parse(e.to_string()))?;
    let gram = raw
        .gram
        .iter()
        .enumerate()
        .map(|(i, row)| integers(row, &format!("gram[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let canonical = integers(&raw.k, "K")?;
    let h = DivisorClass::new(integers(&raw.h, "h")?);
    let pg = count(&raw.pg, "pg")?;
    let q = count(&raw.q, "q")?;
    let kind = match &raw.kind {
        Some(k) => k.parse::<SurfaceKind>().map_err(|e| DocumentError::at("kind", e))?,
        None => SurfaceKind::Abstract,
    };
    let lattice = make_lattice(gram, canonical, raw.basis).map_err(|e| DocumentError::at(lattice_path(&e), &e))?;
    let surface = PolarizedSurface::new(raw.name, lattice, h, pg, q, kind, raw.flags).map_err(|e| {
        let path = match &e {
            InvariantsError::KindMismatch { field, .. } => (*field).to_string(),
            _ => "h".to_string(),
        };
        DocumentError::at(path, &e)
    })?;
    Ok(surface.with_provenance(raw.provenance))
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn int_list(v: &[BigInt]) -> String {
    let items: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", items.join(", "))
}

/// Canonical text: fixed key order, one key per line, every flag written.
pub fn serialize_surface(s: &PolarizedSurface) -> String {
    let lat = s.lattice();
    let basis: Vec<String> = lat.labels().iter().map(|l| json_str(l)).collect();
    let gram: Vec<String> = lat.gram().iter().map(|row| int_list(row)).collect();
    let f = s.flags();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"name\": {},", json_str(s.name()));
    let _ = writeln!(out, "  \"basis\": [{}],", basis.join(", "));
    let _ = writeln!(out, "  \"gram\": [{}],", gram.join(", "));
    let _ = writeln!(out, "  \"K\": {},", int_list(lat.canonical().coeffs()));
    let _ = writeln!(out, "  \"h\": {},", int_list(s.h().coeffs()));
    let _ = writeln!(out, "  \"pg\": {},", s.pg());
    let _ = writeln!(out, "  \"q\": {},", s.q());
    let _ = writeln!(out, "  \"kind\": {},", json_str(&s.kind().to_string()));
    let _ = writeln!(
        out,
        "  \"flags\": {{\"very_ample\": \"{}\", \"non_special\": \"{}\", \"h0_2K_minus_h_zero\": \"{}\", \"h0_h_minus_K_zero\": \"{}\"}},",
        f.very_ample, f.non_special, f.h0_2k_minus_h_zero, f.h0_h_minus_k_zero
    );
    let _ = writeln!(out, "  \"provenance\": {}", json_str(s.provenance()));
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, builtin_names};
    use crate::invariants::TriState;

    const SCROLL: &str = r#"{
  "name": "cubic-scroll",
  "basis": ["l", "e1"],
  "gram": [[1, 0], [0, -1]],
  "K": [-3, 1],
  "h": [2, -1],
  "pg": 0,
  "q": 0,
  "kind": "blowup_p2(anticanonical=true)",
  "flags": {"very_ample": "true", "non_special": "true", "h0_2K_minus_h_zero": "unknown", "h0_h_minus_K_zero": "false"},
  "provenance": "F_1 in P^4"
}
"#;

    #[test]
    fn canonical_text_is_a_fixed_point() {
        let s = parse_surface(SCROLL).unwrap();
        assert_eq!(serialize_surface(&s), SCROLL);
    }

    #[test]
    fn every_builtin_round_trips() {
        for name in builtin_names() {
            let s = builtin(&name).unwrap();
            let text = serialize_surface(&s);
            let back = parse_surface(&text).unwrap();
            assert_eq!(back, s, "{name}");
            assert_eq!(serialize_surface(&back), text);
        }
    }

    #[test]
    fn omitted_fields_take_defaults() {
        let text = r#"{"name": "x", "basis": ["a"], "gram": [[2]], "K": [0], "h": [1], "pg": 0, "q": 0}"#;
        let s = parse_surface(text).unwrap();
        assert_eq!(s.flags(), HypothesisFlags::default());
        assert_eq!(s.flags().non_special, TriState::Unknown);
        assert_eq!(s.kind(), SurfaceKind::Abstract);
        assert_eq!(s.provenance(), "");
    }

    #[test]
    fn huge_integers_survive() {
        let big = "123456789012345678901234567890";
        let text = format!(
            r#"{{"name": "x", "basis": ["a", "b"], "gram": [[0, 1], [1, 0]], "K": [0, 0], "h": [1, {big}], "pg": 0, "q": 0}}"#
        );
        let s = parse_surface(&text).unwrap();
        assert_eq!(s.h().coeffs()[1], big.parse::<BigInt>().unwrap());
        let canon = serialize_surface(&s);
        assert!(canon.contains(&format!("\"h\": [1, {big}]")));
        assert_eq!(parse_surface(&canon).unwrap(), s);
    }

    #[test]
    fn validation_errors_carry_paths() {
        let asym = SCROLL.replace("[[1, 0], [0, -1]]", "[[1, 2], [0, -1]]");
        match parse_surface(&asym) {
            Err(DocumentError::Validation { path, .. }) => assert_eq!(path, "gram"),
            other => panic!("{other:?}"),
        }
        let odd = SCROLL.replace("\"K\": [-3, 1]", "\"K\": [-2, 1]");
        assert!(matches!(parse_surface(&odd), Err(DocumentError::Validation { path, .. }) if path == "gram[0][0]"));
        let short = SCROLL.replace("\"h\": [2, -1]", "\"h\": [2]");
        assert!(matches!(parse_surface(&short), Err(DocumentError::Validation { path, .. }) if path == "h"));
        let frac = SCROLL.replace("\"h\": [2, -1]", "\"h\": [2.5, -1]");
        assert!(matches!(parse_surface(&frac), Err(DocumentError::Validation { path, .. }) if path == "h[0]"));
        let neg = SCROLL.replace("\"pg\": 0", "\"pg\": -1");
        assert!(matches!(parse_surface(&neg), Err(DocumentError::Validation { path, .. }) if path == "pg"));
        let kind = SCROLL.replace("blowup_p2(anticanonical=true)", "torus");
        assert!(matches!(parse_surface(&kind), Err(DocumentError::Validation { path, .. }) if path == "kind"));
        let flag = SCROLL.replace("\"very_ample\": \"true\"", "\"very_ample\": \"maybe\"");
        assert!(matches!(parse_surface(&flag), Err(DocumentError::Parse(_))));
        assert!(matches!(parse_surface("{"), Err(DocumentError::Parse(_))));
        let extra = SCROLL.replace("\"q\": 0,", "\"q\": 0, \"colour\": 1,");
        assert!(matches!(parse_surface(&extra), Err(DocumentError::Parse(_))));
    }
}
