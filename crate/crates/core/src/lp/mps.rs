//! Fixed-layout MPS interchange.
//!
//! Row and column names occupy the classic 8-character fields (columns 5-12,
//! 15-22) and are rejected when longer; the NAME record is free length. Numbers start at column 25 and are written in the
//! shortest notation that parses back to the identical `f64`, so they may
//! run past the 12-character field; the reader splits on whitespace.
//! One coefficient is written per line, columns and rows keep insertion
//! order, and a column without any coefficient is declared with an explicit
//! zero objective entry.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::problem::{LpProblem, Sense, VarId};
use super::LpError;

pub const MAX_NAME_LEN: usize = 8;
const OBJ: &str = "COST";
const RHS_SET: &str = "RHS";
const BND_SET: &str = "BND";

fn check_name(kind: &str, name: &str) -> Result<(), LpError> {
    let ok = !name.is_empty()
        && name.len() <= MAX_NAME_LEN
        && name.bytes().all(|b| b.is_ascii_graphic());
    if ok {
        Ok(())
    } else {
        Err(LpError::Interchange(format!(
            "{kind} name {name:?} does not fit the fixed MPS field (1-{MAX_NAME_LEN} printable ASCII characters)"
        )))
    }
}

fn num(v: f64) -> String {
    let plain = format!("{v}");
    let sci = format!("{v:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

fn line(out: &mut String, f1: &str, f2: &str, f3: &str, value: Option<f64>) {
    let _ = write!(out, " {f1:<2} {f2:<8}");
    if !f3.is_empty() || value.is_some() {
        let _ = write!(out, "  {f3:<8}");
    }
    if let Some(v) = value {
        let _ = write!(out, "  {}", num(v));
    }
    // fixed layout carries no trailing blanks
    while out.ends_with(' ') {
        out.pop();
    }
    out.push('\n');
}

/// Serializes `p` as a fixed-layout MPS document.
pub fn export_interchange(p: &LpProblem) -> Result<Vec<u8>, LpError> {
    p.validate()?;
    if !p.name.bytes().all(|b| b.is_ascii_graphic()) {
        return Err(LpError::Interchange(format!("problem name {:?} is not printable ASCII", p.name)));
    }
    for v in &p.variables {
        check_name("variable", &v.name)?;
    }
    for c in &p.constraints {
        check_name("row", &c.name)?;
        if c.name == OBJ {
            return Err(LpError::Interchange(format!("row name {OBJ} is reserved for the objective")));
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", if p.name.is_empty() { "LP" } else { &p.name });
    out.push_str("ROWS\n");
    line(&mut out, "N", OBJ, "", None);
    for c in &p.constraints {
        let s = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        line(&mut out, s, &c.name, "", None);
    }

    out.push_str("COLUMNS\n");
    let cols = p.columns();
    for (j, v) in p.variables.iter().enumerate() {
        if v.cost != 0.0 || cols[j].is_empty() {
            line(&mut out, "", &v.name, OBJ, Some(v.cost));
        }
        for &(i, a) in &cols[j] {
            line(&mut out, "", &v.name, &p.constraints[i].name, Some(a));
        }
    }

    out.push_str("RHS\n");
    for c in &p.constraints {
        if c.rhs != 0.0 {
            line(&mut out, "", RHS_SET, &c.name, Some(c.rhs));
        }
    }

    out.push_str("BOUNDS\n");
    for v in &p.variables {
        let (lo, hi) = (v.lower, v.upper);
        let n = v.name.as_str();
        if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            line(&mut out, "FR", BND_SET, n, None);
        } else if lo == hi {
            line(&mut out, "FX", BND_SET, n, Some(lo));
        } else {
            if lo == f64::NEG_INFINITY {
                line(&mut out, "MI", BND_SET, n, None);
            } else if lo != 0.0 || (hi < 0.0) {
                line(&mut out, "LO", BND_SET, n, Some(lo));
            }
            if hi.is_finite() {
                line(&mut out, "UP", BND_SET, n, Some(hi));
            }
        }
    }
    out.push_str("ENDATA\n");
    Ok(out.into_bytes())
}

#[derive(PartialEq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
}

/// Parses a document written by [`export_interchange`] (or any MPS file
/// restricted to the same record types).
pub fn import_interchange(bytes: &[u8]) -> Result<LpProblem, LpError> {
    let text = core::str::from_utf8(bytes).map_err(|e| LpError::Interchange(e.to_string()))?;
    let err = |ln: usize, msg: &str| LpError::Interchange(format!("line {}: {msg}", ln + 1));
    let parse = |ln: usize, s: &str| -> Result<f64, LpError> {
        s.parse::<f64>().map_err(|_| err(ln, &format!("bad number {s:?}")))
    };

    let mut p = LpProblem::new("");
    let mut section = Section::None;
    let mut obj_name: Option<String> = None;
    let mut row_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut col_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut rows: Vec<(String, Sense, Vec<(VarId, f64)>, f64)> = Vec::new();
    let mut ended = false;

    for (ln, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        if !raw.starts_with(' ') {
            let mut tok = raw.split_whitespace();
            let head = tok.next().unwrap_or("");
            section = match head {
                "NAME" => {
                    p.name = tok.next().unwrap_or("").into();
                    Section::None
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => {
                    ended = true;
                    break;
                }
                "RANGES" | "OBJSENSE" | "OBJSENCE" => {
                    return Err(err(ln, &format!("unsupported section {head}")));
                }
                _ => return Err(err(ln, &format!("unknown section {head}"))),
            };
            continue;
        }
        let tok: Vec<&str> = raw.split_whitespace().collect();
        match section {
            Section::None => return Err(err(ln, "data outside a section")),
            Section::Rows => {
                if tok.len() != 2 {
                    return Err(err(ln, "row record needs type and name"));
                }
                let sense = match tok[0] {
                    "N" => {
                        if obj_name.is_some() {
                            return Err(err(ln, "more than one objective row"));
                        }
                        obj_name = Some(tok[1].into());
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    t => return Err(err(ln, &format!("unknown row type {t}"))),
                };
                if row_index.insert(tok[1].into(), rows.len()).is_some() {
                    return Err(err(ln, "duplicate row"));
                }
                rows.push((tok[1].into(), sense, Vec::new(), 0.0));
            }
            Section::Columns => {
                if tok.contains(&"'MARKER'") {
                    return Err(err(ln, "integer markers are not supported"));
                }
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err(ln, "column record needs name and one or two entries"));
                }
                let j = match col_index.get(tok[0]) {
                    Some(&j) => {
                        if j + 1 != p.variables.len() {
                            return Err(err(ln, "column entries must be contiguous"));
                        }
                        j
                    }
                    None => {
                        let v = p.add_var(tok[0], 0.0, f64::INFINITY, 0.0);
                        col_index.insert(tok[0].into(), v.0);
                        v.0
                    }
                };
                for pair in tok[1..].chunks(2) {
                    let value = parse(ln, pair[1])?;
                    if obj_name.as_deref() == Some(pair[0]) {
                        p.variables[j].cost = value;
                    } else {
                        let &i = row_index
                            .get(pair[0])
                            .ok_or_else(|| err(ln, &format!("unknown row {}", pair[0])))?;
                        rows[i].2.push((VarId(j), value));
                    }
                }
            }
            Section::Rhs => {
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err(ln, "rhs record needs set name and one or two entries"));
                }
                for pair in tok[1..].chunks(2) {
                    let value = parse(ln, pair[1])?;
                    if obj_name.as_deref() == Some(pair[0]) {
                        return Err(err(ln, "objective constants are not supported"));
                    }
                    let &i = row_index
                        .get(pair[0])
                        .ok_or_else(|| err(ln, &format!("unknown row {}", pair[0])))?;
                    rows[i].3 = value;
                }
            }
            Section::Bounds => {
                if tok.len() < 3 {
                    return Err(err(ln, "bound record too short"));
                }
                let &j = col_index
                    .get(tok[2])
                    .ok_or_else(|| err(ln, &format!("unknown column {}", tok[2])))?;
                let v = &mut p.variables[j];
                let value = || -> Result<f64, LpError> {
                    tok.get(3).map(|s| parse(ln, s)).unwrap_or_else(|| Err(err(ln, "bound value missing")))
                };
                match tok[0] {
                    "UP" => v.upper = value()?,
                    "LO" => v.lower = value()?,
                    "FX" => {
                        let b = value()?;
                        v.lower = b;
                        v.upper = b;
                    }
                    "FR" => {
                        v.lower = f64::NEG_INFINITY;
                        v.upper = f64::INFINITY;
                    }
                    "MI" => v.lower = f64::NEG_INFINITY,
                    "PL" => v.upper = f64::INFINITY,
                    t => return Err(err(ln, &format!("unsupported bound type {t}"))),
                }
            }
        }
    }
    if !ended {
        return Err(LpError::Interchange("missing ENDATA".into()));
    }
    for (name, sense, terms, rhs) in rows {
        p.add_constraint(name, terms, sense, rhs);
    }
    p.validate()?;
    Ok(p)
}
