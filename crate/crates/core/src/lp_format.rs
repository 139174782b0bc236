//! Reading and writing models in the LP text format understood by CPLEX,
//! Gurobi, HiGHS and SCIP.
//!
//! The writer emits the subset the reader accepts, so `parse_lp(&write_lp(m))`
//! reproduces `m` exactly, including row order, term order, variable order and
//! the builder metadata (carried in a leading `\ eqcol:` comment line).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::model::{MilpModel, ModelKind, ModelMeta, ObjectiveSense, RowSense, VarKind};

const WRAP: usize = 100;
const META_TAG: &str = "\\ eqcol:";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpFormatError {
    #[error("missing objective section")]
    MissingObjective,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("unexpected end of section `{0}`")]
    Truncated(String),
    #[error("bad number `{0}`")]
    BadNumber(String),
    #[error("bad metadata: {0}")]
    BadMetadata(String),
}

/// Writes `model` as LP text.
pub fn write_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let meta = model.meta();
    let big_m = meta.big_m.map_or_else(|| "-".to_string(), |m| m.to_string());
    let _ = writeln!(
        out,
        "{META_TAG} kind={} colors={} big_m={} vertices={} graph={}",
        meta.kind, meta.colors, big_m, meta.vertices, meta.graph
    );

    let objective = model.objective();
    out.push_str(match objective.sense {
        ObjectiveSense::Minimize => "Minimize\n",
        ObjectiveSense::Maximize => "Maximize\n",
    });
    let mut line = Line::new(" obj:");
    for &(j, c) in &objective.terms {
        line.term(&mut out, c, &model.variables()[j].name);
    }
    if objective.terms.is_empty() || objective.constant != 0.0 {
        line.constant(&mut out, objective.constant);
    }
    line.finish(&mut out);

    out.push_str("Subject To\n");
    for row in model.constraints() {
        let mut line = Line::new(&format!(" {}:", row.name));
        for &(j, c) in &row.terms {
            line.term(&mut out, c, &model.variables()[j].name);
        }
        if row.terms.is_empty() {
            line.push(&mut out, "0");
        }
        line.push(&mut out, row.sense.symbol());
        line.push(&mut out, &fmt_num(row.rhs));
        line.finish(&mut out);
    }

    // The reader takes variable order from Bounds, then Binary. Listing every
    // variable under Bounds keeps interleaved orders intact for mixed models.
    let mixed = model.variables().iter().any(|v| v.kind == VarKind::Continuous);
    if mixed {
        out.push_str("Bounds\n");
        for v in model.variables() {
            if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
                let _ = writeln!(out, " {} free", v.name);
            } else {
                let _ = writeln!(out, " {} <= {} <= {}", fmt_num(v.lower), v.name, fmt_num(v.upper));
            }
        }
    }
    if model.num_binaries() > 0 {
        out.push_str("Binary\n");
        let mut line = Line::new("");
        for v in model.variables().iter().filter(|v| v.kind == VarKind::Binary) {
            line.push(&mut out, &v.name);
        }
        line.finish(&mut out);
    }
    out.push_str("End\n");
    out
}

/// Writes `model` to `path` as LP text.
pub fn export_lp(model: &MilpModel, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, write_lp(model))
}

fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// Accumulates space-separated tokens, wrapping long rows onto indented
/// continuation lines.
struct Line {
    buf: String,
    fresh: bool,
}

impl Line {
    fn new(head: &str) -> Self {
        Self { buf: head.to_string(), fresh: head.is_empty() }
    }

    fn push(&mut self, out: &mut String, token: &str) {
        if self.buf.len() + token.len() + 1 > WRAP && !self.fresh {
            out.push_str(&self.buf);
            out.push('\n');
            self.buf = "  ".to_string();
            self.fresh = true;
        }
        if !self.buf.is_empty() {
            self.buf.push(' ');
        }
        self.buf.push_str(token);
        self.fresh = false;
    }

    fn term(&mut self, out: &mut String, coef: f64, name: &str) {
        let sign = if coef < 0.0 { "-" } else { "+" };
        let token = if coef.abs() == 1.0 {
            format!("{sign} {name}")
        } else {
            format!("{sign} {} {name}", fmt_num(coef.abs()))
        };
        self.push(out, &token);
    }

    fn constant(&mut self, out: &mut String, value: f64) {
        if value < 0.0 {
            self.push(out, &format!("- {}", fmt_num(-value)));
        } else if self.buf.trim_end().ends_with(':') {
            self.push(out, &fmt_num(value));
        } else {
            self.push(out, &format!("+ {}", fmt_num(value)));
        }
    }

    fn finish(self, out: &mut String) {
        if !self.buf.trim().is_empty() {
            out.push_str(&self.buf);
            out.push('\n');
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Rows,
    Bounds,
    Binary,
    General,
    End,
}

fn section_of(line: &str) -> Option<(Section, Option<ObjectiveSense>)> {
    let lower = line.trim().to_ascii_lowercase();
    let lower = lower.split_whitespace().collect::<Vec<_>>().join(" ");
    Some(match lower.as_str() {
        "maximize" | "maximise" | "maximum" | "max" => (Section::Objective, Some(ObjectiveSense::Maximize)),
        "minimize" | "minimise" | "minimum" | "min" => (Section::Objective, Some(ObjectiveSense::Minimize)),
        "subject to" | "such that" | "st" | "s.t." => (Section::Rows, None),
        "bounds" | "bound" => (Section::Bounds, None),
        "binary" | "binaries" | "bin" => (Section::Binary, None),
        "general" | "generals" | "gen" => (Section::General, None),
        "end" => (Section::End, None),
        _ => return None,
    })
}

fn is_number(tok: &str) -> bool {
    let t = tok.strip_prefix(['+', '-']).unwrap_or(tok);
    t.starts_with(|c: char| c.is_ascii_digit() || c == '.') || t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity")
}

fn number(tok: &str) -> Result<f64, LpFormatError> {
    let t = tok.to_ascii_lowercase();
    match t.as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => tok.parse().map_err(|_| LpFormatError::BadNumber(tok.to_string())),
    }
}

fn sense_of(tok: &str) -> Option<RowSense> {
    match tok {
        "<=" | "=<" | "<" => Some(RowSense::Le),
        ">=" | "=>" | ">" => Some(RowSense::Ge),
        "=" => Some(RowSense::Eq),
        _ => None,
    }
}

/// A linear expression read from a token stream: named terms in order of
/// appearance plus a constant.
struct Linear {
    terms: Vec<(String, f64)>,
    constant: f64,
}

/// Reads `[+|-] [coef] name` and `[+|-] number` items until a relational
/// operator, a label or the end of the tokens.
fn read_linear(tokens: &[&str], pos: &mut usize) -> Result<Linear, LpFormatError> {
    let mut lin = Linear { terms: Vec::new(), constant: 0.0 };
    while let Some(&tok) = tokens.get(*pos) {
        if sense_of(tok).is_some() || tok.ends_with(':') {
            break;
        }
        let mut sign = 1.0;
        let mut tok = tok;
        if tok == "+" || tok == "-" {
            if tok == "-" {
                sign = -1.0;
            }
            *pos += 1;
            tok = tokens.get(*pos).ok_or_else(|| LpFormatError::Truncated(tok.to_string()))?;
        }
        if is_number(tok) {
            let value = sign * number(tok)?;
            *pos += 1;
            match tokens.get(*pos) {
                Some(&name) if !is_number(name) && sense_of(name).is_none() && !name.ends_with(':') && name != "+" && name != "-" => {
                    lin.terms.push((name.to_string(), value));
                    *pos += 1;
                }
                _ => lin.constant += value,
            }
        } else {
            lin.terms.push((tok.to_string(), sign));
            *pos += 1;
        }
    }
    Ok(lin)
}

fn parse_meta(line: &str) -> Result<ModelMeta, LpFormatError> {
    let bad = |what: &str| LpFormatError::BadMetadata(what.to_string());
    let rest = line.trim_start().strip_prefix(META_TAG).ok_or_else(|| bad("tag"))?.trim_start();
    let (head, graph) = match rest.find("graph=") {
        Some(at) => (&rest[..at], rest[at + "graph=".len()..].to_string()),
        None => (rest, String::new()),
    };
    let mut meta = ModelMeta { graph, ..ModelMeta::default() };
    for pair in head.split_whitespace() {
        let (key, value) = pair.split_once('=').ok_or_else(|| bad(pair))?;
        match key {
            "kind" => meta.kind = value.parse().map_err(|_| bad(pair))?,
            "colors" => meta.colors = value.parse().map_err(|_| bad(pair))?,
            "vertices" => meta.vertices = value.parse().map_err(|_| bad(pair))?,
            "big_m" if value == "-" => meta.big_m = None,
            "big_m" => meta.big_m = Some(value.parse().map_err(|_| bad(pair))?),
            _ => return Err(bad(pair)),
        }
    }
    Ok(meta)
}

struct VarDecl {
    kind: VarKind,
    lower: f64,
    upper: f64,
}

/// Parses LP text. Variables are ordered by their first mention in the Bounds
/// section, then the Binary/General sections, then anywhere else.
pub fn parse_lp(text: &str) -> Result<MilpModel, LpFormatError> {
    let mut meta = ModelMeta::default();
    let mut sense = None;
    let mut section = Section::Preamble;
    let mut chunks: HashMap<u8, Vec<&str>> = HashMap::new();
    let key = |s: Section| s as u8;

    for raw in text.lines() {
        if raw.trim_start().starts_with(META_TAG) {
            meta = parse_meta(raw)?;
            continue;
        }
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some((next, s)) = section_of(line) {
            section = next;
            if s.is_some() {
                sense = s;
            }
            continue;
        }
        if section == Section::End {
            break;
        }
        chunks.entry(key(section)).or_default().extend(line.split_whitespace());
    }
    let sense = sense.ok_or(LpFormatError::MissingObjective)?;
    let tokens = |s: Section| chunks.get(&key(s)).cloned().unwrap_or_default();

    // Variable order and declarations.
    let mut order: Vec<String> = Vec::new();
    let mut decls: HashMap<String, VarDecl> = HashMap::new();
    let declare = |name: &str, order: &mut Vec<String>, decls: &mut HashMap<String, VarDecl>| {
        if !decls.contains_key(name) {
            decls.insert(name.to_string(), VarDecl { kind: VarKind::Continuous, lower: 0.0, upper: f64::INFINITY });
            order.push(name.to_string());
        }
    };

    let bounds = tokens(Section::Bounds);
    let mut bound_rows = Vec::new();
    let mut i = 0;
    while i < bounds.len() {
        // `lo <= x <= up`, `x free`, `x <= up`, `x >= lo`, `x = v`
        if is_number(bounds[i]) {
            let lo = number(bounds[i])?;
            let op = bounds.get(i + 1).and_then(|t| sense_of(t)).ok_or_else(|| LpFormatError::UnexpectedToken(bounds[i].into()))?;
            let name = *bounds.get(i + 2).ok_or_else(|| LpFormatError::Truncated("Bounds".into()))?;
            declare(name, &mut order, &mut decls);
            let (mut l, mut u) = (None, None);
            match op {
                RowSense::Le => l = Some(lo),
                RowSense::Ge => u = Some(lo),
                RowSense::Eq => (l, u) = (Some(lo), Some(lo)),
            }
            i += 3;
            if let Some(op2) = bounds.get(i).and_then(|t| sense_of(t)) {
                let v = number(bounds.get(i + 1).ok_or_else(|| LpFormatError::Truncated("Bounds".into()))?)?;
                match op2 {
                    RowSense::Le => u = Some(v),
                    RowSense::Ge => l = Some(v),
                    RowSense::Eq => return Err(LpFormatError::UnexpectedToken("=".into())),
                }
                i += 2;
            }
            bound_rows.push((name, l, u));
        } else {
            let name = bounds[i];
            declare(name, &mut order, &mut decls);
            match bounds.get(i + 1).copied() {
                Some(t) if t.eq_ignore_ascii_case("free") => {
                    bound_rows.push((name, Some(f64::NEG_INFINITY), Some(f64::INFINITY)));
                    i += 2;
                }
                Some(t) if sense_of(t).is_some() => {
                    let v = number(bounds.get(i + 2).ok_or_else(|| LpFormatError::Truncated("Bounds".into()))?)?;
                    bound_rows.push(match sense_of(t).unwrap() {
                        RowSense::Le => (name, None, Some(v)),
                        RowSense::Ge => (name, Some(v), None),
                        RowSense::Eq => (name, Some(v), Some(v)),
                    });
                    i += 3;
                }
                other => return Err(LpFormatError::UnexpectedToken(other.unwrap_or(name).to_string())),
            }
        }
    }
    for section in [Section::Binary, Section::General] {
        for name in tokens(section) {
            declare(name, &mut order, &mut decls);
            let d = decls.get_mut(name).unwrap();
            if section == Section::Binary {
                *d = VarDecl { kind: VarKind::Binary, lower: 0.0, upper: 1.0 };
            }
        }
    }
    for (name, l, u) in bound_rows {
        let d = decls.get_mut(name).unwrap();
        if d.kind == VarKind::Continuous {
            if let Some(l) = l {
                d.lower = l;
            }
            if let Some(u) = u {
                d.upper = u;
            }
        }
    }

    // Objective.
    let obj_tokens = tokens(Section::Objective);
    let mut pos = 0;
    if obj_tokens.first().is_some_and(|t| t.ends_with(':')) {
        pos = 1;
    }
    let objective = read_linear(&obj_tokens, &mut pos)?;
    if let Some(t) = obj_tokens.get(pos) {
        return Err(LpFormatError::UnexpectedToken(t.to_string()));
    }
    for (name, _) in &objective.terms {
        declare(name, &mut order, &mut decls);
    }

    // Rows.
    let row_tokens = tokens(Section::Rows);
    let mut rows = Vec::new();
    let mut pos = 0;
    while pos < row_tokens.len() {
        let name = match row_tokens[pos].strip_suffix(':') {
            Some(n) => {
                pos += 1;
                n.to_string()
            }
            None => format!("R{}", rows.len() + 1),
        };
        let lhs = read_linear(&row_tokens, &mut pos)?;
        let op = row_tokens.get(pos).and_then(|t| sense_of(t)).ok_or_else(|| LpFormatError::Truncated(name.clone()))?;
        let rhs = number(row_tokens.get(pos + 1).ok_or_else(|| LpFormatError::Truncated(name.clone()))?)?;
        pos += 2;
        for (v, _) in &lhs.terms {
            declare(v, &mut order, &mut decls);
        }
        rows.push((name, lhs, op, rhs));
    }

    let mut model = MilpModel::new(sense);
    for name in &order {
        let d = &decls[name];
        model.add_variable(name.clone(), d.kind, d.lower, d.upper);
    }
    let resolve = |terms: &[(String, f64)], model: &MilpModel| -> Vec<(usize, f64)> {
        terms.iter().map(|(n, c)| (model.var_index(n).expect("declared above"), *c)).collect()
    };
    let obj_terms = resolve(&objective.terms, &model);
    model.set_objective(obj_terms, objective.constant);
    for (name, lhs, op, rhs) in rows {
        let terms = resolve(&lhs.terms, &model);
        model.add_constraint(name, terms, op, rhs - lhs.constant);
    }
    model.set_meta(meta);
    Ok(model)
}

/// Reads an LP file from disk.
pub fn read_lp(path: impl AsRef<Path>) -> io::Result<MilpModel> {
    let text = fs::read_to_string(path)?;
    parse_lp(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

/// Returns the kind recorded in an LP file's metadata, if any.
pub fn kind_of(text: &str) -> Option<ModelKind> {
    text.lines().find(|l| l.starts_with(META_TAG)).and_then(|l| parse_meta(l).ok()).map(|m| m.kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::model::{build_m1, build_m1p, build_m2, build_m2p, CardinalityEncoding};

    #[test]
    fn m2p_triangle_binary_section() {
        let m = build_m2p(&fixtures::complete(3), 3).unwrap();
        let text = write_lp(&m);
        let binary: Vec<&str> = text
            .split("Binary\n")
            .nth(1)
            .unwrap()
            .split("End")
            .next()
            .unwrap()
            .split_whitespace()
            .collect();
        assert_eq!(binary.iter().filter(|t| t.starts_with("x_")).count(), 9);
        assert_eq!(binary.iter().filter(|t| t.starts_with("w_")).count(), 3);
        assert!(text.contains("\n obj: 0\n"));
    }

    #[test]
    fn round_trips_every_builder() {
        let g = fixtures::random(7, 0.5, 3);
        let models = [
            build_m1(&g, 4, 3).unwrap(),
            build_m2(&g, 4, 3).unwrap(),
            build_m2p(&g, 3).unwrap(),
            build_m1p(&g, 3, CardinalityEncoding::BigMFree).unwrap(),
            build_m1p(&g, 3, CardinalityEncoding::Indicator).unwrap(),
        ];
        for m in models {
            let back = parse_lp(&write_lp(&m)).unwrap();
            assert_eq!(back, m, "{}", m.meta().kind);
        }
    }

    #[test]
    fn mixed_model_round_trip() {
        let mut m = MilpModel::new(ObjectiveSense::Minimize);
        let a = m.add_continuous("a", -2.5, 4.0);
        let b = m.add_binary("b");
        let c = m.add_continuous("c", f64::NEG_INFINITY, f64::INFINITY);
        let d = m.add_continuous("d", 0.0, f64::INFINITY);
        m.add_constraint("r1", vec![(a, 1.5), (b, -1.0), (c, 1e-7)], RowSense::Ge, -3.0);
        m.add_constraint("r2", vec![(d, 2.0), (c, -1.0)], RowSense::Eq, 0.0);
        m.set_objective(vec![(a, -1.0), (d, 0.25)], -7.5);
        let text = write_lp(&m);
        assert_eq!(parse_lp(&text).unwrap(), m, "{text}");
    }

    #[test]
    fn long_rows_wrap_and_reassemble() {
        let g = fixtures::complete(8);
        let m = build_m2p(&g, 8).unwrap();
        let text = write_lp(&m);
        assert!(text.lines().all(|l| l.len() <= WRAP + 20));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn reads_foreign_spellings() {
        let text = "\\ hand written\nmaximize\n 3 x + 2 y\nst\n c1: x + y <= 4\n x + 3 y <= 6\nbounds\n x <= 3\nend\n";
        let m = parse_lp(text).unwrap();
        assert_eq!(m.variables().len(), 2);
        assert_eq!(m.constraints()[1].name, "R2");
        assert_eq!(m.variables()[0].upper, 3.0);
        assert_eq!(m.objective().terms, vec![(0, 3.0), (1, 2.0)]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_lp("Subject To\n c: x <= 1\nEnd\n"), Err(LpFormatError::MissingObjective));
        assert!(matches!(parse_lp("Minimize\n obj: x\nSubject To\n c: x <=\nEnd\n"), Err(LpFormatError::Truncated(_))));
    }
}
