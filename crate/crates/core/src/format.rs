//! Line-oriented text format for dg quivers, quivers with potential and
//! arrow correspondences.
//!
//! ```text
//! dgquiver
//! vertices: 1 2 3
//! arrow phi : 1 -> 2 deg 0
//! arrow psi : 2 -> 3 deg 0
//! arrow omega : 1 -> 3 deg 1
//! diff omega = psi.phi
//! ```
//!
//! A `qp` file declares arrows and `potential: POLY`. Higher quivers with
//! potential add `dim D` and one `op NAME = NAME sign ±1` line per arrow.
//! Paths are written with `.`, the left factor applied last. `#` starts a
//! comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Arrow, ArrowName, DgQuiver, Element, Path, Quiver, Scalar, VertexId};
use crate::compare::ArrowCorrespondence;
use crate::error::{Error, Result};
use crate::potential::{OpPairing, Potential, QuiverWithPotential};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    DgQuiver(DgQuiver),
    Qp(QuiverWithPotential),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject dg quivers whose differential does not square to zero.
    pub check_d_squared: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { check_d_squared: true }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim_end();
        (!l.trim().is_empty()).then_some((k + 1, l))
    })
}

fn column_of(line: &str, part: &str) -> usize {
    // `part` is always a subslice of `line`
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn parse_int<T: std::str::FromStr>(line_no: usize, line: &str, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| {
        syntax(
            line_no,
            column_of(line, token),
            format!("expected {what}, found `{token}`"),
        )
    })
}

#[derive(Default)]
struct Raw<'a> {
    kind: Option<&'a str>,
    vertices: Option<(usize, u32)>,
    dim: Option<(usize, i64)>,
    arrows: Vec<(usize, Arrow)>,
    ops: Vec<(usize, ArrowName, ArrowName, i8)>,
    diffs: Vec<(usize, &'a str, ArrowName, &'a str)>,
    potential: Option<(usize, &'a str, &'a str)>,
}

fn read_raw(text: &str) -> Result<Raw<'_>> {
    let mut raw = Raw::default();
    for (n, line) in lines(text) {
        let trimmed = line.trim_start();
        if raw.kind.is_none() {
            match trimmed.trim() {
                k @ ("dgquiver" | "qp") => {
                    raw.kind = Some(k);
                    continue;
                }
                other => {
                    return Err(syntax(
                        n,
                        column_of(line, trimmed),
                        format!("expected `dgquiver` or `qp`, found `{other}`"),
                    ))
                }
            }
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let keyword = tokens[0];
        match keyword {
            "vertices:" => {
                if raw.vertices.is_some() {
                    return Err(semantic(n, "vertices declared twice"));
                }
                let mut ids = Vec::new();
                for t in &tokens[1..] {
                    ids.push(parse_int::<u32>(n, line, t, "a vertex number")?);
                }
                if ids.iter().enumerate().any(|(k, &v)| v as usize != k + 1) {
                    return Err(semantic(n, "vertices must be listed as 1 2 ... n"));
                }
                raw.vertices = Some((n, ids.len() as u32));
            }
            "dim" => {
                if tokens.len() != 2 {
                    return Err(syntax(n, column_of(line, keyword), "expected `dim D`"));
                }
                raw.dim = Some((n, parse_int(n, line, tokens[1], "a dimension")?));
            }
            "arrow" => {
                // arrow NAME : SRC -> TGT deg N
                if tokens.len() != 8 || tokens[2] != ":" || tokens[4] != "->" || tokens[6] != "deg" {
                    return Err(syntax(
                        n,
                        column_of(line, keyword),
                        "expected `arrow NAME : SRC -> TGT deg N`",
                    ));
                }
                let source = parse_int(n, line, tokens[3], "a vertex number")?;
                let target = parse_int(n, line, tokens[5], "a vertex number")?;
                let degree = parse_int(n, line, tokens[7], "a degree")?;
                raw.arrows.push((n, Arrow::new(tokens[1], source, target, degree)));
            }
            "op" => {
                // op NAME = NAME sign ±1
                if tokens.len() != 6 || tokens[2] != "=" || tokens[4] != "sign" {
                    return Err(syntax(n, column_of(line, keyword), "expected `op NAME = NAME sign ±1`"));
                }
                let s = match tokens[5] {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    other => {
                        return Err(syntax(
                            n,
                            column_of(line, tokens[5]),
                            format!("sign must be +1 or -1, found `{other}`"),
                        ))
                    }
                };
                raw.ops.push((n, tokens[1].into(), tokens[3].into(), s));
            }
            "diff" => {
                if tokens.len() < 4 || tokens[2] != "=" {
                    return Err(syntax(n, column_of(line, keyword), "expected `diff NAME = POLY`"));
                }
                let rest = &line[column_of(line, tokens[2])..];
                raw.diffs.push((n, line, tokens[1].into(), rest));
            }
            "potential:" => {
                if raw.potential.is_some() {
                    return Err(semantic(n, "potential declared twice"));
                }
                let rest = &line[column_of(line, keyword) - 1 + keyword.len()..];
                raw.potential = Some((n, line, rest));
            }
            other => {
                return Err(syntax(
                    n,
                    column_of(line, other),
                    format!("unknown declaration `{other}`"),
                ))
            }
        }
    }
    if raw.kind.is_none() {
        return Err(syntax(1, 1, "empty document"));
    }
    Ok(raw)
}

/// Parses a polynomial `POLY := term (('+'|'-') term)*`, `term := [RATIONAL] path`.
pub fn parse_element(quiver: &Quiver, text: &str) -> Result<Element> {
    parse_poly(quiver, 1, text, text)
}

fn parse_poly(quiver: &Quiver, line_no: usize, line: &str, text: &str) -> Result<Element> {
    let mut p = PolyParser {
        quiver,
        line_no,
        line,
        rest: text,
    };
    p.poly()
}

struct PolyParser<'a> {
    quiver: &'a Quiver,
    line_no: usize,
    line: &'a str,
    rest: &'a str,
}

impl<'a> PolyParser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        syntax(self.line_no, column_of(self.line, self.rest), message)
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        match self.rest.strip_prefix(c) {
            Some(r) => {
                self.rest = r;
                true
            }
            None => false,
        }
    }

    fn poly(&mut self) -> Result<Element> {
        let mut out = Element::zero();
        self.skip_ws();
        if self.rest.is_empty() {
            return Err(self.error("expected a polynomial"));
        }
        let mut negative = self.eat('-');
        loop {
            let (c, p) = self.term()?;
            if let Some(p) = p {
                out.add_term(p, if negative { -c } else { c });
            }
            self.skip_ws();
            if self.rest.is_empty() {
                return Ok(out);
            }
            negative = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Err(self.error("expected `+`, `-` or end of line"));
            };
        }
    }

    /// A coefficient and a path; `None` for the literal `0`.
    fn term(&mut self) -> Result<(Scalar, Option<Path>)> {
        self.skip_ws();
        let digits = self.rest.len() - self.rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        let mut coeff = Scalar::from_integer(BigInt::from(1));
        if digits > 0 {
            let numer: BigInt = self.rest[..digits].parse().expect("digits");
            self.rest = &self.rest[digits..];
            let mut denom = BigInt::from(1);
            if let Some(r) = self.rest.strip_prefix('/') {
                self.rest = r;
                let dd = r.len() - r.trim_start_matches(|c: char| c.is_ascii_digit()).len();
                if dd == 0 {
                    return Err(self.error("expected a denominator"));
                }
                denom = r[..dd].parse().expect("digits");
                self.rest = &r[dd..];
                if denom.is_zero() {
                    return Err(self.error("zero denominator"));
                }
            }
            coeff = Scalar::new(numer, denom);
            self.skip_ws();
            if coeff.is_zero() && (self.rest.is_empty() || self.rest.starts_with(['+', '-'])) {
                return Ok((coeff, None));
            }
        }
        let mut names = vec![self.name()?];
        while self.rest.starts_with('.') {
            self.rest = &self.rest[1..];
            names.push(self.name()?);
        }
        let path = self.path(names)?;
        Ok((coeff, Some(path)))
    }

    fn path(&self, names: Vec<&str>) -> Result<Path> {
        if let [single] = names[..] {
            if !self.quiver.contains(&single.into()) {
                if let Some(v) = single.strip_prefix("e_").and_then(|v| v.parse::<u32>().ok()) {
                    let v = VertexId(v);
                    if !self.quiver.has_vertex(v) {
                        return Err(semantic(self.line_no, format!("unknown vertex {v}")));
                    }
                    return Ok(Path::stationary(v));
                }
            }
        }
        for n in &names {
            if !self.quiver.contains(&(*n).into()) {
                return Err(semantic(self.line_no, format!("unknown arrow `{n}`")));
            }
        }
        Path::from_names(self.quiver, names.iter().copied())
            .map_err(|e| semantic(self.line_no, format!("{} does not compose: {e}", names.join("."))))
    }

    /// A plain name, or a parenthesised structural name, with suffixes such as `*` or `^op`.
    fn name(&mut self) -> Result<&'a str> {
        let start = self.rest;
        let mut depth = 0usize;
        let mut end = 0;
        for (k, c) in start.char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                ')' => break,
                _ if depth > 0 => {}
                c if c.is_alphanumeric() || matches!(c, '_' | '*' | '^' | '\'') => {}
                _ => break,
            }
            end = k + c.len_utf8();
        }
        if depth > 0 {
            return Err(self.error("unbalanced parenthesis in arrow name"));
        }
        if end == 0 {
            return Err(self.error("expected an arrow name"));
        }
        self.rest = &start[end..];
        Ok(&start[..end])
    }
}

/// Parses a `dgquiver` or `qp` document.
pub fn parse(text: &str, options: ParseOptions) -> Result<Document> {
    let raw = read_raw(text)?;
    let Some((_, n)) = raw.vertices else {
        return Err(semantic(1, "missing `vertices:` declaration"));
    };
    let mut quiver = Quiver::new(n);
    for (line, a) in &raw.arrows {
        quiver
            .add_arrow(a.clone())
            .map_err(|e| semantic(*line, e.to_string()))?;
    }
    if raw.kind == Some("dgquiver") {
        if let Some((line, _)) = raw.dim {
            return Err(semantic(line, "`dim` belongs in qp files"));
        }
        if let Some((line, ..)) = raw.ops.first() {
            return Err(semantic(*line, "`op` belongs in qp files"));
        }
        if let Some((line, ..)) = raw.potential {
            return Err(semantic(line, "`potential` belongs in qp files"));
        }
        let mut diff = BTreeMap::new();
        let mut line_of = BTreeMap::new();
        for (line, text, name, poly) in &raw.diffs {
            if !quiver.contains(name) {
                return Err(semantic(*line, format!("unknown arrow `{name}`")));
            }
            if line_of.insert(name.clone(), *line).is_some() {
                return Err(semantic(*line, format!("differential of `{name}` declared twice")));
            }
            diff.insert(name.clone(), parse_poly(&quiver, *line, text, poly)?);
        }
        let built = if options.check_d_squared {
            DgQuiver::new_checked(quiver, diff)
        } else {
            DgQuiver::new(quiver, diff)
        };
        return built.map(Document::DgQuiver).map_err(|e| {
            let line = match &e {
                Error::DegreeMismatch { arrow, .. }
                | Error::EndpointMismatch { arrow, .. }
                | Error::DSquaredNonzero { arrow, .. } => line_of.get(arrow).copied().unwrap_or(1),
                _ => 1,
            };
            semantic(line, e.to_string())
        });
    }

    if let Some((line, ..)) = raw.diffs.first() {
        return Err(semantic(*line, "`diff` belongs in dgquiver files"));
    }
    let potential = match raw.potential {
        Some((line, text, poly)) => {
            let x = parse_poly(&quiver, line, text, poly)?;
            Potential::from_element(&quiver, &x).map_err(|e| semantic(line, e.to_string()))?
        }
        None => Potential::zero(),
    };
    let potential_line = raw.potential.map_or(1, |p| p.0);
    let higher = raw.dim.is_some() || !raw.ops.is_empty();
    if !higher {
        return QuiverWithPotential::classical(quiver, potential)
            .map(Document::Qp)
            .map_err(|e| semantic(potential_line, e.to_string()));
    }
    let (dim_line, d) = raw.dim.unwrap_or((1, 3));
    let mut map = BTreeMap::new();
    for (line, a, b, s) in &raw.ops {
        if map.insert(a.clone(), (b.clone(), *s)).is_some() {
            return Err(semantic(*line, format!("opposite of `{a}` declared twice")));
        }
    }
    let pairing = OpPairing::new(&quiver, d, map).map_err(|e| semantic(dim_line, e.to_string()))?;
    QuiverWithPotential::higher(quiver, potential, pairing)
        .map(Document::Qp)
        .map_err(|e| semantic(potential_line, e.to_string()))
}

pub fn parse_dg_quiver(text: &str, options: ParseOptions) -> Result<DgQuiver> {
    match parse(text, options)? {
        Document::DgQuiver(dg) => Ok(dg),
        Document::Qp(_) => Err(semantic(1, "expected a dgquiver document, found qp")),
    }
}

pub fn parse_qp(text: &str) -> Result<QuiverWithPotential> {
    match parse(text, ParseOptions::default())? {
        Document::Qp(qp) => Ok(qp),
        Document::DgQuiver(_) => Err(semantic(1, "expected a qp document, found dgquiver")),
    }
}

/// Parses `LEFT -> RIGHT scale R` lines.
pub fn parse_map(text: &str) -> Result<ArrowCorrespondence> {
    let mut map = ArrowCorrespondence::default();
    let mut seen = BTreeMap::new();
    for (n, line) in lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 5 || tokens[1] != "->" || tokens[3] != "scale" {
            return Err(syntax(
                n,
                column_of(line, tokens[0]),
                "expected `LEFT -> RIGHT scale R`",
            ));
        }
        let scale: Scalar = tokens[4].parse().map_err(|_| {
            syntax(
                n,
                column_of(line, tokens[4]),
                format!("expected a rational, found `{}`", tokens[4]),
            )
        })?;
        if seen.insert(tokens[0], n).is_some() {
            return Err(semantic(n, format!("`{}` is mapped twice", tokens[0])));
        }
        map.insert(tokens[0].into(), tokens[2].into(), scale);
    }
    Ok(map)
}

/// Arrows in output order: degree, then name.
fn sorted_arrows(quiver: &Quiver) -> Vec<&Arrow> {
    let mut arrows: Vec<&Arrow> = quiver.arrows().collect();
    arrows.sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
    arrows
}

fn header(out: &mut String, kind: &str, quiver: &Quiver) {
    out.push_str(kind);
    out.push('\n');
    let vertices: Vec<String> = quiver.vertices().map(|v| v.0.to_string()).collect();
    writeln!(out, "vertices: {}", vertices.join(" ")).unwrap();
}

fn arrow_lines(out: &mut String, quiver: &Quiver) {
    for a in sorted_arrows(quiver) {
        writeln!(
            out,
            "arrow {} : {} -> {} deg {}",
            a.name, a.source.0, a.target.0, a.degree
        )
        .unwrap();
    }
}

pub fn serialize_dg_quiver(dg: &DgQuiver) -> String {
    let q = dg.quiver();
    let mut out = String::new();
    header(&mut out, "dgquiver", q);
    arrow_lines(&mut out, q);
    for a in sorted_arrows(q) {
        let d = dg.d(&a.name);
        if !d.is_zero() {
            writeln!(out, "diff {} = {}", a.name, d.render(q)).unwrap();
        }
    }
    out
}

pub fn serialize_qp(qp: &QuiverWithPotential) -> String {
    let q = qp.quiver();
    let mut out = String::new();
    header(&mut out, "qp", q);
    if let Some(p) = qp.pairing() {
        writeln!(out, "dim {}", p.dimension()).unwrap();
    }
    arrow_lines(&mut out, q);
    if let Some(p) = qp.pairing() {
        for a in sorted_arrows(q) {
            let (b, s) = p.op(&a.name).expect("total pairing");
            writeln!(out, "op {} = {} sign {}", a.name, b, if s > 0 { "+1" } else { "-1" }).unwrap();
        }
    }
    if !qp.potential().is_zero() {
        writeln!(out, "potential: {}", qp.potential().render(q)).unwrap();
    }
    out
}

pub fn serialize(doc: &Document) -> String {
    match doc {
        Document::DgQuiver(dg) => serialize_dg_quiver(dg),
        Document::Qp(qp) => serialize_qp(qp),
    }
}

pub fn serialize_map(map: &ArrowCorrespondence) -> String {
    let mut out = String::new();
    for (a, b, s) in map.entries() {
        writeln!(out, "{a} -> {b} scale {s}").unwrap();
    }
    out
}
