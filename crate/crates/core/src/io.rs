//! Matrix documents (JSON and plain-text grids) and DOT export of quivers.
//!
//! JSON form:
//!
//! ```json
//! {"n": 2, "b": [[0, -2], [3, 0]], "attached": [[1, 0]], "symmetrizer": [3, 2]}
//! ```
//!
//! `attached` and `symmetrizer` are optional. Grid form has one matrix row
//! per line (or rows separated by `/`), an optional `---` line followed by
//! attached rows, an optional `S: s1 s2 ..` line, and `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::coherence::ColumnSign;
use crate::error::{Error, Result};
use crate::exchange::{ExchangeMatrix, Symmetrizer};
use crate::matrix::{Entry, IntMatrix};
use crate::mutation::ExtendedMatrix;
use crate::quiver::QuiverGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDocument {
    pub exchange: ExchangeMatrix,
    pub attached: Option<IntMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: usize,
    b: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attached: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetrizer: Option<Vec<Entry>>,
}

impl MatrixDocument {
    pub fn new(exchange: ExchangeMatrix) -> Self {
        Self {
            exchange,
            attached: None,
        }
    }

    pub fn n(&self) -> usize {
        self.exchange.n()
    }

    /// `B` over the attached rows, or the framed matrix when none are given.
    pub fn extended(&self) -> ExtendedMatrix {
        match &self.attached {
            Some(rows) => ExtendedMatrix::new(&self.exchange, rows)
                .expect("attached rows validated at construction"),
            None => crate::mutation::frame(&self.exchange),
        }
    }

    fn from_raw(raw: RawDocument) -> Result<Self> {
        if raw.b.len() != raw.n {
            return Err(Error::ShapeMismatch(format!(
                "n is {} but b has {} rows",
                raw.n,
                raw.b.len()
            )));
        }
        let b = IntMatrix::from_rows_with_cols(raw.b, raw.n)?;
        let attached = raw
            .attached
            .map(|rows| IntMatrix::from_rows_with_cols(rows, raw.n))
            .transpose()?;
        let exchange = match raw.symmetrizer {
            Some(s) => ExchangeMatrix::with_symmetrizer(b, Symmetrizer::new(s)?)?,
            None => ExchangeMatrix::new(b)?,
        };
        Ok(Self { exchange, attached })
    }

    fn to_raw(&self) -> RawDocument {
        RawDocument {
            n: self.n(),
            b: self.exchange.matrix().to_rows(),
            attached: self.attached.as_ref().map(IntMatrix::to_rows),
            symmetrizer: Some(self.exchange.symmetrizer().entries().to_vec()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("document serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("document serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = self.exchange.matrix().to_string();
        if let Some(rows) = &self.attached {
            out.push_str("---\n");
            out.push_str(&rows.to_string());
        }
        let s: Vec<String> = self
            .exchange
            .symmetrizer()
            .entries()
            .iter()
            .map(Entry::to_string)
            .collect();
        let _ = writeln!(out, "S: {}", s.join(" "));
        out
    }
}

impl Serialize for MatrixDocument {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixDocument {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDocument::deserialize(d)?;
        MatrixDocument::from_raw(raw).map_err(serde::de::Error::custom)
    }
}

/// Parses a JSON document or a plain-text grid.
pub fn parse_matrix(text: &str) -> Result<MatrixDocument> {
    if text.trim_start().starts_with('{') {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        MatrixDocument::from_raw(raw)
    } else {
        parse_grid_document(text)
    }
}

struct GridLine {
    line: usize,
    column: usize,
    values: Vec<Entry>,
}

fn parse_numbers(text: &str, line: usize, offset: usize) -> Result<Vec<Entry>> {
    let mut values = Vec::new();
    let mut pos = 0;
    for token in text.split(|c: char| c.is_whitespace() || c == ',') {
        if !token.is_empty() {
            let column = offset + text[pos..].find(token).map_or(pos, |p| p + pos) + 1;
            values.push(token.parse::<Entry>().map_err(|e| Error::Parse {
                line,
                column,
                message: format!("bad integer {token:?}: {e}"),
            })?);
        }
        pos += token.len() + 1;
    }
    Ok(values)
}

fn grid_rows(lines: &[GridLine], cols: usize) -> Result<Vec<Vec<Entry>>> {
    lines
        .iter()
        .map(|l| {
            if l.values.len() == cols {
                Ok(l.values.clone())
            } else {
                Err(Error::Parse {
                    line: l.line,
                    column: l.column,
                    message: format!("row has {} entries, expected {}", l.values.len(), cols),
                })
            }
        })
        .collect()
}

fn parse_grid_document(text: &str) -> Result<MatrixDocument> {
    let mut principal: Vec<GridLine> = Vec::new();
    let mut attached: Option<Vec<GridLine>> = None;
    let mut symmetrizer: Option<Vec<Entry>> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.chars().all(|c| c == '-') && trimmed.len() >= 3 {
            if attached.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: "second separator line".into(),
                });
            }
            attached = Some(Vec::new());
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("S:") {
            let offset = content.find("S:").unwrap() + 2;
            symmetrizer = Some(parse_numbers(rest, line_no, offset)?);
            continue;
        }
        let mut offset = 0;
        for segment in content.split('/') {
            if !segment.trim().is_empty() {
                let values = parse_numbers(segment, line_no, offset)?;
                let column = offset + segment.len() - segment.trim_start().len() + 1;
                let target = attached.as_mut().unwrap_or(&mut principal);
                target.push(GridLine {
                    line: line_no,
                    column,
                    values,
                });
            }
            offset += segment.len() + 1;
        }
    }

    let n = principal.len();
    let b = grid_rows(&principal, n)?;
    let attached = attached.map(|rows| grid_rows(&rows, n)).transpose()?;
    MatrixDocument::from_raw(RawDocument {
        n,
        b,
        attached,
        symmetrizer,
    })
}

/// Parses a bare integer matrix (JSON array of rows, or a grid).
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix> {
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<Entry>> = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        return IntMatrix::from_rows(rows);
    }
    let mut lines = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let content = raw_line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for segment in content.split('/') {
            if !segment.trim().is_empty() {
                lines.push(GridLine {
                    line: idx + 1,
                    column: offset + segment.len() - segment.trim_start().len() + 1,
                    values: parse_numbers(segment, idx + 1, offset)?,
                });
            }
            offset += segment.len() + 1;
        }
    }
    let cols = lines.first().map_or(0, |l| l.values.len());
    IntMatrix::from_rows_with_cols(grid_rows(&lines, cols)?, cols)
}

/// Renders the quiver as a DOT digraph. Arrows of weight greater than one
/// carry a label; vertices are filled green or red when colors are given.
pub fn emit_dot(q: &QuiverGraph, colors: Option<&BTreeMap<usize, ColumnSign>>) -> String {
    let mut out = String::from("digraph quiver {\n");
    for v in 1..=q.vertex_count() {
        match colors.and_then(|c| c.get(&v)) {
            Some(ColumnSign::Green) => {
                let _ = writeln!(out, "  {v} [style=filled, fillcolor=green];");
            }
            Some(ColumnSign::Red) => {
                let _ = writeln!(out, "  {v} [style=filled, fillcolor=red];");
            }
            _ => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for a in q.arrows() {
        if a.weight > 1 {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                a.source, a.target, a.weight
            );
        } else {
            let _ = writeln!(out, "  {} -> {};", a.source, a.target);
        }
    }
    out.push_str("}\n");
    out
}
