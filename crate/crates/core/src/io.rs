//! File formats: the JSON pair format, Graphviz DOT, and the enumeration CSV.
//!
//! JSON pair format:
//!
//! ```json
//! {
//!   "vertices": ["v1", "v2"],
//!   "arrows": [{"id": "a1", "source": "v1", "target": "v2"}],
//!   "alpha": {"v1": 1, "v2": 1},
//!   "theta": {"v1": -1, "v2": 1}
//! }
//! ```
//!
//! `theta` is optional. Unknown fields are rejected.

use std::io::{Read, Write};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::affine::AffineRow;
use crate::bounds::BoundsEntry;
use crate::enumerate::ClassificationRow;
use crate::error::{QuiverError, Result};
use crate::quiver::{DimVector, Quiver, QuiverPair, Weight};
use crate::search::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowRecord {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
    pub alpha: IndexMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<IndexMap<String, i64>>,
}

/// A parsed pair file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFile {
    pub pair: QuiverPair,
    pub theta: Option<Weight>,
}

fn per_vertex<T: Copy>(q: &Quiver, map: &IndexMap<String, T>, field: &str) -> Result<Vec<T>> {
    for name in map.keys() {
        q.index_of(name).map_err(|_| QuiverError::Parse(format!("`{field}` names unknown vertex `{name}`")))?;
    }
    q.vertices()
        .iter()
        .map(|v| map.get(v).copied().ok_or_else(|| QuiverError::Parse(format!("`{field}` has no entry for vertex `{v}`"))))
        .collect()
}

impl PairRecord {
    pub fn into_pair(self) -> Result<PairFile> {
        let arrows = self.arrows.into_iter().map(|a| (a.id, a.source, a.target));
        let quiver = Quiver::new(self.vertices, arrows)?;
        let alpha = per_vertex(&quiver, &self.alpha, "alpha")?;
        let theta = match &self.theta {
            Some(t) => Some(Weight(per_vertex(&quiver, t, "theta")?)),
            None => None,
        };
        Ok(PairFile { pair: QuiverPair::new(quiver, DimVector(alpha))?, theta })
    }

    pub fn from_pair(pair: &QuiverPair, theta: Option<&Weight>) -> Self {
        let q = pair.quiver();
        let names = q.vertices();
        PairRecord {
            vertices: names.to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowRecord { id: a.id.clone(), source: names[a.source].clone(), target: names[a.target].clone() })
                .collect(),
            alpha: names.iter().cloned().zip(pair.alpha().0.iter().copied()).collect(),
            theta: theta.map(|t| names.iter().cloned().zip(t.0.iter().copied()).collect()),
        }
    }
}

/// Parses the JSON pair format; errors carry serde's line and column.
pub fn parse_pair_json(text: &str) -> Result<PairFile> {
    let record: PairRecord = serde_json::from_str(text).map_err(|e| QuiverError::Parse(e.to_string()))?;
    record.into_pair()
}

pub fn read_pair_file(path: &std::path::Path) -> Result<PairFile> {
    let text = std::fs::read_to_string(path).map_err(|e| QuiverError::Parse(format!("{}: {e}", path.display())))?;
    parse_pair_json(&text).map_err(|e| match e {
        QuiverError::Parse(m) => QuiverError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Pretty JSON in the pair format, vertices in quiver order.
pub fn pair_to_json(pair: &QuiverPair, theta: Option<&Weight>) -> String {
    serde_json::to_string_pretty(&PairRecord::from_pair(pair, theta)).expect("pair records serialize")
}

/// A vertex-keyed map in vertex order.
pub fn vertex_map<T: Copy>(q: &Quiver, values: &[T]) -> IndexMap<String, T> {
    q.vertices().iter().cloned().zip(values.iter().copied()).collect()
}

fn dot_id(s: &str) -> String {
    let plain = !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Graphviz digraph with vertex labels `name:alpha` or `name:alpha/theta`;
/// parallel arrows become separate edges labelled by arrow id.
pub fn emit_dot(pair: &QuiverPair, theta: Option<&Weight>) -> String {
    let q = pair.quiver();
    let mut out = String::from("digraph {\n");
    for v in 0..q.vertex_count() {
        let mut label = format!("{}:{}", q.name(v), pair.alpha().0[v]);
        if let Some(t) = theta {
            label.push_str(&format!("/{}", t.0[v]));
        }
        out.push_str(&format!("  {} [label={}];\n", dot_id(q.name(v)), dot_id_quoted(&label)));
    }
    for a in q.arrows() {
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            dot_id(q.name(a.source)),
            dot_id(q.name(a.target)),
            dot_id_quoted(&a.id)
        ));
    }
    out.push_str("}\n");
    out
}

fn dot_id_quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub const CSV_HEADER: [&str; 6] = ["canonical_key", "vertices", "arrows", "alpha", "d", "minimal_verdict"];

/// Verdict column: `MinimalUpToBound` or `NotMinimal:` followed by the
/// space-separated witness steps.
pub fn verdict_cell(v: &Verdict) -> String {
    match v {
        Verdict::MinimalUpToBound => "MinimalUpToBound".into(),
        Verdict::NotMinimal { witness } => {
            let steps: Vec<String> = witness.iter().map(|s| s.to_string()).collect();
            format!("NotMinimal:{}", steps.join(" "))
        }
    }
}

fn csv_error(e: csv::Error) -> QuiverError {
    QuiverError::Parse(format!("csv: {e}"))
}

/// Vertices, arrows and alpha cells of a pair.
fn pair_cells(pair: &QuiverPair) -> [String; 3] {
    let q = pair.quiver();
    let arrows: Vec<String> = q.arrows().iter().map(|a| format!("{}->{}", q.name(a.source), q.name(a.target))).collect();
    let alpha: Vec<String> = pair.alpha().0.iter().map(u64::to_string).collect();
    [q.vertices().join(";"), arrows.join(";"), alpha.join(";")]
}

fn write_csv<W: Write, const N: usize>(header: [&str; N], records: impl Iterator<Item = [String; N]>, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for record in records {
        w.write_record(record).map_err(csv_error)?;
    }
    w.flush().map_err(|e| QuiverError::Parse(e.to_string()))
}

/// Writes rows as RFC 4180 CSV. Vertices and alpha are `;`-separated in
/// vertex order, arrows `source->target` separated by `;`.
pub fn write_rows_csv<W: Write>(rows: &[ClassificationRow], out: W) -> Result<()> {
    let records = rows.iter().map(|row| {
        let [vertices, arrows, alpha] = pair_cells(&row.pair);
        [row.canonical_key.to_base64(), vertices, arrows, alpha, row.d.to_string(), verdict_cell(&row.minimal_verdict.verdict)]
    });
    write_csv(CSV_HEADER, records, out)
}

pub const AFFINE_CSV_HEADER: [&str; 5] = ["canonical_key", "vertices", "arrows", "alpha", "d"];

/// Affine rows in the same cell format, without the verdict column.
pub fn write_affine_csv<W: Write>(rows: &[AffineRow], out: W) -> Result<()> {
    let records = rows.iter().map(|row| {
        let [vertices, arrows, alpha] = pair_cells(&row.pair);
        [row.canonical_key.to_base64(), vertices, arrows, alpha, row.d.to_string()]
    });
    write_csv(AFFINE_CSV_HEADER, records, out)
}

fn split(cell: &str) -> Vec<&str> {
    if cell.is_empty() {
        Vec::new()
    } else {
        cell.split(';').collect()
    }
}

/// Reads rows written by [`write_rows_csv`].
pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<BoundsEntry>> {
    let mut r = csv::ReaderBuilder::new().from_reader(input);
    let header = r.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(QuiverError::Parse(format!("unexpected csv header, expected {}", CSV_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = i + 2;
        let bad = |m: &str| QuiverError::Parse(format!("csv line {line}: {m}"));
        let vertices: Vec<String> = split(&record[1]).into_iter().map(str::to_string).collect();
        let arrows = split(&record[2])
            .into_iter()
            .enumerate()
            .map(|(k, a)| {
                let (s, t) = a.split_once("->").ok_or_else(|| bad(&format!("bad arrow `{a}`")))?;
                Ok((format!("a{}", k + 1), s.to_string(), t.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let alpha = split(&record[3])
            .into_iter()
            .map(|x| x.parse::<u64>().map_err(|_| bad(&format!("bad alpha entry `{x}`"))))
            .collect::<Result<Vec<_>>>()?;
        let d = record[4].parse::<i64>().map_err(|_| bad("bad d"))?;
        let verdict = &record[5];
        let minimal = if verdict == "MinimalUpToBound" {
            true
        } else if verdict.starts_with("NotMinimal") {
            false
        } else {
            return Err(bad(&format!("bad verdict `{verdict}`")));
        };
        let pair = QuiverPair::new(Quiver::new(vertices, arrows)?, DimVector(alpha))?;
        out.push(BoundsEntry { canonical_key: record[0].to_string(), pair, d, minimal });
    }
    Ok(out)
}
