//! Readers and writers for edge lists, similarity matrices and weight files.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use blits::objectives::{CutGraph, SimilarityMatrix};

use crate::error::{CliError, Result};

/// A loaded edge list: the graph over dense ids plus each id's original label.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: CutGraph,
    pub labels: Vec<String>,
}

impl EdgeList {
    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn data_lines<R: Read>(reader: R, path: &Path) -> Result<Vec<(u64, String)>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            out.push((idx as u64 + 1, trimmed.to_string()));
        }
    }
    Ok(out)
}

/// Reads `src<TAB>dst[<TAB>weight]` lines. Lines starting with `#` are
/// skipped, labels are mapped to dense ids in order of first appearance, and
/// the weight defaults to 1. Self-loops never cross a cut and are dropped.
pub fn load_edge_list(path: &Path) -> Result<EdgeList> {
    read_edge_list(open(path)?, path)
}

pub fn read_edge_list<R: Read>(reader: R, path: &Path) -> Result<EdgeList> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str| -> usize {
        *ids.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (line, text) in data_lines(reader, path)? {
        let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_error(
                path,
                line,
                format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(parse_error(path, line, "empty node label"));
        }
        let weight = match fields.get(2) {
            None | Some(&"") => 1.0,
            Some(w) => w
                .parse::<f64>()
                .map_err(|_| parse_error(path, line, format!("weight {w:?} is not a number")))?,
        };
        if !weight.is_finite() {
            return Err(parse_error(path, line, format!("weight {weight} is not finite")));
        }
        if weight < 0.0 {
            return Err(CliError::Contract {
                path: path.to_path_buf(),
                line,
                message: format!("negative edge weight {weight}"),
            });
        }
        let u = intern(fields[0]);
        let v = intern(fields[1]);
        if u != v {
            edges.push((u, v, weight));
        }
    }
    let graph = CutGraph::new(labels.len(), edges, true)?;
    Ok(EdgeList { graph, labels })
}

/// Writes `graph` in the format [`load_edge_list`] reads. Weights use the
/// shortest representation that parses back to the same `f64`.
pub fn write_edge_list<W: Write>(graph: &CutGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# nodes {} edges {}", graph.n(), graph.edge_count())?;
    for &(u, v, w) in graph.edges() {
        writeln!(out, "{u}\t{v}\t{w}")?;
    }
    out.flush()
}

/// How the rows of a matrix file are turned into similarities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixKind {
    /// The file already holds the `n x n` similarities.
    #[default]
    Similarity,
    /// One ratings vector per item; similarity is the raw inner product.
    Ratings,
    /// One pixel vector per item; similarity is cosine.
    Pixels,
}

impl MatrixKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "similarity" => Some(Self::Similarity),
            "ratings" => Some(Self::Ratings),
            "pixels" => Some(Self::Pixels),
            _ => None,
        }
    }
}

fn parse_numbers(text: &str, line: u64, path: &Path) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|field| {
            field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_error(path, line, format!("{field:?} is not a finite number")))
        })
        .collect()
}

/// Comma-separated numeric rows, all of the same length.
fn read_rows<R: Read>(reader: R, path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, text) in data_lines(reader, path)? {
        let row = parse_numbers(&text, line, path)?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_error(
                    path,
                    line,
                    format!("ragged row: {} values, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn load_similarity_matrix(path: &Path, kind: MatrixKind) -> Result<SimilarityMatrix> {
    read_similarity_matrix(open(path)?, path, kind)
}

pub fn read_similarity_matrix<R: Read>(reader: R, path: &Path, kind: MatrixKind) -> Result<SimilarityMatrix> {
    let rows = read_rows(reader, path)?;
    if rows.is_empty() {
        return Err(parse_error(path, 0, "no rows"));
    }
    let matrix = match kind {
        MatrixKind::Similarity => {
            if rows[0].len() != rows.len() {
                return Err(parse_error(
                    path,
                    0,
                    format!("{} rows of {} values is not a square matrix", rows.len(), rows[0].len()),
                ));
            }
            SimilarityMatrix::from_rows(rows)?
        }
        MatrixKind::Ratings => SimilarityMatrix::inner_products(&rows)?,
        MatrixKind::Pixels => SimilarityMatrix::cosine(&rows)?,
    };
    Ok(matrix)
}

/// All numbers in a comma-separated file, row after row.
pub fn load_weights(path: &Path) -> Result<Vec<f64>> {
    let mut weights = Vec::new();
    for (line, text) in data_lines(open(path)?, path)? {
        weights.extend(parse_numbers(&text, line, path)?);
    }
    Ok(weights)
}
