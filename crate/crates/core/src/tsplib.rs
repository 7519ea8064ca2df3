//! TSPLIB interchange for external solvers.
//!
//! Solvers in the LKH family only accept integral weights, so distances are
//! scaled by 1000 and rounded down before being written.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

pub const WEIGHT_SCALE: f64 = 1000.0;

/// Integral weight for a Euclidean distance: `floor(1000 * dist)`.
#[inline]
pub fn scaled_weight(dist: f64) -> u64 {
    (WEIGHT_SCALE * dist).floor() as u64
}

/// Writes an explicit symmetric instance in `UPPER_ROW` layout.
pub fn export_tsplib(emb: &EmbeddingMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("wordtour")
        .to_owned();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_tsplib(emb, &name, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_tsplib<W: Write>(emb: &EmbeddingMatrix, name: &str, out: &mut W) -> std::io::Result<()> {
    let n = emb.len();
    if n < 3 {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            format!("TSPLIB export needs at least 3 nodes, got {n}"),
        ));
    }
    writeln!(out, "NAME: {name}")?;
    writeln!(out, "TYPE: TSP")?;
    writeln!(out, "COMMENT: {n} words, d = {}, weights = floor(1000 * L2)", emb.dim())?;
    writeln!(out, "DIMENSION: {n}")?;
    writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT")?;
    writeln!(out, "EDGE_WEIGHT_FORMAT: UPPER_ROW")?;
    writeln!(out, "EDGE_WEIGHT_SECTION")?;
    let mut line = String::new();
    for i in 0..n - 1 {
        line.clear();
        for j in i + 1..n {
            if j > i + 1 {
                line.push(' ');
            }
            line.push_str(&scaled_weight(emb.dist(i, j)).to_string());
        }
        writeln!(out, "{line}")?;
    }
    writeln!(out, "EOF")
}

/// A parsed explicit instance with its weights expanded to a full matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsplibInstance {
    pub name: String,
    pub dimension: usize,
    weights: Vec<u64>,
}

impl TsplibInstance {
    pub fn weight(&self, i: usize, j: usize) -> u64 {
        self.weights[i * self.dimension + j]
    }
}

pub fn read_tsplib(path: impl AsRef<Path>) -> Result<TsplibInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tsplib(&text)
}

/// Parses `TYPE: TSP` instances with `EDGE_WEIGHT_TYPE: EXPLICIT` in any of the
/// row-oriented matrix layouts.
pub fn parse_tsplib(text: &str) -> Result<TsplibInstance> {
    let mut name = String::new();
    let mut dimension = None;
    let mut format = None;
    let mut lines = text.lines();
    let mut numbers = Vec::new();

    for line in lines.by_ref() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("EDGE_WEIGHT_SECTION") {
            break;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Tsplib(format!("unexpected line `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "NAME" => name = value.to_owned(),
            "TYPE" if value != "TSP" => return Err(Error::Tsplib(format!("unsupported TYPE {value}"))),
            "EDGE_WEIGHT_TYPE" if value != "EXPLICIT" => {
                return Err(Error::Tsplib(format!("unsupported EDGE_WEIGHT_TYPE {value}")))
            }
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::Tsplib(format!("bad DIMENSION `{value}`")))?,
                )
            }
            "EDGE_WEIGHT_FORMAT" => format = Some(value.to_owned()),
            _ => {}
        }
    }
    for line in lines {
        let line = line.trim();
        if line == "EOF" {
            break;
        }
        for tok in line.split_whitespace() {
            numbers.push(
                tok.parse::<u64>()
                    .map_err(|_| Error::Tsplib(format!("bad weight `{tok}`")))?,
            );
        }
    }

    let n = dimension.ok_or_else(|| Error::Tsplib("missing DIMENSION".into()))?;
    let format = format.ok_or_else(|| Error::Tsplib("missing EDGE_WEIGHT_FORMAT".into()))?;
    // (row, col) pairs in file order for each layout.
    let cells: Vec<(usize, usize)> = match format.as_str() {
        "FULL_MATRIX" => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        "UPPER_ROW" => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        "UPPER_DIAG_ROW" => (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect(),
        "LOWER_ROW" => (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect(),
        "LOWER_DIAG_ROW" => (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect(),
        other => return Err(Error::Tsplib(format!("unsupported EDGE_WEIGHT_FORMAT {other}"))),
    };
    if cells.len() != numbers.len() {
        return Err(Error::Tsplib(format!(
            "expected {} weights, found {}",
            cells.len(),
            numbers.len()
        )));
    }
    let mut weights = vec![0; n * n];
    for (&(i, j), &w) in cells.iter().zip(&numbers) {
        weights[i * n + j] = w;
        weights[j * n + i] = w;
    }
    Ok(TsplibInstance {
        name,
        dimension: n,
        weights,
    })
}
