//! Dense word vectors in the whitespace-separated text convention used by
//! GloVe: one word per line followed by its `d` coordinates.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// `n` distinct words with one `d`-dimensional vector each, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    vocab: Vec<String>,
    data: Vec<f64>,
    dim: usize,
}

impl EmbeddingMatrix {
    /// Builds a matrix from parallel word and row lists, checking every invariant.
    pub fn new(vocab: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if vocab.len() != rows.len() {
            return Err(Error::InvalidEmbeddings(format!(
                "{} words but {} vectors",
                vocab.len(),
                rows.len()
            )));
        }
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 && !rows.is_empty() {
            return Err(Error::InvalidEmbeddings("vectors have no coordinates".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (word, row) in vocab.iter().zip(&rows) {
            if row.len() != dim {
                return Err(Error::InvalidEmbeddings(format!(
                    "vector for `{word}` has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::InvalidEmbeddings(format!(
                    "vector for `{word}` has non-finite coordinate {x}"
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(vocab, data, dim)
    }

    fn from_flat(vocab: Vec<String>, data: Vec<f64>, dim: usize) -> Result<Self> {
        let mut seen = HashSet::with_capacity(vocab.len());
        for word in &vocab {
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::InvalidEmbeddings(format!(
                    "word {word:?} is empty or contains whitespace"
                )));
            }
            if !seen.insert(word.as_str()) {
                return Err(Error::DuplicateWord(word.clone()));
            }
        }
        if vocab.len() < 2 {
            return Err(Error::TooFewWords {
                needed: 2,
                got: vocab.len(),
            });
        }
        Ok(Self { vocab, data, dim })
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn word(&self, i: usize) -> &str {
        &self.vocab[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Euclidean distance between words `i` and `j`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        l2(self.row(i), self.row(j))
    }
}

#[inline]
pub fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum::<f64>()
        .sqrt()
}

/// Reads at most `max_vocab` words (all of them for `None`) in file order.
pub fn load_embeddings(path: impl AsRef<Path>, max_vocab: Option<usize>) -> Result<EmbeddingMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(BufReader::new(file), max_vocab).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_embeddings<R: BufRead>(reader: R, max_vocab: Option<usize>) -> Result<EmbeddingMatrix> {
    let limit = max_vocab.unwrap_or(usize::MAX);
    let mut vocab = Vec::new();
    let mut data = Vec::new();
    let mut dim = None;
    let mut seen = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        if vocab.len() >= limit {
            break;
        }
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<embeddings>", e))?;
        let mut fields = line.split_whitespace();
        let word = match fields.next() {
            Some(w) => w,
            None => return Err(Error::parse(lineno, "empty line")),
        };
        let start = data.len();
        for field in fields {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::parse(lineno, format!("`{field}` is not a number")))?;
            if !x.is_finite() {
                return Err(Error::parse(lineno, format!("non-finite coordinate `{field}`")));
            }
            data.push(x);
        }
        let got = data.len() - start;
        match dim {
            None if got == 0 => return Err(Error::parse(lineno, "word has no coordinates")),
            None => dim = Some(got),
            Some(d) if d != got => {
                return Err(Error::parse(
                    lineno,
                    format!("expected {} fields, found {}", d + 1, got + 1),
                ))
            }
            Some(_) => {}
        }
        if !seen.insert(word.to_owned()) {
            return Err(Error::DuplicateWord(word.to_owned()));
        }
        vocab.push(word.to_owned());
    }

    EmbeddingMatrix::from_flat(vocab, data, dim.unwrap_or(0))
}
