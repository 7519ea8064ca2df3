use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

/// A labeled multiset of in-vocabulary word indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub label: usize,
    pub tokens: Vec<usize>,
}

/// Interns class names; shared between training and test corpora so ids agree.
#[derive(Debug, Clone, Default)]
pub struct Labels {
    names: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Word-to-index lookup for a tour's vocabulary.
#[derive(Debug, Clone)]
pub struct WordIndex(HashMap<String, usize>);

impl WordIndex {
    pub fn new(emb: &EmbeddingMatrix) -> Self {
        Self::from_words(emb.vocab())
    }

    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        Self(
            words
                .iter()
                .enumerate()
                .map(|(i, w)| (w.as_ref().to_owned(), i))
                .collect(),
        )
    }

    pub fn get(&self, word: &str) -> Option<usize> {
        self.0.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub lines: usize,
    pub tokens: usize,
    pub oov_tokens: usize,
    /// Documents left with no tokens after dropping out-of-vocabulary words.
    pub rejected: usize,
}

impl IngestStats {
    pub fn oov_rate(&self) -> f64 {
        if self.tokens == 0 {
            0.0
        } else {
            self.oov_tokens as f64 / self.tokens as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub stats: IngestStats,
}

pub fn load_corpus(path: impl AsRef<Path>, words: &WordIndex, labels: &mut Labels) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let corpus = read_corpus(BufReader::new(file), words, labels).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    log::info!(
        "{}: {} documents, {:.2}% of tokens out of vocabulary, {} empty documents dropped",
        path.display(),
        corpus.documents.len(),
        100.0 * corpus.stats.oov_rate(),
        corpus.stats.rejected
    );
    Ok(corpus)
}

/// Parses `label<TAB>token token ...` lines. Blank lines are skipped; document
/// ids are their 1-based line numbers.
pub fn read_corpus<R: BufRead>(reader: R, words: &WordIndex, labels: &mut Labels) -> Result<Corpus> {
    let mut documents = Vec::new();
    let mut stats = IngestStats::default();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        stats.lines += 1;
        let (label, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(lineno, "expected `label<TAB>tokens`"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::parse(lineno, "empty label"));
        }
        let mut tokens = Vec::new();
        for tok in text.split_whitespace() {
            stats.tokens += 1;
            match words.get(tok) {
                Some(i) => tokens.push(i),
                None => stats.oov_tokens += 1,
            }
        }
        if tokens.is_empty() {
            stats.rejected += 1;
            continue;
        }
        documents.push(Document {
            id: lineno.to_string(),
            label: labels.intern(label),
            tokens,
        });
    }
    Ok(Corpus { documents, stats })
}
