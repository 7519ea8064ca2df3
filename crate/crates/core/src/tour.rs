//! Cyclic word orderings and their word-per-line file format.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

/// A permutation of `0..n` read as a cycle: the last word is adjacent to the first.
///
/// Any permutation is accepted. Constructive routines return the canonical
/// representative (see [`Tour::canonical`]) so equal cycles compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::InvalidTour(format!("index {v} out of range for {n} nodes")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTour(format!("index {v} repeated")));
            }
        }
        Ok(Self { order })
    }

    /// The identity ordering `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Self { order }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    /// Inverse permutation: `positions()[word]` is the word's place in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }

    /// Rotates so the smallest index leads and reflects so that
    /// `order[1] < order[n-1]`.
    pub fn canonical(&self) -> Tour {
        let n = self.order.len();
        if n <= 2 {
            let mut order = self.order.clone();
            order.sort_unstable();
            return Tour { order };
        }
        let start = self.order.iter().position(|&v| v == 0).expect("permutation contains 0");
        let at = |k: usize| self.order[(start + k) % n];
        let order = if at(1) < at(n - 1) {
            (0..n).map(at).collect()
        } else {
            std::iter::once(at(0)).chain((1..n).rev().map(at)).collect()
        };
        Tour { order }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// True when both tours describe the same cycle, ignoring rotation and direction.
    pub fn same_cycle(&self, other: &Tour) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn reversed(&self) -> Tour {
        Tour {
            order: self.order.iter().rev().copied().collect(),
        }
    }
}

/// Writes one word per line in the tour's stored order.
pub fn write_tour(tour: &Tour, emb: &EmbeddingMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    check_len(tour, emb)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_tour_to(tour, emb, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_tour_to<W: Write>(tour: &Tour, emb: &EmbeddingMatrix, out: &mut W) -> std::io::Result<()> {
    for &v in tour.order() {
        writeln!(out, "{}", emb.word(v))?;
    }
    Ok(())
}

/// Reads a tour file against a vocabulary; every vocabulary word must appear exactly once.
pub fn read_tour(path: impl AsRef<Path>, emb: &EmbeddingMatrix) -> Result<Tour> {
    let words = read_word_order(path)?;
    tour_from_words(&words, emb)
}

pub fn tour_from_words<S: AsRef<str>>(words: &[S], emb: &EmbeddingMatrix) -> Result<Tour> {
    let index: HashMap<&str, usize> = emb.vocab().iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    let mut seen = vec![false; emb.len()];
    let mut order = Vec::with_capacity(words.len());
    for w in words {
        let w = w.as_ref();
        let &i = index.get(w).ok_or_else(|| Error::UnknownWord(w.to_owned()))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateWord(w.to_owned()));
        }
        order.push(i);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::MissingWord(emb.word(i).to_owned()));
    }
    Ok(Tour::from_order_unchecked(order))
}

/// Reads the raw word sequence of a tour file, rejecting repeated words.
pub fn read_word_order(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut words = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let word = line.trim_end_matches('\r');
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::parse(idx + 1, format!("expected a single word, found {word:?}")));
        }
        if !seen.insert(word.to_owned()) {
            return Err(Error::DuplicateWord(word.to_owned()));
        }
        words.push(word.to_owned());
    }
    Ok(words)
}

fn check_len(tour: &Tour, emb: &EmbeddingMatrix) -> Result<()> {
    if tour.len() != emb.len() {
        return Err(Error::InvalidTour(format!(
            "tour has {} nodes but vocabulary has {} words",
            tour.len(),
            emb.len()
        )));
    }
    Ok(())
}
