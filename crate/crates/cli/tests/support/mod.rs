#![allow(dead_code)]

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use wordtour::docsim::Document;
use wordtour::EmbeddingMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn words(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

pub fn from_rows(rows: Vec<Vec<f64>>) -> EmbeddingMatrix {
    EmbeddingMatrix::new(words(rows.len()), rows).unwrap()
}

pub fn uniform(n: usize, d: usize, seed: u64) -> EmbeddingMatrix {
    let mut r = rng(seed);
    from_rows((0..n).map(|_| (0..d).map(|_| r.random::<f64>()).collect()).collect())
}

pub fn naive_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn naive_cost(e: &EmbeddingMatrix, order: &[usize]) -> f64 {
    let n = order.len();
    (0..n)
        .map(|i| naive_dist(e.row(order[i]), e.row(order[(i + 1) % n])))
        .sum()
}

/// Optimal cycle cost by Heap's algorithm with node 0 pinned.
pub fn exhaustive_optimum(e: &EmbeddingMatrix) -> f64 {
    let mut rest: Vec<usize> = (1..e.len()).collect();
    let m = rest.len();
    let cost = |rest: &[usize]| {
        let mut order = vec![0];
        order.extend_from_slice(rest);
        naive_cost(e, &order)
    };
    let mut best = cost(&rest);
    let mut c = vec![0; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                rest.swap(0, i);
            } else {
                rest.swap(c[i], i);
            }
            best = best.min(cost(&rest));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// GloVe-style text for an embedding matrix, full float precision.
pub fn embedding_text(e: &EmbeddingMatrix) -> String {
    let mut s = String::new();
    for i in 0..e.len() {
        s.push_str(e.word(i));
        for x in e.row(i) {
            write!(s, " {x:?}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn write_embeddings(e: &EmbeddingMatrix, path: &Path) {
    std::fs::write(path, embedding_text(e)).unwrap();
}

/// `n` points on the unit circle, index `truth[k]` at angle `k * TAU / n`,
/// with Gaussian radial noise of `noise` times the arc spacing.
pub fn noisy_circle(n: usize, noise: f64, seed: u64) -> (EmbeddingMatrix, Vec<usize>) {
    let mut r = rng(seed);
    let mut truth: Vec<usize> = (0..n).collect();
    truth.shuffle(&mut r);
    let spacing = TAU / n as f64;
    let mut rows = vec![Vec::new(); n];
    for (k, &w) in truth.iter().enumerate() {
        let a = k as f64 * spacing;
        let z: f64 = StandardNormal.sample(&mut r);
        let radius = 1.0 + noise * spacing * z;
        rows[w] = vec![radius * a.cos(), radius * a.sin()];
    }
    (from_rows(rows), truth)
}

const TOKENS: std::ops::RangeInclusive<usize> = 4..=6;
const IN_CLASS: f64 = 0.6;

/// A labeled synthetic corpus whose vocabulary lies along a smooth closed
/// curve, each class owning one contiguous arc.
pub struct SyntheticCorpus {
    pub embeddings: EmbeddingMatrix,
    pub train: Vec<Document>,
    pub test: Vec<Document>,
    pub classes: usize,
}

impl SyntheticCorpus {
    pub fn generate(seed: u64) -> Self {
        Self::with_noise(seed, TOKENS, IN_CLASS)
    }

    pub fn with_noise(seed: u64, tokens: std::ops::RangeInclusive<usize>, in_class: f64) -> Self {
        const WORDS: usize = 500;
        const DIM: usize = 16;
        const CLASSES: usize = 4;
        const DOCS: usize = 400;
        const HARMONICS: usize = 3;
        let mut r = rng(seed);

        // closed curve: a random trigonometric polynomial in DIM dimensions
        let coef: Vec<[f64; 2 * HARMONICS]> = (0..DIM)
            .map(|_| std::array::from_fn(|_| StandardNormal.sample(&mut r)))
            .collect();
        let mut ids: Vec<usize> = (0..WORDS).collect();
        ids.shuffle(&mut r);
        let mut rows = vec![Vec::new(); WORDS];
        for (k, &w) in ids.iter().enumerate() {
            let t = k as f64 * TAU / WORDS as f64;
            rows[w] = coef
                .iter()
                .map(|c| {
                    let mut x = 0.0;
                    for h in 0..HARMONICS {
                        let m = (h + 1) as f64;
                        x += (c[2 * h] * (m * t).cos() + c[2 * h + 1] * (m * t).sin()) / m;
                    }
                    let z: f64 = StandardNormal.sample(&mut r);
                    x + 0.01 * z
                })
                .collect();
        }
        let arc = WORDS / CLASSES;
        let mut docs = Vec::with_capacity(DOCS);
        for i in 0..DOCS {
            let label = i % CLASSES;
            let len = r.random_range(tokens.clone());
            let tokens = (0..len)
                .map(|_| {
                    if r.random::<f64>() < in_class {
                        ids[label * arc + r.random_range(0..arc)]
                    } else {
                        r.random_range(0..WORDS)
                    }
                })
                .collect();
            docs.push(Document {
                id: format!("d{i}"),
                label,
                tokens,
            });
        }
        docs.shuffle(&mut r);
        let test = docs.split_off(DOCS / 2);
        Self {
            embeddings: from_rows(rows),
            train: docs,
            test,
            classes: CLASSES,
        }
    }

    /// Corpus file text with labels written as `c<label>`.
    pub fn corpus_text(&self, docs: &[Document]) -> String {
        let mut s = String::new();
        for d in docs {
            let toks: Vec<&str> = d.tokens.iter().map(|&t| self.embeddings.word(t)).collect();
            writeln!(s, "c{}\t{}", d.label, toks.join(" ")).unwrap();
        }
        s
    }
}
