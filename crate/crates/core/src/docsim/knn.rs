use std::hint::black_box;
use std::time::Instant;

use rayon::prelude::*;

use super::bow::{l1_unchecked, BlurredBow, BowBuilder};
use super::corpus::Document;
use crate::error::{Error, Result};

/// Training vectors sorted by (distance to `query`, training index).
pub fn rank_neighbors(train: &[BlurredBow], query: &BlurredBow) -> Result<Vec<(f64, usize)>> {
    if let Some(t) = train.first() {
        if t.smoothing() != query.smoothing() || t.dim() != query.dim() {
            return Err(Error::ParamMismatch(format!(
                "query built with {:?}, training set with {:?}",
                query.smoothing(),
                t.smoothing()
            )));
        }
    }
    let mut ranked: Vec<(f64, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, t)| (l1_unchecked(t, query), i))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(ranked)
}

/// Majority label among the first `k` ranked neighbors. A tie in votes goes to
/// whichever tied label appears nearest.
pub fn vote(ranked: &[(f64, usize)], labels: &[usize], k: usize) -> usize {
    let top = &ranked[..k.min(ranked.len())];
    let mut counts = std::collections::HashMap::new();
    for &(_, i) in top {
        *counts.entry(labels[i]).or_insert(0usize) += 1;
    }
    let best = counts.values().copied().max().unwrap_or(0);
    top.iter()
        .map(|&(_, i)| labels[i])
        .find(|l| counts[l] == best)
        .expect("at least one neighbor")
}

pub fn knn_classify(train: &[BlurredBow], labels: &[usize], query: &BlurredBow, k: usize) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::EmptyTraining);
    }
    if k == 0 || k > train.len() {
        return Err(Error::OutOfRange(format!("k = {k} must lie in 1..={}", train.len())));
    }
    assert_eq!(train.len(), labels.len(), "one label per training vector");
    Ok(vote(&rank_neighbors(train, query)?, labels, k))
}

/// A k-nearest-neighbor classifier over document vectors.
#[derive(Debug, Clone)]
pub struct KnnModel {
    builder: BowBuilder,
    vectors: Vec<BlurredBow>,
    labels: Vec<usize>,
    k: usize,
}

impl KnnModel {
    pub fn fit(builder: BowBuilder, train: &[Document], k: usize) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTraining);
        }
        if k == 0 || k > train.len() {
            return Err(Error::OutOfRange(format!("k = {k} must lie in 1..={}", train.len())));
        }
        let vectors = train.par_iter().map(|d| builder.build(d)).collect();
        Ok(Self {
            builder,
            vectors,
            labels: train.iter().map(|d| d.label).collect(),
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn builder(&self) -> &BowBuilder {
        &self.builder
    }

    pub fn vectors(&self) -> &[BlurredBow] {
        &self.vectors
    }

    pub fn predict(&self, doc: &Document) -> usize {
        let q = self.builder.build(doc);
        let ranked = rank_neighbors(&self.vectors, &q).expect("query built by the model's own builder");
        vote(&ranked, &self.labels, self.k)
    }

    /// Predictions for a batch, in input order.
    pub fn predict_all(&self, docs: &[Document]) -> Vec<usize> {
        docs.par_iter().map(|d| self.predict(d)).collect()
    }

    /// Percentage of documents whose prediction differs from their label.
    pub fn error_percent(&self, docs: &[Document]) -> f64 {
        let wrong = self
            .predict_all(docs)
            .iter()
            .zip(docs)
            .filter(|(p, d)| **p != d.label)
            .count();
        100.0 * wrong as f64 / docs.len().max(1) as f64
    }
}

/// Mean wall-clock nanoseconds of one `l1_distance` evaluation, cycling over
/// all `(query, train)` pairs until at least `min_comparisons` were timed.
pub fn mean_comparison_nanos(queries: &[BlurredBow], train: &[BlurredBow], min_comparisons: usize) -> f64 {
    if queries.is_empty() || train.is_empty() {
        return 0.0;
    }
    let pairs = queries.len() * train.len();
    let rounds = min_comparisons.div_ceil(pairs).max(1);
    let start = Instant::now();
    let mut sink = 0.0;
    for _ in 0..rounds {
        for q in queries {
            for t in train {
                sink += l1_unchecked(black_box(q), black_box(t));
            }
        }
    }
    black_box(sink);
    start.elapsed().as_nanos() as f64 / (rounds * pairs) as f64
}
