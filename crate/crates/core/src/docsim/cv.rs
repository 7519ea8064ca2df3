//! Hyperparameter selection for the kNN classifier by seeded k-fold
//! cross-validation over a (smoothing, k) grid.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bow::{BowBuilder, Smoothing, DEFAULT_WIDTH};
use super::corpus::Document;
use super::knn::{rank_neighbors, vote, KnnModel};
use crate::error::{Error, Result};
use crate::tour::Tour;

pub const DEFAULT_KS: std::ops::RangeInclusive<usize> = 1..=19;
pub const DEFAULT_VARIANCES: [f64; 6] = [0.01, 0.1, 1.0, 10.0, 100.0, 1000.0];
pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_SEED: u64 = 0;

/// Mean errors closer than this count as equal when picking the best cell.
const ERROR_TIE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CvConfig {
    /// Candidate smoothings in tie-break order (earlier wins on equal error).
    pub smoothings: Vec<Smoothing>,
    /// Candidate neighbor counts in tie-break order.
    pub ks: Vec<usize>,
    pub folds: usize,
    pub seed: u64,
}

impl CvConfig {
    /// Gaussian blur of the given width with the default variance grid.
    pub fn blurred(width: usize, seed: u64) -> Self {
        Self {
            smoothings: DEFAULT_VARIANCES
                .iter()
                .map(|&variance| Smoothing::Gaussian { width, variance })
                .collect(),
            ks: DEFAULT_KS.collect(),
            folds: DEFAULT_FOLDS,
            seed,
        }
    }

    /// Plain bag of words; only `k` is searched.
    pub fn plain(seed: u64) -> Self {
        Self {
            smoothings: vec![Smoothing::None],
            ks: DEFAULT_KS.collect(),
            folds: DEFAULT_FOLDS,
            seed,
        }
    }
}

impl Default for CvConfig {
    fn default() -> Self {
        Self::blurred(DEFAULT_WIDTH, DEFAULT_SEED)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub smoothing: Smoothing,
    pub k: usize,
    /// Mean over folds of the fold's misclassification rate.
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub best: GridCell,
    pub grid: Vec<GridCell>,
    /// Classifier refit on the whole training set with the chosen cell.
    pub model: KnnModel,
}

impl CvOutcome {
    pub fn k(&self) -> usize {
        self.best.k
    }

    pub fn variance(&self) -> Option<f64> {
        match self.best.smoothing {
            Smoothing::Gaussian { variance, .. } => Some(variance),
            Smoothing::None => None,
        }
    }
}

/// Fold of each document: a seeded shuffle dealt round-robin.
pub fn fold_assignment(len: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold = vec![0; len];
    for (rank, &i) in idx.iter().enumerate() {
        fold[i] = rank % folds;
    }
    fold
}

pub fn cross_validate(train: &[Document], tour: &Tour, config: &CvConfig) -> Result<CvOutcome> {
    if train.len() < config.folds.max(2) {
        return Err(Error::OutOfRange(format!(
            "cross-validation needs at least {} documents, got {}",
            config.folds.max(2),
            train.len()
        )));
    }
    let mut classes: Vec<usize> = train.iter().map(|d| d.label).collect();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::OutOfRange("cross-validation needs at least 2 classes".into()));
    }
    if config.smoothings.is_empty() || config.ks.is_empty() {
        return Err(Error::OutOfRange("empty hyperparameter grid".into()));
    }

    let fold = fold_assignment(train.len(), config.folds, config.seed);
    let labels: Vec<usize> = train.iter().map(|d| d.label).collect();
    let smallest_train_fold = (0..config.folds)
        .map(|f| fold.iter().filter(|&&x| x != f).count())
        .min()
        .unwrap_or(0);

    let mut grid = Vec::new();
    for &smoothing in &config.smoothings {
        let builder = BowBuilder::new(tour, smoothing)?;
        let vectors: Vec<_> = train.par_iter().map(|d| builder.build(d)).collect();
        let mut error_sum = vec![0.0; config.ks.len()];
        for f in 0..config.folds {
            let inside: Vec<usize> = (0..train.len()).filter(|&i| fold[i] != f).collect();
            let held: Vec<usize> = (0..train.len()).filter(|&i| fold[i] == f).collect();
            if held.is_empty() {
                continue;
            }
            let fold_vectors: Vec<_> = inside.iter().map(|&i| vectors[i].clone()).collect();
            let fold_labels: Vec<usize> = inside.iter().map(|&i| labels[i]).collect();
            let wrong: Vec<Vec<bool>> = held
                .par_iter()
                .map(|&q| {
                    let ranked = rank_neighbors(&fold_vectors, &vectors[q]).expect("same builder");
                    config
                        .ks
                        .iter()
                        .map(|&k| vote(&ranked, &fold_labels, k) != labels[q])
                        .collect()
                })
                .collect();
            for (slot, sum) in error_sum.iter_mut().enumerate() {
                let count = wrong.iter().filter(|w| w[slot]).count();
                *sum += count as f64 / held.len() as f64;
            }
        }
        for (&k, &sum) in config.ks.iter().zip(&error_sum) {
            if k == 0 || k > smallest_train_fold {
                continue;
            }
            grid.push(GridCell {
                smoothing,
                k,
                error: sum / config.folds as f64,
            });
        }
    }

    let best = grid
        .iter()
        .copied()
        .reduce(|best, cell| {
            if cell.error < best.error - ERROR_TIE {
                cell
            } else {
                best
            }
        })
        .ok_or_else(|| Error::OutOfRange("no admissible k for the fold sizes".into()))?;
    log::debug!(
        "cross-validation picked {:?} with k = {} (error {:.4})",
        best.smoothing,
        best.k,
        best.error
    );
    let model = KnnModel::fit(BowBuilder::new(tour, best.smoothing)?, train, best.k)?;
    Ok(CvOutcome { best, grid, model })
}
