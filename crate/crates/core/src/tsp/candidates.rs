use std::cmp::Ordering;

use rayon::prelude::*;

use crate::embedding::EmbeddingMatrix;

pub const DEFAULT_CANDIDATES: usize = 8;

/// Exact k-nearest-neighbor lists restricting which local-search moves are tried.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateGraph {
    k: usize,
    neighbors: Vec<Vec<usize>>,
}

impl CandidateGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Neighbors of `i`, nearest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }
}

/// Distance ascending, then node index ascending.
#[inline]
pub(crate) fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Builds exact k-NN lists by a full scan per node. Rows are computed in
/// parallel; the comparator is a total order so the result does not depend on
/// scheduling.
pub fn build_candidates(emb: &EmbeddingMatrix, k: usize) -> CandidateGraph {
    assert!(k >= 1, "candidate list size must be positive");
    let n = emb.len();
    let keep = k.min(n - 1);
    let neighbors = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row: Vec<(f64, usize)> = (0..n).filter(|&j| j != i).map(|j| (emb.dist(i, j), j)).collect();
            if keep < row.len() {
                row.select_nth_unstable_by(keep, by_distance_then_index);
                row.truncate(keep);
            }
            row.sort_unstable_by(by_distance_then_index);
            row.into_iter().map(|(_, j)| j).collect()
        })
        .collect();
    CandidateGraph { k, neighbors }
}
