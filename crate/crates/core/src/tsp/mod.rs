//! Cyclic tours over embedding vectors: cost, construction, and local improvement.

mod candidates;
mod construct;
mod local_search;

pub use candidates::{build_candidates, CandidateGraph, DEFAULT_CANDIDATES};
pub use construct::{brute_force_tour, greedy_tour, greedy_tour_with, BRUTE_FORCE_MAX};
pub use local_search::{local_search, local_search_with, Budget, SearchOutcome, MIN_GAIN};

use crate::distance::Distances;
use crate::embedding::EmbeddingMatrix;
use crate::tour::Tour;

/// Sum of consecutive Euclidean distances around the cycle, closing edge included.
pub fn tour_cost(emb: &EmbeddingMatrix, tour: &Tour) -> f64 {
    cycle_cost(tour.order(), |a, b| emb.dist(a, b))
}

pub(crate) fn tour_cost_with(dist: &Distances<'_>, order: &[usize]) -> f64 {
    cycle_cost(order, |a, b| dist.get(a, b))
}

fn cycle_cost(order: &[usize], dist: impl Fn(usize, usize) -> f64) -> f64 {
    let n = order.len();
    (0..n).map(|i| dist(order[i], order[(i + 1) % n])).sum()
}
