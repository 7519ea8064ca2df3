use rayon::prelude::*;

use crate::embedding::EmbeddingMatrix;

/// Largest instance for which a full distance matrix is materialized.
pub const CACHE_LIMIT: usize = 2000;

/// Pairwise Euclidean distances, either precomputed or evaluated on demand.
///
/// Both paths call the same kernel, so results are bit-identical.
pub struct Distances<'a> {
    emb: &'a EmbeddingMatrix,
    cache: Option<Vec<f64>>,
}

impl<'a> Distances<'a> {
    pub fn new(emb: &'a EmbeddingMatrix) -> Self {
        if emb.len() <= CACHE_LIMIT {
            Self::cached(emb)
        } else {
            Self::on_demand(emb)
        }
    }

    pub fn on_demand(emb: &'a EmbeddingMatrix) -> Self {
        Self { emb, cache: None }
    }

    pub fn cached(emb: &'a EmbeddingMatrix) -> Self {
        let n = emb.len();
        let mut m = vec![0.0; n * n];
        m.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, x) in row.iter_mut().enumerate() {
                *x = emb.dist(i, j);
            }
        });
        Self { emb, cache: Some(m) }
    }

    pub fn len(&self) -> usize {
        self.emb.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emb.is_empty()
    }

    pub fn embeddings(&self) -> &'a EmbeddingMatrix {
        self.emb
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.cache {
            Some(m) => m[i * self.emb.len() + j],
            None => self.emb.dist(i, j),
        }
    }
}
