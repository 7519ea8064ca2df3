//! Linear orderings used as points of comparison: sort words by a random
//! projection or by a principal-component score.
//!
//! Both return the sorted order as a [`Tour`]; downstream code reads it
//! cyclically like any other tour.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::tour::Tour;

/// Convergence threshold on the change of the unit eigenvector estimate.
pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_MAX_ITERATIONS: usize = 10_000;
/// Eigenvalues at or below this (relative to the covariance trace, floored at 1)
/// make a component undefined.
pub const EIGEN_EPS: f64 = 1e-12;

const START_VECTOR_SEED: u64 = 0x5eed;

/// Orders words by `dir . x` for a direction drawn from the standard
/// multivariate Gaussian; ties go to the smaller index.
pub fn rand_proj_order(emb: &EmbeddingMatrix, seed: u64) -> Tour {
    let direction = random_direction(emb.dim(), seed);
    let scores: Vec<f64> = emb.rows().map(|x| dot(x, &direction)).collect();
    order_by_score(&scores)
}

/// The Gaussian direction `rand_proj_order` uses for `seed`.
pub fn random_direction(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Orders words by their score on the `component`-th principal axis (1-based).
pub fn pca_order(emb: &EmbeddingMatrix, component: usize) -> Result<Tour> {
    Ok(order_by_score(&pca_scores(emb, component)?))
}

/// Centered projections onto the `component`-th principal axis, signed so the
/// word with the largest absolute score (first such word on ties) is positive.
pub fn pca_scores(emb: &EmbeddingMatrix, component: usize) -> Result<Vec<f64>> {
    let (n, d) = (emb.len(), emb.dim());
    if component == 0 || component > d {
        return Err(Error::OutOfRange(format!("component {component} outside 1..={d}")));
    }
    if n <= component {
        return Err(Error::OutOfRange(format!(
            "component {component} needs more than {component} words, got {n}"
        )));
    }

    let mut mean = vec![0.0; d];
    for row in emb.rows() {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered: Vec<Vec<f64>> = emb
        .rows()
        .map(|row| row.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();

    let mut cov = vec![vec![0.0; d]; d];
    for row in &centered {
        for (a, cov_row) in cov.iter_mut().enumerate() {
            for (c, x) in cov_row.iter_mut().zip(row).skip(a) {
                *c += row[a] * x;
            }
        }
    }
    let upper = cov.clone();
    for (a, cov_row) in cov.iter_mut().enumerate() {
        for (b, c) in cov_row.iter_mut().enumerate() {
            *c = upper[a.min(b)][a.max(b)] / (n - 1) as f64;
        }
    }
    let trace: f64 = (0..d).map(|a| cov[a][a]).sum();

    let mut axis = Vec::new();
    for j in 1..=component {
        let (lambda, v) = power_iteration(&cov);
        if lambda <= EIGEN_EPS * trace.max(1.0) {
            return Err(Error::DegenerateComponent {
                component: j,
                eigenvalue: lambda,
            });
        }
        // Hotelling deflation
        for a in 0..d {
            for b in 0..d {
                cov[a][b] -= lambda * v[a] * v[b];
            }
        }
        axis = v;
    }

    let mut scores: Vec<f64> = centered.iter().map(|row| dot(row, &axis)).collect();
    let peak = scores.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if let Some(lead) = scores.iter().position(|s| s.abs() >= peak * (1.0 - 1e-9)) {
        if scores[lead] < 0.0 {
            scores.iter_mut().for_each(|s| *s = -*s);
        }
    }
    Ok(scores)
}

/// Dominant eigenpair of a symmetric positive semidefinite matrix.
fn power_iteration(m: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let d = m.len();
    let mut rng = ChaCha8Rng::seed_from_u64(START_VECTOR_SEED);
    let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut v);

    for _ in 0..POWER_MAX_ITERATIONS {
        let mut w = mat_vec(m, &v);
        if normalize(&mut w) == 0.0 {
            return (0.0, v);
        }
        let change = v.iter().zip(&w).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        v = w;
        if change < POWER_TOLERANCE {
            break;
        }
    }
    let lambda = dot(&v, &mat_vec(m, &v));
    (lambda, v)
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn order_by_score(scores: &[f64]) -> Tour {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    Tour::from_order_unchecked(order)
}
