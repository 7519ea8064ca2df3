#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordtour::EmbeddingMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn from_rows(rows: Vec<Vec<f64>>) -> EmbeddingMatrix {
    let vocab = (0..rows.len()).map(|i| format!("w{i}")).collect();
    EmbeddingMatrix::new(vocab, rows).unwrap()
}

/// `n` points uniform in the unit cube of dimension `d`.
pub fn uniform(n: usize, d: usize, seed: u64) -> EmbeddingMatrix {
    let mut r = rng(seed);
    from_rows((0..n).map(|_| (0..d).map(|_| r.random::<f64>()).collect()).collect())
}

/// Euclidean distance written out independently of the library.
pub fn naive_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += (a[k] - b[k]).powi(2);
    }
    s.sqrt()
}

pub fn naive_cost(e: &EmbeddingMatrix, order: &[usize]) -> f64 {
    let mut total = 0.0;
    for i in 0..order.len() {
        let j = if i + 1 == order.len() { 0 } else { i + 1 };
        total += naive_dist(e.row(order[i]), e.row(order[j]));
    }
    total
}

/// Optimal cycle cost by Heap's algorithm over all orderings of nodes 1..n
/// with node 0 fixed in front.
pub fn exhaustive_optimum(e: &EmbeddingMatrix) -> f64 {
    let n = e.len();
    let mut rest: Vec<usize> = (1..n).collect();
    let m = rest.len();
    let mut best = f64::INFINITY;
    let mut eval = |rest: &[usize]| {
        let mut order = vec![0];
        order.extend_from_slice(rest);
        best = best.min(naive_cost(e, &order));
    };
    let mut c = vec![0; m];
    eval(&rest);
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                rest.swap(0, i);
            } else {
                rest.swap(c[i], i);
            }
            eval(&rest);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}
