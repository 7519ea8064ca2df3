//! Held–Karp style lower bound: minimum one-trees under node potentials.
//!
//! For potentials `pi`, edge `(i, j)` costs `dist(i, j) + pi[i] + pi[j]`. Every
//! tour is a one-tree in which each node has degree 2, so the minimum one-tree
//! weight minus `2 * sum(pi)` never exceeds the optimal tour cost. Subgradient
//! ascent on `deg - 2` pushes the bound up.

use crate::distance::Distances;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Node of the one-tree that is kept out of the spanning tree.
pub const SPECIAL_NODE: usize = 0;

/// Per-iteration shrink factor of the ascent step.
pub const STEP_DECAY: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct NodePotentials(Vec<f64>);

impl NodePotentials {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::OutOfRange(format!("non-finite potential {x}")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct OneTree {
    /// Spanning-tree edges over `1..n` followed by the two edges at node 0.
    pub edges: Vec<(usize, usize)>,
    pub degrees: Vec<usize>,
    /// Modified weight minus `2 * sum(pi)`; a lower bound on any tour.
    pub weight: f64,
}

impl OneTree {
    pub fn is_tour(&self) -> bool {
        self.degrees.iter().all(|&d| d == 2)
    }
}

pub fn min_one_tree(emb: &EmbeddingMatrix, pi: &NodePotentials) -> Result<OneTree> {
    min_one_tree_with(&Distances::new(emb), pi)
}

/// Dense Prim over nodes `1..n`, then the two cheapest edges from node 0.
/// Ties go to the smaller node index.
pub fn min_one_tree_with(dist: &Distances<'_>, pi: &NodePotentials) -> Result<OneTree> {
    let n = dist.len();
    if n < 3 {
        return Err(Error::OutOfRange(format!("a one-tree needs at least 3 nodes, got {n}")));
    }
    assert_eq!(pi.len(), n, "potential vector has the wrong length");
    let pi = pi.values();
    let cost = |i: usize, j: usize| dist.get(i, j) + pi[i] + pi[j];

    let mut edges = Vec::with_capacity(n);
    let mut degrees = vec![0; n];
    let mut total = 0.0;

    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    in_tree[SPECIAL_NODE] = true;
    let root = 1;
    in_tree[root] = true;
    for v in 2..n {
        key[v] = cost(root, v);
        parent[v] = root;
    }
    for _ in 2..n {
        let mut next = usize::MAX;
        for v in 2..n {
            if !in_tree[v] && (next == usize::MAX || key[v] < key[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        let p = parent[next];
        edges.push((p, next));
        degrees[p] += 1;
        degrees[next] += 1;
        total += key[next];
        for v in 2..n {
            if !in_tree[v] {
                let c = cost(next, v);
                if c < key[v] {
                    key[v] = c;
                    parent[v] = next;
                }
            }
        }
    }

    let mut first = (f64::INFINITY, usize::MAX);
    let mut second = (f64::INFINITY, usize::MAX);
    for v in 1..n {
        let c = cost(SPECIAL_NODE, v);
        if c < first.0 {
            second = first;
            first = (c, v);
        } else if c < second.0 {
            second = (c, v);
        }
    }
    for (c, v) in [first, second] {
        edges.push((SPECIAL_NODE, v));
        degrees[SPECIAL_NODE] += 1;
        degrees[v] += 1;
        total += c;
    }

    let weight = total - 2.0 * pi.iter().sum::<f64>();
    Ok(OneTree { edges, degrees, weight })
}

#[derive(Debug, Clone)]
pub struct AscentOutcome {
    /// Largest one-tree weight seen; never exceeds the optimal tour cost.
    pub bound: f64,
    /// Potentials after the last update.
    pub pi: NodePotentials,
    /// Potentials that produced `bound`.
    pub best_pi: NodePotentials,
    /// Potential updates performed.
    pub iterations: usize,
    /// The best one-tree was a tour, so `bound` is the optimum.
    pub optimal: bool,
}

pub fn held_karp_ascent(emb: &EmbeddingMatrix, iterations: usize, upper_bound: f64) -> Result<AscentOutcome> {
    held_karp_ascent_with(&Distances::new(emb), iterations, upper_bound)
}

/// Subgradient ascent `pi <- pi + t_m (deg - 2)` from `pi = 0` with
/// `t_m = t_0 * 0.95^m` and `t_0 = (upper_bound - w(0)) / max(1, |deg_0 - 2|^2)`.
pub fn held_karp_ascent_with(dist: &Distances<'_>, iterations: usize, upper_bound: f64) -> Result<AscentOutcome> {
    let n = dist.len();
    let mut pi = NodePotentials::zeros(n);
    let mut tree = min_one_tree_with(dist, &pi)?;
    let mut best = tree.weight;
    let mut best_pi = pi.clone();
    let mut optimal = tree.is_tour();

    let norm2 = |t: &OneTree| -> f64 {
        t.degrees
            .iter()
            .map(|&d| {
                let g = d as f64 - 2.0;
                g * g
            })
            .sum()
    };
    let t0 = (upper_bound - tree.weight) / norm2(&tree).max(1.0);
    let mut done = 0;
    if !optimal && t0 > 0.0 {
        let mut step = t0;
        for _ in 0..iterations {
            for (p, &d) in pi.0.iter_mut().zip(&tree.degrees) {
                *p += step * (d as f64 - 2.0);
            }
            tree = min_one_tree_with(dist, &pi)?;
            done += 1;
            if tree.weight > best {
                best = tree.weight;
                best_pi = pi.clone();
            }
            if tree.is_tour() {
                // the tree is an optimal tour; its plain length avoids the
                // rounding of the potential terms
                best = tree.edges.iter().map(|&(a, b)| dist.get(a, b)).sum();
                best_pi = pi.clone();
                optimal = true;
                break;
            }
            step *= STEP_DECAY;
        }
    }
    log::debug!("ascent: {done} updates, bound {best}");
    Ok(AscentOutcome {
        bound: best,
        pi,
        best_pi,
        iterations: done,
        optimal,
    })
}
