use super::candidates::{by_distance_then_index, CandidateGraph};
use super::tour_cost;
use crate::distance::Distances;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::tour::Tour;

/// Largest instance `brute_force_tour` will enumerate.
pub const BRUTE_FORCE_MAX: usize = 10;

/// Nearest-neighbor construction from `start`; ties go to the smaller index.
pub fn greedy_tour(emb: &EmbeddingMatrix, start: usize) -> Tour {
    greedy_tour_with(emb, start, None)
}

/// Same tour as [`greedy_tour`], consulting candidate lists first and falling
/// back to a full scan only when every listed neighbor is already visited.
pub fn greedy_tour_with(emb: &EmbeddingMatrix, start: usize, candidates: Option<&CandidateGraph>) -> Tour {
    let n = emb.len();
    assert!(start < n, "start node {start} out of range");
    let dist = Distances::new(emb);
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    order.push(cur);

    while order.len() < n {
        // A k-NN list sorted by (distance, index) yields the exact nearest
        // unvisited node whenever it contains one.
        let from_list = candidates.and_then(|g| g.neighbors(cur).iter().copied().find(|&j| !visited[j]));
        let next = from_list.unwrap_or_else(|| {
            (0..n)
                .filter(|&j| !visited[j])
                .map(|j| (dist.get(cur, j), j))
                .min_by(by_distance_then_index)
                .map(|(_, j)| j)
                .expect("an unvisited node remains")
        });
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    Tour::from_order_unchecked(order).canonical()
}

/// Exact optimum by enumerating every distinct cycle, `(n-1)!/2` of them.
///
/// Cycles are visited in lexicographic order of their canonical form and only
/// a strictly cheaper cycle replaces the incumbent.
pub fn brute_force_tour(emb: &EmbeddingMatrix) -> Result<(Tour, f64)> {
    let n = emb.len();
    if !(3..=BRUTE_FORCE_MAX).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "brute force is limited to 3..={BRUTE_FORCE_MAX} nodes, got {n}"
        )));
    }
    let dist = Distances::cached(emb);
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut order = vec![0; n];
    loop {
        if rest[0] < rest[n - 2] {
            order[1..].copy_from_slice(&rest);
            let cost = super::tour_cost_with(&dist, &order);
            if best.as_ref().is_none_or(|(_, b)| cost < *b) {
                best = Some((order.clone(), cost));
            }
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    let (order, _) = best.expect("at least one cycle");
    let tour = Tour::from_order_unchecked(order);
    let cost = tour_cost(emb, &tour);
    Ok((tour, cost))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(rows: Vec<Vec<f64>>) -> EmbeddingMatrix {
        let vocab = (0..rows.len()).map(|i| format!("w{i}")).collect();
        EmbeddingMatrix::new(vocab, rows).unwrap()
    }

    fn triangle() -> EmbeddingMatrix {
        emb(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]])
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut v = vec![1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], [1, 3, 2]);
        assert_eq!(seen[5], [3, 2, 1]);
    }

    #[test]
    fn greedy_on_a_line() {
        let e = emb(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        assert_eq!(greedy_tour(&e, 0).order(), [0, 1, 2, 3]);
    }

    #[test]
    fn greedy_triangle_any_start() {
        let e = triangle();
        for s in 0..3 {
            assert!((tour_cost(&e, &greedy_tour(&e, s)) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_with_candidates_matches_plain() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let t = i as f64;
                vec![(t * 1.7).sin() * 3.0, (t * 0.37).cos() * 2.0, (t * t * 0.01) % 1.3]
            })
            .collect();
        let e = emb(rows);
        let g = super::super::build_candidates(&e, 3);
        for s in [0, 7, 39] {
            assert_eq!(greedy_tour(&e, s), greedy_tour_with(&e, s, Some(&g)));
        }
    }

    #[test]
    fn brute_force_square_and_triangle() {
        let sq = emb(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        let (t, c) = brute_force_tour(&sq).unwrap();
        assert!((c - 4.0).abs() < 1e-12);
        assert_eq!(t.order(), [0, 2, 1, 3]);
        let (_, c) = brute_force_tour(&triangle()).unwrap();
        assert!((c - 3.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_refuses_out_of_range() {
        let two = emb(vec![vec![0.0], vec![1.0]]);
        assert!(matches!(brute_force_tour(&two), Err(Error::OutOfRange(_))));
        let big = emb((0..11).map(|i| vec![i as f64]).collect());
        assert!(brute_force_tour(&big).is_err());
    }
}
