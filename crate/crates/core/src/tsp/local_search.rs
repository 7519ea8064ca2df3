//! Candidate-restricted 2-opt and Or-opt improvement.
//!
//! Nodes wait in a FIFO queue seeded in tour order. Popping a node scans the
//! moves anchored at it and applies the first improving one; the endpoints of
//! every changed edge go back on the queue. Once the queue drains, a full
//! sweep over all nodes re-checks stability, so the returned tour admits no
//! improving move of either kind through a candidate edge.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use super::candidates::CandidateGraph;
use crate::distance::Distances;
use crate::embedding::EmbeddingMatrix;
use crate::tour::Tour;

/// A move is applied only if it shortens the tour by more than this.
pub const MIN_GAIN: f64 = 1e-9;

const MAX_SEGMENT: usize = 3;

/// Limits on a search run. The default is unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_moves: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn moves(max_moves: u64) -> Self {
        Self {
            max_moves: Some(max_moves),
            max_time: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Canonical form of the improved tour.
    pub tour: Tour,
    pub cost: f64,
    /// Improving moves applied.
    pub moves: u64,
    /// The budget ran out before the tour was verified stable.
    pub exhausted: bool,
}

pub fn local_search(emb: &EmbeddingMatrix, start: &Tour, candidates: &CandidateGraph, budget: Budget) -> SearchOutcome {
    let dist = Distances::new(emb);
    local_search_with(&dist, start, candidates, budget)
}

pub fn local_search_with(
    dist: &Distances<'_>,
    start: &Tour,
    candidates: &CandidateGraph,
    budget: Budget,
) -> SearchOutcome {
    assert_eq!(start.len(), dist.len(), "tour and embeddings differ in size");
    assert_eq!(
        candidates.len(),
        dist.len(),
        "candidate graph and embeddings differ in size"
    );
    let mut search = Search::new(dist, candidates, start.order());
    let clock = Instant::now();
    let mut moves = 0u64;
    let mut exhausted = false;
    let mut queue = VecDeque::with_capacity(search.n);
    let mut queued = vec![false; search.n];

    'sweeps: loop {
        let before = moves;
        for &v in &search.order {
            if !queued[v] {
                queued[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(a) = queue.pop_front() {
            queued[a] = false;
            if budget.max_moves.is_some_and(|m| moves >= m) || budget.max_time.is_some_and(|t| clock.elapsed() >= t) {
                exhausted = true;
                break 'sweeps;
            }
            if let Some(touched) = search.improve(a) {
                moves += 1;
                for v in touched {
                    if !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        if moves == before {
            break;
        }
    }

    let tour = Tour::from_order_unchecked(search.order).canonical();
    let cost = super::tour_cost_with(dist, tour.order());
    SearchOutcome {
        tour,
        cost,
        moves,
        exhausted,
    }
}

struct Search<'a, 'e> {
    dist: &'a Distances<'e>,
    cand: &'a CandidateGraph,
    n: usize,
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl<'a, 'e> Search<'a, 'e> {
    fn new(dist: &'a Distances<'e>, cand: &'a CandidateGraph, order: &[usize]) -> Self {
        let n = order.len();
        let mut pos = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        Self {
            dist,
            cand,
            n,
            order: order.to_vec(),
            pos,
        }
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> f64 {
        self.dist.get(a, b)
    }

    #[inline]
    fn succ(&self, v: usize) -> usize {
        self.order[(self.pos[v] + 1) % self.n]
    }

    #[inline]
    fn pred(&self, v: usize) -> usize {
        self.order[(self.pos[v] + self.n - 1) % self.n]
    }

    /// Forward steps from `a` to `b`.
    #[inline]
    fn span(&self, a: usize, b: usize) -> usize {
        (self.pos[b] + self.n - self.pos[a]) % self.n
    }

    /// Tries moves anchored at `a`; applies the first improving one and returns
    /// the endpoints of the edges it changed.
    fn improve(&mut self, a: usize) -> Option<Vec<usize>> {
        if self.n < 4 {
            return None;
        }
        self.two_opt(a).or_else(|| self.or_opt(a))
    }

    fn two_opt(&mut self, a: usize) -> Option<Vec<usize>> {
        for forward in [true, false] {
            let step = |s: &Self, v: usize| if forward { s.succ(v) } else { s.pred(v) };
            let b = step(self, a);
            let dab = self.d(a, b);
            for &c in self.cand.neighbors(a) {
                let d = step(self, c);
                if c == b || d == a {
                    continue;
                }
                let gain = dab + self.d(c, d) - self.d(a, c) - self.d(b, d);
                if gain > MIN_GAIN {
                    // forward: a b .. c d  ->  a c .. b d
                    // backward: d c .. b a  ->  d b .. c a
                    if forward {
                        self.reverse_path(b, c);
                    } else {
                        self.reverse_path(c, b);
                    }
                    return Some(vec![a, b, c, d]);
                }
            }
        }
        None
    }

    fn or_opt(&mut self, a: usize) -> Option<Vec<usize>> {
        for len in 1..=MAX_SEGMENT {
            if self.n < len + 3 {
                break;
            }
            let mut starts = vec![a];
            if len > 1 {
                // segment ending at `a`
                let mut s = a;
                for _ in 1..len {
                    s = self.pred(s);
                }
                starts.push(s);
            }
            for s1 in starts {
                if let Some(touched) = self.relocate_segment(s1, len) {
                    return Some(touched);
                }
            }
        }
        None
    }

    /// Moves the `len` nodes starting at `s1` between the ends of some tour edge
    /// incident to a candidate neighbor of either segment end.
    fn relocate_segment(&mut self, s1: usize, len: usize) -> Option<Vec<usize>> {
        let mut s2 = s1;
        for _ in 1..len {
            s2 = self.succ(s2);
        }
        let p = self.pred(s1);
        let nx = self.succ(s2);
        let removal = self.d(p, s1) + self.d(s2, nx) - self.d(p, nx);
        let inside = |s: &Self, v: usize| s.span(s1, v) < len;

        for end in [s1, s2] {
            for &c in self.cand.neighbors(end) {
                if inside(self, c) {
                    continue;
                }
                for (u, v) in [(c, self.succ(c)), (self.pred(c), c)] {
                    if inside(self, u) || inside(self, v) {
                        continue;
                    }
                    let duv = self.d(u, v);
                    for reversed in [false, true] {
                        let (first, last) = if reversed { (s2, s1) } else { (s1, s2) };
                        let gain = removal + duv - self.d(u, first) - self.d(last, v);
                        if gain > MIN_GAIN {
                            self.move_segment(s1, len, u, v, reversed);
                            return Some(vec![p, nx, s1, s2, u, v]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Reverses the forward path `from ..= to`, or equivalently its complement,
    /// whichever is shorter.
    fn reverse_path(&mut self, from: usize, to: usize) {
        let inner = self.span(from, to) + 1;
        let (start, len) = if 2 * inner <= self.n {
            (self.pos[from], inner)
        } else {
            (self.pos[self.succ(to)], self.n - inner)
        };
        for k in 0..len / 2 {
            let i = (start + k) % self.n;
            let j = (start + len - 1 - k) % self.n;
            self.order.swap(i, j);
            self.pos[self.order[i]] = i;
            self.pos[self.order[j]] = j;
        }
    }

    /// Cuts the segment starting at `s1` and reinserts it so that the tour reads
    /// `u, segment, v`, where `(u, v)` is a forward tour edge outside the segment.
    fn move_segment(&mut self, s1: usize, len: usize, u: usize, v: usize, reversed: bool) {
        let n = self.n;
        let i = self.pos[s1];
        let mut seg: Vec<usize> = (0..len).map(|k| self.order[(i + k) % n]).collect();
        if reversed {
            seg.reverse();
        }
        let nx = self.order[(i + len) % n];
        // nodes from nx forward to u, and from v forward to the node before s1
        let between = self.span(nx, u) + 1;
        let other = n - len - between;

        let (first, touched) = if between <= other {
            for k in 0..between {
                self.order[(i + k) % n] = self.order[(i + len + k) % n];
            }
            for (k, &s) in seg.iter().enumerate() {
                self.order[(i + between + k) % n] = s;
            }
            (i, between + len)
        } else {
            let pv = self.pos[v];
            for k in (0..other).rev() {
                self.order[(pv + k + len) % n] = self.order[(pv + k) % n];
            }
            for (k, &s) in seg.iter().enumerate() {
                self.order[(pv + k) % n] = s;
            }
            (pv, other + len)
        };
        for k in 0..touched {
            let p = (first + k) % n;
            self.pos[self.order[p]] = p;
        }
    }
}
