use std::collections::BTreeMap;

use super::corpus::Document;
use crate::error::{Error, Result};
use crate::tour::Tour;

/// Filter half-width used when none is given.
pub const DEFAULT_WIDTH: usize = 10;

/// How a token's unit mass is spread over tour positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    /// Plain bag of words: all mass on the token's own position.
    None,
    /// Truncated Gaussian `exp(-delta^2 / (2 variance))` for `|delta| <= width`.
    Gaussian { width: usize, variance: f64 },
}

/// An L1-normalized sparse mass vector over tour positions, sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurredBow {
    mass: Vec<(usize, f64)>,
    smoothing: Smoothing,
    positions: usize,
}

impl BlurredBow {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.mass
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    /// Number of tour positions the vector is defined over.
    pub fn dim(&self) -> usize {
        self.positions
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().map(|(_, m)| m).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.positions];
        for &(p, m) in &self.mass {
            v[p] = m;
        }
        v
    }
}

/// Builds document vectors over one tour with fixed smoothing.
#[derive(Debug, Clone)]
pub struct BowBuilder {
    positions: Vec<usize>,
    smoothing: Smoothing,
    /// Kernel weight for each cyclic offset; `weights[delta]`, zeros trimmed.
    weights: Vec<f64>,
}

impl BowBuilder {
    pub fn new(tour: &Tour, smoothing: Smoothing) -> Result<Self> {
        let n = tour.len();
        let weights = match smoothing {
            Smoothing::None => vec![1.0],
            Smoothing::Gaussian { width, variance } => {
                if !(variance > 0.0 && variance.is_finite()) {
                    return Err(Error::OutOfRange(format!("variance must be positive, got {variance}")));
                }
                // offsets beyond n/2 would revisit positions on the cycle
                let reach = width.min(n / 2);
                (0..=reach)
                    .map(|delta| {
                        let delta = delta as f64;
                        (-delta * delta / (2.0 * variance)).exp()
                    })
                    .take_while(|&g| g > 0.0)
                    .collect()
            }
        };
        Ok(Self {
            positions: tour.positions(),
            smoothing,
            weights,
        })
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn build(&self, doc: &Document) -> BlurredBow {
        let n = self.positions.len();
        let mut at: Vec<usize> = doc.tokens.iter().map(|&t| self.positions[t]).collect();
        at.sort_unstable();

        let reach = self.weights.len() - 1;
        // with an even cycle and full reach, +n/2 and -n/2 land on the same spot
        let skip_antipode = reach > 0 && 2 * reach == n;
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        let mut i = 0;
        while i < at.len() {
            let p = at[i];
            let count = at[i..].iter().take_while(|&&q| q == p).count();
            i += count;
            let c = count as f64;
            *acc.entry(p).or_insert(0.0) += c * self.weights[0];
            for (delta, &g) in self.weights.iter().enumerate().skip(1) {
                *acc.entry((p + delta) % n).or_insert(0.0) += c * g;
                if !(skip_antipode && delta == reach) {
                    *acc.entry((p + n - delta) % n).or_insert(0.0) += c * g;
                }
            }
        }
        let total: f64 = acc.values().sum();
        BlurredBow {
            mass: acc.into_iter().map(|(p, m)| (p, m / total)).collect(),
            smoothing: self.smoothing,
            positions: n,
        }
    }
}

/// Gaussian-blurred bag of words for one document.
pub fn blurred_bow(doc: &Document, tour: &Tour, width: usize, variance: f64) -> Result<BlurredBow> {
    Ok(BowBuilder::new(tour, Smoothing::Gaussian { width, variance })?.build(doc))
}

/// Count-based bag of words, normalized to unit L1 mass.
pub fn bag_of_words(doc: &Document, tour: &Tour) -> BlurredBow {
    BowBuilder::new(tour, Smoothing::None)
        .expect("plain bag of words has no parameters")
        .build(doc)
}

pub fn l1_distance(a: &BlurredBow, b: &BlurredBow) -> Result<f64> {
    if a.smoothing != b.smoothing || a.positions != b.positions {
        return Err(Error::ParamMismatch(format!(
            "{:?} over {} positions vs {:?} over {} positions",
            a.smoothing, a.positions, b.smoothing, b.positions
        )));
    }
    Ok(l1_unchecked(a, b))
}

/// Sorted merge over the union of supports.
pub(crate) fn l1_unchecked(a: &BlurredBow, b: &BlurredBow) -> f64 {
    let (x, y) = (&a.mass, &b.mass);
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < x.len() && j < y.len() {
        let (pa, ma) = x[i];
        let (pb, mb) = y[j];
        if pa == pb {
            sum += (ma - mb).abs();
            i += 1;
            j += 1;
        } else if pa < pb {
            sum += ma;
            i += 1;
        } else {
            sum += mb;
            j += 1;
        }
    }
    sum += x[i..].iter().map(|(_, m)| m).sum::<f64>();
    sum += y[j..].iter().map(|(_, m)| m).sum::<f64>();
    sum
}
