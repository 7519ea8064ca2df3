mod common;

use std::time::Instant;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use wordtour::docsim::{
    bag_of_words, blurred_bow, cross_validate, knn_classify, l1_distance, BowBuilder, CvConfig, Document, KnnModel,
    Smoothing,
};
use wordtour::Tour;

fn doc(label: usize, tokens: Vec<usize>) -> Document {
    Document {
        id: String::new(),
        label,
        tokens,
    }
}

fn random_docs(vocab: usize, count: usize, classes: usize, seed: u64) -> Vec<Document> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let len = r.random_range(1..=20);
            doc(
                r.random_range(0..classes),
                (0..len).map(|_| r.random_range(0..vocab)).collect(),
            )
        })
        .collect()
}

fn shuffled_tour(n: usize, seed: u64) -> Tour {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng(seed));
    Tour::new(order).unwrap()
}

/// Dense blurred BoW written directly from the definition.
fn dense_blur(d: &Document, tour: &Tour, width: usize, variance: f64) -> Vec<f64> {
    let n = tour.len();
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &w) in tour.order().iter().enumerate() {
            p[w] = i;
        }
        p
    };
    let mut v = vec![0.0; n];
    for &t in &d.tokens {
        for (q, slot) in v.iter_mut().enumerate() {
            let gap = pos[t].abs_diff(q);
            let delta = gap.min(n - gap);
            if delta <= width {
                *slot += (-((delta * delta) as f64) / (2.0 * variance)).exp();
            }
        }
    }
    let total: f64 = v.iter().sum();
    v.iter().map(|x| x / total).collect()
}

fn dense_l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Majority vote among the `k` nearest, found by a full sort; vote ties go
/// to the tied label whose best member ranks first.
fn naive_knn(train: &[Vec<f64>], labels: &[usize], query: &[f64], k: usize) -> usize {
    let mut ranked: Vec<(f64, usize)> = train.iter().enumerate().map(|(i, t)| (dense_l1(t, query), i)).collect();
    ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let top = &ranked[..k];
    let count = |l: usize| top.iter().filter(|(_, i)| labels[*i] == l).count();
    let best = top.iter().map(|(_, i)| count(labels[*i])).max().unwrap();
    top.iter().map(|(_, i)| labels[*i]).find(|&l| count(l) == best).unwrap()
}

#[test]
fn single_token_kernel_closed_form() {
    let tour = Tour::identity(9);
    let v = blurred_bow(&doc(0, vec![4]), &tour, 1, 0.5).unwrap();
    let e1 = (-1.0f64).exp();
    let z = 1.0 + 2.0 * e1;
    let expected = [(3, e1 / z), (4, 1.0 / z), (5, e1 / z)];
    assert_eq!(v.entries().len(), 3);
    for ((p, m), (q, want)) in v.entries().iter().zip(expected) {
        assert_eq!(*p, q);
        assert!((m - want).abs() < 1e-15);
    }
}

#[test]
fn sparse_l1_matches_dense_loop() {
    let tour = shuffled_tour(80, 1);
    let docs = random_docs(80, 30, 2, 2);
    for (w, var) in [(3, 1.0), (10, 10.0), (40, 100.0)] {
        for pair in docs.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let sparse = l1_distance(
                &blurred_bow(a, &tour, w, var).unwrap(),
                &blurred_bow(b, &tour, w, var).unwrap(),
            )
            .unwrap();
            let dense = dense_l1(&dense_blur(a, &tour, w, var), &dense_blur(b, &tour, w, var));
            assert!((sparse - dense).abs() <= 1e-9, "w={w} var={var}: {sparse} vs {dense}");
        }
    }
}

#[test]
fn knn_matches_naive_sort() {
    let tour = shuffled_tour(60, 3);
    let docs = random_docs(60, 30, 3, 4);
    let (train, queries) = docs.split_at(20);
    let smoothing = Smoothing::Gaussian {
        width: 4,
        variance: 2.0,
    };
    let builder = BowBuilder::new(&tour, smoothing).unwrap();
    let vecs: Vec<_> = train.iter().map(|d| builder.build(d)).collect();
    let dense: Vec<Vec<f64>> = train.iter().map(|d| dense_blur(d, &tour, 4, 2.0)).collect();
    let labels: Vec<usize> = train.iter().map(|d| d.label).collect();
    for q in queries.iter().chain(train) {
        let qv = builder.build(q);
        let qd = dense_blur(q, &tour, 4, 2.0);
        for k in 1..=19 {
            assert_eq!(
                knn_classify(&vecs, &labels, &qv, k).unwrap(),
                naive_knn(&dense, &labels, &qd, k),
                "k={k}"
            );
        }
    }
}

#[test]
fn vanishing_variance_approaches_bow_distance() {
    let tour = shuffled_tour(50, 5);
    let docs = random_docs(50, 12, 2, 6);
    for a in &docs {
        for b in &docs {
            let blurred = l1_distance(
                &blurred_bow(a, &tour, 10, 1e-6).unwrap(),
                &blurred_bow(b, &tour, 10, 1e-6).unwrap(),
            )
            .unwrap();
            let plain = dense_l1(&bag_of_words(a, &tour).to_dense(), &bag_of_words(b, &tour).to_dense());
            assert!((blurred - plain).abs() <= 1e-6);
        }
    }
}

#[test]
fn blurring_time_is_linear_in_tokens() {
    let tour = shuffled_tour(50_000, 7);
    let builder = BowBuilder::new(
        &tour,
        Smoothing::Gaussian {
            width: 10,
            variance: 10.0,
        },
    )
    .unwrap();
    let mut r = rng(8);
    let mut tokens = |len: usize| doc(0, (0..len).map(|_| r.random_range(0..50_000)).collect());
    let (small, large) = (tokens(20_000), tokens(40_000));
    let time = |d: &Document| {
        (0..5)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(builder.build(d));
                t.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let (ts, tl) = (time(&small), time(&large));
    // ordered-map accumulation adds a log factor, well inside the bound
    assert!(tl <= 2.5 * ts, "doubling tokens took {:.2}x", tl / ts);
}

#[test]
fn separable_training_set_has_zero_cv_error() {
    let tour = Tour::identity(40);
    let mut r = rng(9);
    let docs: Vec<Document> = (0..40)
        .map(|i| {
            let label = i % 2;
            doc(label, (0..6).map(|_| label * 20 + r.random_range(0..20)).collect())
        })
        .collect();
    let cv = cross_validate(&docs, &tour, &CvConfig::blurred(10, 0)).unwrap();
    assert_eq!(cv.best.error, 0.0);
    assert_eq!(cv.model.error_percent(&docs), 0.0);
}

#[test]
fn repeated_documents_pick_smallest_cell() {
    let tour = Tour::identity(30);
    let mut docs = Vec::new();
    for _ in 0..10 {
        docs.push(doc(0, vec![1, 2, 3]));
        docs.push(doc(1, vec![20, 21, 22]));
    }
    let cv = cross_validate(&docs, &tour, &CvConfig::blurred(10, 0)).unwrap();
    assert_eq!(cv.best.error, 0.0);
    assert_eq!(cv.k(), 1);
    assert_eq!(cv.variance(), Some(0.01));
}

#[test]
fn cross_validation_is_deterministic() {
    let tour = shuffled_tour(70, 10);
    let docs = random_docs(70, 60, 3, 11);
    let a = cross_validate(&docs, &tour, &CvConfig::blurred(10, 4)).unwrap();
    let b = cross_validate(&docs, &tour, &CvConfig::blurred(10, 4)).unwrap();
    assert_eq!(a.best, b.best);
    assert_eq!(a.grid, b.grid);
}

#[test]
fn too_few_documents_is_an_error() {
    let docs: Vec<Document> = (0..4).map(|i| doc(i % 2, vec![i])).collect();
    assert!(cross_validate(&docs, &Tour::identity(5), &CvConfig::default()).is_err());
    assert!(KnnModel::fit(BowBuilder::new(&Tour::identity(5), Smoothing::None).unwrap(), &[], 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mass_is_a_distribution(seed in 0u64..10_000, w in 0usize..30, var in 0.001f64..1000.0) {
        let tour = shuffled_tour(45, seed);
        for d in random_docs(45, 5, 1, seed + 1) {
            let v = blurred_bow(&d, &tour, w, var).unwrap();
            let total: f64 = v.entries().iter().map(|e| e.1).sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
            prop_assert!(v.entries().iter().all(|e| e.1 >= 0.0));
        }
    }

    #[test]
    fn depends_only_on_the_multiset(seed in 0u64..10_000) {
        let tour = shuffled_tour(30, seed);
        let d = &random_docs(30, 1, 1, seed)[0];
        let mut permuted = d.clone();
        permuted.tokens.shuffle(&mut rng(seed + 2));
        prop_assert_eq!(blurred_bow(d, &tour, 5, 3.0).unwrap(), blurred_bow(&permuted, &tour, 5, 3.0).unwrap());
    }

    #[test]
    fn token_support_is_bounded(seed in 0u64..10_000, w in 0usize..12) {
        let tour = shuffled_tour(40, seed);
        let t = seed as usize % 40;
        let v = blurred_bow(&doc(0, vec![t]), &tour, w, 50.0).unwrap();
        prop_assert!(v.entries().len() <= 2 * w + 1);
    }

    #[test]
    fn reversal_keeps_distances(seed in 0u64..10_000) {
        let tour = shuffled_tour(35, seed);
        let rev = tour.reversed();
        let docs = random_docs(35, 4, 1, seed + 3);
        for a in &docs {
            for b in &docs {
                let f = l1_distance(&blurred_bow(a, &tour, 6, 4.0).unwrap(), &blurred_bow(b, &tour, 6, 4.0).unwrap()).unwrap();
                let r = l1_distance(&blurred_bow(a, &rev, 6, 4.0).unwrap(), &blurred_bow(b, &rev, 6, 4.0).unwrap()).unwrap();
                prop_assert!((f - r).abs() <= 1e-12);
            }
        }
    }
}
