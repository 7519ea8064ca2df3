//! Document comparison over a word ordering: blurred bag-of-words vectors,
//! their L1 distance, and kNN classification.

mod bow;
mod corpus;
mod cv;
mod knn;

pub use bow::{bag_of_words, blurred_bow, l1_distance, BlurredBow, BowBuilder, Smoothing, DEFAULT_WIDTH};
pub use corpus::{load_corpus, read_corpus, Corpus, Document, IngestStats, Labels, WordIndex};
pub use cv::{
    cross_validate, fold_assignment, CvConfig, CvOutcome, GridCell, DEFAULT_FOLDS, DEFAULT_KS, DEFAULT_SEED,
    DEFAULT_VARIANCES,
};
pub use knn::{knn_classify, mean_comparison_nanos, rank_neighbors, vote, KnnModel};
