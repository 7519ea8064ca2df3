//! One-dimensional word embeddings from traveling-salesman tours.
//!
//! A vocabulary of dense vectors is ordered along a short cyclic tour so that
//! neighbors in the order are neighbors in the original space. The crate
//! builds and improves such tours ([`tsp`]), certifies them against a
//! one-tree lower bound ([`bound`]), provides projection-based orderings for
//! comparison ([`baselines`]) and scores orderings through blurred
//! bag-of-words document classification ([`docsim`]).

pub mod baselines;
pub mod bound;
pub mod distance;
pub mod docsim;
pub mod embedding;
pub mod error;
pub mod tour;
pub mod tsp;
pub mod tsplib;

pub use embedding::{load_embeddings, EmbeddingMatrix};
pub use error::{Error, Result};
pub use tour::{read_tour, write_tour, Tour};
