//! Finite combinatorics of graph-like distributions.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`graph`]: bitmask-row simple graphs, embeddings, enumeration of
//!   isomorphism classes, maximal cliques.
//! * [`shapes`]: the tree-comparability and interval-intersection shapes,
//!   their forbidden families, recognizers with certificates and an
//!   endpoint-ordering interval realizer.
//! * [`necessary`]: necessary sets of non-edges for obstruction graphs.
//! * [`distributions`]: finite traces (index set, covering family, g1, g2),
//!   conjugates, property checks and multiplicative-refinement search.
//! * [`ultragraph`]: reduced products over principal families, the η map,
//!   internal sets and lifted maps.
//!
//! Text formats, the CLI and threaded enumeration live in the `ugl` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bits;
pub mod distributions;
pub mod error;
pub mod graph;
pub mod necessary;
pub mod shapes;
pub mod ultragraph;

pub use error::{Error, ErrorKind, Result};
pub use graph::{Embedding, EmbeddingMode, Graph};
