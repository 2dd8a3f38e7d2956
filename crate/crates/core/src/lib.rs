//! Certificate-producing algorithms around degeneracy of graphs that exclude
//! an induced tree and a complete bipartite subgraph.
//!
//! Every search returns something a third party can check: a degeneracy
//! ordering, a biclique, or an induced copy of a target tree. The checkers
//! live in [`certificate`].

pub mod bitset;
pub mod certificate;
pub mod degeneracy;
pub mod graph;
pub mod grow;
pub mod harness;
pub mod holes;
pub mod io;
pub mod kst;
pub mod search;
pub mod tree;
pub mod uniform;

pub use bitset::Bitset;
pub use certificate::{BicliqueWitness, Certificate, DegeneracyCertificate, InducedEmbedding};
pub use graph::{Graph, Vertex};
pub use search::{Budget, SearchOutcome};
pub use tree::{Pattern, RootedTree};
