//! Approximation and exact algorithms for Vertex Cover, Connected Vertex
//! Cover, Set Cover and unit-cost Steiner Tree on dense and subdense
//! instances, with seeded instance generators, brute-force oracles and the
//! reductions between Vertex Cover and Steiner Tree.

pub mod bench;
pub mod cvc;
pub mod error;
pub mod graph;
pub mod io;
pub mod ratio;
pub mod reductions;
pub mod setcover;
pub mod steiner;
pub mod testbed;
pub mod vc;

pub use error::{Error, Result};
pub use graph::{DensityProfile, Graph, GraphBuilder, Vertex};
pub use ratio::{Psi, Rational};
