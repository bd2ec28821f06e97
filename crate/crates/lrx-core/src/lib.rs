//! Search, learning and statistics on the LRX Cayley graph of the symmetric
//! group and its balanced-string coset graph.
//!
//! Three generators act on one-line permutations: `L` rotates the contents
//! one position left, `R` one position right, `X` swaps the first two
//! positions. The crate covers exhaustive breadth-first search, value
//! iteration against exact distances, random-walk statistics, a learned
//! distance estimator with beam search on top, constructive solvers and the
//! distributional analysis of layer growth.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod analysis;
pub mod beam;
pub mod bellman;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod perm;
mod rng;
pub mod search;
pub mod solvers;
pub mod space;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{
    coset_long_element, coset_project, dihedral_long_elements, longest_element, neighbors,
    CosetState, GraphKind, GraphSpec, LrxState,
};
pub use perm::{hash_state, GeneratorMove, PackedState, Permutation, Word};
pub use search::{bfs, bfs_full_from, geodesic_ensemble, DistanceTable, LayerProfile};
