//! Bitstrings, lexicographic order, fundamental intervals and the ordered
//! graph types the rest of the crate works on.

mod bitstring;
mod graph;
mod hypercube;
mod interval;
pub mod text;

pub use bitstring::{delta, lex_less, BitString, MAX_DIM};
pub(crate) use bitstring::delta_raw;
pub use graph::OrderedGraph;
pub use hypercube::{tau_level, tau_of_set, HypercubeGraph, LevelProfile, MAX_HYPERCUBE_DIM};
pub use interval::{fundamental_partition, FundamentalInterval};
