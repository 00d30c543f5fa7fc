//! Ordered graphs on the lexicographic hypercube and their relative Turán
//! densities.

pub mod appendix;
pub mod binom;
pub mod density;
pub mod error;
pub mod hostgen;
pub mod ordered;
pub mod pattern;
pub mod richness;
pub mod rng;
pub mod tiling;

pub use error::{Error, Result};
