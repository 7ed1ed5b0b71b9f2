//! Quasi-arithmetic means, their iterated orbits, and sampled checkers for
//! when those orbits fill the convex hull of the starting set.

pub mod conditions;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod means;
pub mod verdict;

pub use error::{Error, ErrorClass, Result};
