//! Exact-arithmetic mirror-symmetry computations for Calabi-Yau complete
//! intersections: hypergeometric series, Picard-Fuchs operators, mirror maps,
//! Yukawa couplings and instanton numbers.

pub mod cli;
pub mod coupling;
pub mod error;
pub mod models;
pub mod multiparam;
pub mod operator;
pub mod series;

pub use error::{Error, Result};
