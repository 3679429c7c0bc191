//! Levenshtein-type bounds for spherical codes whose inner products lie in
//! a subinterval `[ℓ, s]` of `[-1, 1]`, and the matching lower bounds for
//! potential energy.

pub mod cli;
pub mod energy;
pub mod error;
pub mod krein;
pub mod levenshtein;
pub mod orthopoly;
pub mod poly;
pub mod real;
pub mod roots;
pub mod signed_ortho;

pub use error::{BoundError, Result};
pub use poly::PolyPower;
pub use real::Real;
