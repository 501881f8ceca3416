//! Formal power series, Riordan arrays and their characterizations,
//! lattice-path counting, and sequence transforms, all in exact arithmetic.

pub mod characterization;
pub mod error;
pub mod matrix;
pub mod paths;
pub mod rat;
pub mod reproduce;
pub mod riordan;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, Shape};
pub use rat::Rat;
pub use riordan::{AlmostRiordan, RiordanArray};
pub use series::Series;
