//! Finite algebra computations for deciding structural completeness and
//! almost structural completeness of finitely generated (quasi)varieties.

pub mod catalog;
pub mod congruence;
pub mod decision;
pub mod error;
pub mod finalg;
pub mod io;
pub mod variety;

pub use error::{Error, Result};
