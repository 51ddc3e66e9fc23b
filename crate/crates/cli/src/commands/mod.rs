pub mod alg;
pub mod asc;
pub mod catalog;
pub mod cong;
pub mod var;

use std::path::Path;

use asc_core::finalg::FiniteAlgebra;
use asc_core::io;

use crate::{catalog_algebra, Failure};

/// An algebra file path, or `catalog:<name>`.
pub(crate) fn load_algebra(src: &str) -> Result<FiniteAlgebra, Failure> {
    match src.strip_prefix("catalog:") {
        Some(name) => catalog_algebra(name),
        None => Ok(io::read_algebra(Path::new(src))?),
    }
}

pub(crate) fn yes_no(b: bool) -> i32 {
    if b {
        0
    } else {
        1
    }
}
