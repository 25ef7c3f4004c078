//! Scrambling index, exponent and Boolean rank of primitive 0/1 matrices,
//! with generators and recognizers for the matrices that attain the
//! rank-based scrambling bound `k(M) <= h(b) + 1`.

pub mod boolmat;
pub mod boolrank;
pub mod bounds;
pub mod characterize;
pub mod error;
pub mod families;
pub mod graphprops;
pub mod harness;
pub mod report;
pub mod scramble;

pub use boolmat::{parse_matrix, BoolMatrix, ParseError, Permutation};
pub use error::{Error, Result};
