//! Constructive 1/e subsidies for minimum spanning trees, and exhaustive
//! all-or-nothing search.

mod aon;
mod levels;

use thiserror::Error;

pub use aon::{min_integral_subsidy_exact, AonSolution, CompiledEnforcement, DEFAULT_CAP};
pub use levels::{
    decompose, enforce_fractional, enforce_level, virtual_cost, FractionalEnforcement, Level, LevelSubsidy,
    FLOAT_TOLERANCE,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnforceError {
    #[error("target tree is not a minimum spanning tree")]
    NotMst,
    #[error("subsidy {y} outside [0, {c}]")]
    OutOfRange { y: String, c: String },
    #[error("edge {0} is not a tree edge")]
    NotTreeEdge(usize),
    #[error("{size} candidate edges exceed the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
}
