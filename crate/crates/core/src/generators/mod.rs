//! Instance families with designated target trees.

mod aon_path;
mod binpack;
mod bypass;
mod cycle;
pub mod dimacs;
mod indepset;
pub mod sat;

use thiserror::Error;

use crate::model::ModelError;

pub use aon_path::{e_hat, gen_aon_path, AonPathInstance};
pub use binpack::{gen_binpack, BinPackInstance};
pub use bypass::{bypass_length, gen_bypass, BypassInstance, BypassSpec};
pub use cycle::{gen_cycle, CycleInstance};
pub use indepset::{classify_branches, gen_indepset, Branch, BranchType, CubicGraph, IndepSetInstance};
pub use sat::{gen_3sat4, LabelConstants, LightCatalog, SatInstance};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("bin packing preconditions violated: {}", .0.join("; "))]
    BinPacking(Vec<String>),
    #[error("graph is not 3-regular: node {node} has degree {degree}")]
    NotCubic { node: usize, degree: usize },
    #[error("nodes {0} and {1} of the chosen set are adjacent")]
    NotIndependent(usize, usize),
    #[error("formula is not 3SAT-4: {0}")]
    NotSat4(String),
    #[error("formula needs label {label}; the smallest supported label is 7 (label {label} would need about {estimate} nodes per clause)")]
    LabelTooSmall { label: usize, estimate: String },
    #[error("item {item} assigned to bin {bin}, but there are only {bins} bins")]
    BadAssignment { item: usize, bin: usize, bins: usize },
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}
