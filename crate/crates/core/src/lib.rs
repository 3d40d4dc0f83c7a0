//! Numerical certification of reverse operator inequalities.
//!
//! Hermitian functional calculus, positive linear maps, operator means and
//! the Mond-Pečarić family of reverse inequalities, each materialized as a
//! chain of matrices checked step by step in the Loewner order.

pub mod chains;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod means;
pub mod oracle;
pub mod scalar;

pub use chains::{
    check_cell, random_instance, run_instance, Chain, ChainReport, Instance, Options, ResultId, ScalarCheck, Status,
};
pub use error::{Error, Result};
pub use linalg::{loewner_leq, spectral_decompose, HermitianMatrix, OrderVerdict, SpectrumBound};
pub use maps::{apply_map, make_map, MapFamily, MapKind, MapSpec, PositiveLinearMap};
pub use scalar::{ConstantSet, FamilySpec, ScalarFunction};
