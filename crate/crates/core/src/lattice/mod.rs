//! Exact integer linear algebra: Hermite and Smith normal forms, kernels,
//! cokernels and lattice membership.

mod group;
mod matrix;
mod normal_form;

pub use group::{cokernel, is_isomorphism, is_well_defined_hom, AbelianGroup, GroupSummary};
pub use matrix::{dot, ints, to_i64, Int, IntMatrix};
pub use normal_form::{
    hnf, in_column_lattice, kernel_basis, rank, row_lattice_basis, same_column_lattice, snf,
    solve_in_span, unimodular_inverse, SmithForm,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
