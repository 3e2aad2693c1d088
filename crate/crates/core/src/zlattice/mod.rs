//! Finite-index sublattices of Z^d, integer normal forms, quotient groups
//! and their characters.

mod group;
mod lattice;
mod matrix;
mod normal_form;

use num_bigint::BigInt;
use thiserror::Error;

pub use group::{character_value, dual_group, Character, FiniteAbelianGroup, Phase};
pub use lattice::{coset_reps, quotient_group, Lattice};
pub use matrix::{parse_matrix, IntMatrix};
pub use normal_form::{
    hermite_normal_form, in_column_lattice, lattice_basis, smith_normal_form, HermiteDecomposition, SmithDecomposition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("matrix rows have different lengths")]
    RaggedRows,
    #[error("lattice basis must be square and nonempty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("lattice basis is singular")]
    Singular,
    #[error("lattice index does not fit the enumeration range")]
    IndexTooLarge,
    #[error("not a valid invariant factor chain: {0:?}")]
    InvalidInvariantFactors(Vec<BigInt>),
    #[error("element does not belong to the group")]
    InvalidElement,
}
