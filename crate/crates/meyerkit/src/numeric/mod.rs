//! Exact scalar and matrix arithmetic: the field `Q(sqrt(D))` and integer
//! lattice normal forms. Everything downstream decides on these primitives;
//! no floating point participates in any branch.

mod int_matrix;
mod quad;
mod quad_matrix;

pub use int_matrix::{
    column_lattice_basis, lattice_normal_form, row_hermite_with_transform, smith_with_transforms,
    solve_integer, IntMatrix, IntSolution, LatticeNormalForm, SmithDecomposition,
};
pub use quad::{is_squarefree, QuadExt};
pub use quad_matrix::{
    clear_denominators, rational_coordinate_stack, rational_coordinate_stack_vec, QMatrix,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("discriminant {0} is not squarefree (or is zero)")]
    BadDiscriminant(u64),
    #[error("cannot parse exact scalar from {0:?}")]
    ParseScalar(String),
    #[error("ragged matrix rows")]
    RaggedMatrix,
}

/// Exact sign of a field element: -1, 0 or +1.
pub fn qsign(x: &QuadExt) -> i8 {
    x.sign()
}
