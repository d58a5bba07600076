//! Dense complex linear algebra: matrices, a Hermitian eigensolver,
//! orthonormal frames and sparse vectors over unbounded index sets.

pub mod eigen;
pub mod frame;
pub mod matrix;
pub mod sparse;

pub use eigen::{herm_eig, HermitianEigen};
pub use frame::{compress, gram_schmidt, householder_complement, OrthonormalFrame, UnitVector};
pub use matrix::{inner, norm, ComplexMatrix, C64};
pub use sparse::{SparseFrame, SparseVector};
