//! Constant diagonals: the finite construction, tail chunks on operator
//! models, and the nested-subspace construction behind convexity.

pub mod chunks;
pub mod fan;
pub mod lemma;
pub mod parker;
pub mod report;

pub use chunks::{chunk_recipe, chunk_selector, constant_diag_basis, ChunkPlan, ChunkRecipe, ConstantDiagonalStream};
pub use fan::{
    affine_normalize, convex_comb_diag, convex_comb_diag_traced, dconst_in_relint_check,
    dconst_in_relint_check_model, fan_construct, fan_construct_traced, fan_construct_with, FanLevel,
};
pub use lemma::{subspace_extension, Extension};
pub use parker::{constant_diag_value, parker_basis, parker_basis_traced};
pub use report::{fan_check, Basis, DiagonalReport, FanCheck};
