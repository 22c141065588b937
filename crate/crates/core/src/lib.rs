//! Incomplete LDL^T factorizations for sparse symmetric indefinite and real
//! skew-symmetric matrices.
//!
//! The factorization computes `P S A S P^T ~ L D L^T` column by column in
//! Crout order, where `S` is an equilibration scaling, `P` combines a
//! fill-reducing reordering with the symmetric pivoting swaps, `L` is unit
//! lower triangular and `D` is block diagonal with 1x1 and 2x2 blocks
//! (only 2x2 blocks of the form `[[0, d], [-d, 0]]` in the skew case).
//! The factors precondition SQMR directly, or MINRES after being turned into
//! a positive definite preconditioner.

pub mod error;
pub mod factor;
pub mod preprocess;
pub mod problems;
pub mod solvers;
pub mod storage;
pub mod transform;

pub use error::{IldlError, Result};
pub use factor::{
    fill_of, ildl_factor, ildl_factor_in_place, skew_ildl_factor, Block, BlockDiag, FactorParams,
    Factorization, PivotKind, UnitLowerFactor,
};
pub use preprocess::{
    amd_order, apply_scaling, bunch_equilibrate, rcm_order, ruiz_equilibrate, RuizOutcome,
    ScalingDiag,
};
pub use solvers::{
    minres_solve, sqmr_solve, LdlPreconditioner, LinearOperator, Preconditioner, SolveReport,
    SolveStatus, SolverKind, SolverParams,
};
pub use storage::{load_matrix_market, write_matrix_market, Permutation, SparseSymStore, SymmetryKind};
pub use transform::{spd_transform, SpdFactor, SpdPreconditioner};
