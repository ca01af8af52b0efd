//! Qubit state discrimination primitives: exact 2x2 complex Hermitian
//! linear algebra plus the ensemble, measurement and partition types shared
//! by the discrimination solvers.
//!
//! All types are immutable after construction and every operation is a pure
//! function, so values can be shared freely across threads.

mod error;
mod matrix;
mod states;

pub use error::{CoreError, Result};
pub use matrix::{
    eigen_hermitian, pseudo_inverse_sqrt, support_projection, ComplexMatrix, EigenDecomposition,
    DEGENERACY_TOL, HERMITIAN_TOL, RANK_TOL,
};
pub use states::{
    born_probability, top_eigenprojection, DensityMatrix, Effect, Ensemble, Label, Partition,
    Povm, PovmReport, EFFECT_TOL, POVM_TOL, PROB_TOL, UNIT_TOL,
};
