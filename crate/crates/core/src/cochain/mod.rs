//! Cochains with coefficients, coboundaries in both pictures, cup products
//! and the evaluation pairing with l1-chains.

mod bounded;
mod module;
mod pairing;

pub use bounded::{
    coboundary, cup, from_homogeneous, homogeneous_coboundary, to_homogeneous, BoundedCochain, Evaluator,
    HomogeneousCochain, MAX_DEGREE,
};
pub use module::{
    mat_identity, mat_mul, mat_vec, FiniteMatrixModule, FreeMatrixModule, Matrix, Module, TrivialScalar,
};
pub use pairing::{pair, Pairing};

/// Scalar cochains, the kind paired with chains.
pub type ScalarCochain<G> = BoundedCochain<G, TrivialScalar>;
