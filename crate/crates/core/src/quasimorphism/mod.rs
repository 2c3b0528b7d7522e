//! Brooks counting quasimorphisms, homogenization by stabilization of
//! increments, and homogeneous bounded 2-cocycles.

mod brooks;
mod cocycle;
mod homogenize;
mod spec;

pub use brooks::{brooks_count, defect_estimate, QmEval, Quasimorphism, DEFECT_SAMPLE_LEN};
pub use cocycle::{
    homogeneous_cocycle, homogeneous_representative, pullback_cocycle, CocycleEval, HomogeneousCocycle,
};
pub use homogenize::{homogenize, HomogenizedQm, DEFAULT_NMAX, DEFAULT_WINDOW};
pub(crate) use homogenize::stabilize;
pub use spec::parse_qm_spec;

use crate::group::ReducedWord;

/// Homogeneous cocycle of the Brooks quasimorphism of `word` with default stabilization.
pub fn brooks_cocycle(word: &str) -> crate::Result<HomogeneousCocycle> {
    let w = ReducedWord::parse(word)?;
    homogeneous_cocycle(&Quasimorphism::brooks(&w)?, DEFAULT_WINDOW, DEFAULT_NMAX)
}
