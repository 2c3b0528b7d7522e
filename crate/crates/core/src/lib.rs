//! Exact cochain-level computations around quasimorphisms on free groups,
//! homogeneous bounded 2-cocycles, the l1-chains `m` and `m2`, abstract
//! kernels of group extensions, and spectral sequences of filtered complexes
//! over exact fields.

pub mod chains;
pub mod check;
pub mod cochain;
pub mod error;
pub mod extension;
pub mod group;
pub mod harness;
pub mod quasimorphism;
pub mod rational;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use rational::Q;
