//! Spectral sequences of filtered finite complexes over exact fields, and
//! the Hochschild-Serre double complex of a finite extension.

mod complex;
mod field;
mod hs;
mod matrix;
mod pages;
mod random;

pub use complex::{complex_file_field, dump_complex, parse_complex, FilteredComplex, FiniteComplex};
pub use field::{Field, Fp, F2, F3, F5, F7};
pub use hs::{bar_cohomology_dims, hs_double_complex, HsComplex};
pub use matrix::{budget_mb, check_budget, default_budget_mb, Mat, BUDGET_ENV};
pub use pages::{CellSummary, Convergence, Page, PageCell, PageReport, SpectralSequence};
pub use random::{random_filtered_complex, RandomComplexOptions};
