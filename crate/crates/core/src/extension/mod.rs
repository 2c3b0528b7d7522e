//! Abstract kernels, extensions with sections, the central extension model
//! `R x_c G` and the cochains `K`, composition cochain, `theta`, `lambda`, `T`.

mod central;
mod cochains;
mod data;
pub mod fixtures;
mod kernel;
mod spec;

pub use central::{CentralElem, CentralExtensionModel};
pub use cochains::{
    check_kernel_change, composition_cochain, composition_value, gamma_module, lambda_chain, lambda_cochain,
    m2_invariance_defect, pi_module, pullback_scalar, pulled_back_theta, t_chain, t_cochain, theta_chain, theta_cochain,
    ClassCochain, L1ClassModule,
};
pub use data::{section_data, ExtensionData};
pub use spec::parse_kernel_spec;
pub use kernel::{
    check_nonabelian_cocycle, obstruction_coboundary, obstruction_k, AbstractKernel, DefectFn, PsiFn,
};
