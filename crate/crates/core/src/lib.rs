//! Zeta-regularized determinants of Dirichlet-to-Neumann maps on surfaces,
//! the Ruelle and Selberg zeta functions of Fuchsian groups, and the
//! identities relating them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod det_engine;
pub mod dn_explicit;
pub mod error;
pub mod hyperbolic;
pub mod numeric_dn;
pub mod report;
pub mod specfun;
pub mod zeta_dyn;
pub mod zeta_reg;

pub use error::{Error, Result};
pub use report::{DetReport, Method};
