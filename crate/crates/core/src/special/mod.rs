//! Pochhammer symbols, the Gauss function and the two-variable
//! confluent functions that appear in the operator kernels.

pub mod convergence;
pub mod gamma;
pub mod gauss;
pub mod humbert;
pub mod residual;

pub use convergence::{convergence_classification, Convergence, Signature};
pub use gamma::{digamma, gamma, ln_gamma, pochhammer};
pub use gauss::gauss_2f1;
pub use humbert::{f0211, humbert_xi2};
pub use residual::{f0211_system_residual, xi2_system_residual};
