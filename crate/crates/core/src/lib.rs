//! Volterra operators with Humbert Ξ₂ kernels, their inverses, and the
//! Cauchy and Cauchy–Goursat problems of a degenerate hyperbolic equation.

pub mod epd;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod operators;
pub mod params;
pub mod quadrature;
pub mod series;
pub mod special;

pub use epd::{
    cauchy_solution, char_coords, char_to_xy, extrapolate_to_zero, fundamental_relation, gamma2, goursat_solution,
    pde9_residual, recover_density, solution_from_densities, tau_from_density, verify_cauchy_data, CauchyCheckPoint,
    CauchyCheckReport, CauchyData, CharPoint, GoursatData, DEFAULT_LIMIT_EPS,
};
pub use error::{Error, Result};
pub use grid::{uniform_grid, GridFunction, Interpolation};
pub use kernel::{
    e_term, gauss_f_dz, lemma_grid, omega, omega1, tau_prime_expansion, verify_lemma, w_kernel, CancellingSum, KernelSample,
    KernelValue, LemmaReport,
};
pub use operators::{forward_n, inverse_t, roundtrip_check, Direction, RoundtripPoint, RoundtripReport, DEFAULT_DSTEP};
pub use params::{params_from_degeneracy, DegeneracyInput, Parameters, Regime, SignConvention};
pub use quadrature::{GaussJacobi, QuadratureSpec};
pub use series::{HypergeomValue, SeriesControl};
pub use special::*;
