//! Real special functions and quadrature.

pub mod gamma;
pub mod quad;
pub mod weight;

pub use gamma::{
    gamma, ln_gamma, ln_regularized_upper, lower_incomplete_gamma_series, regularized_upper,
    upper_incomplete_gamma,
};
pub use quad::{integrate, Integral, PrecisionBudget, Upper};
pub use weight::{ln_weight_u, weight_for, weight_u, weight_u_odd};
