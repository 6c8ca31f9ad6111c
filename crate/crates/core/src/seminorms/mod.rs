//! Gelfand-Shilov seminorms of test functions and of their compositions with polynomial iterates.

pub mod function;
pub mod seminorm;

pub use function::{hermite_gaussian_oracle, hermite_polynomial, Gaussian, Scaled, SmoothFunction, Sum, ZeroFunction};
pub use seminorm::{
    composite_jet, composite_seminorm, envelope_log, fit_envelope, gs_seminorm, Argmax, EnvelopeFit,
    SeminormParams, SeminormResult,
};
