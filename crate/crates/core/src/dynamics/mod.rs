//! Iterates of fixed-point-free polynomials: lower bounds, derivative growth, orbits and sweeps.

pub mod certificate;
pub mod derivatives;
pub mod jets;
pub mod orbits;
pub mod sweep;

pub use certificate::{
    critical_points, find_m0, find_m0_with, normal_form, verify_iterate_lower_bound, BoundWitness, CertificateOptions,
    IterateBoundCertificate, IterateBoundReport, NormalForm,
};
pub use derivatives::{derivative_growth_ratio, induction_check, DerivativeBoundReport, DerivativeWitness, InductionCheck};
pub use jets::{iterate_jets, iterate_jets_values};
pub use orbits::{cesaro_average, cesaro_ladder, doubling_radius, orbit_classify, OrbitClass};
pub use sweep::{power_bound_seminorm_sweep, SweepReport, SweepRow, OUTSIDE_HYPOTHESIS};
