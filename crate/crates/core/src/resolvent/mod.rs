//! Neumann-series resolvents of composition operators and the divergence ingredients.

pub mod backward;
pub mod divergence;
pub mod neumann;

pub use backward::{
    backward_orbit, backward_orbit_hp, chain_rule_product, backward_bound_check, psi_quarter, telescoping_product_check,
    BackwardOrbit, ChainRuleCheck, DirectMethod, BackwardBoundReport, OrbitResiduals, TelescopingReport,
};
pub use divergence::{divergence_certificate, divergence_sweep, CertificateStatus, DivergenceReport, PartReport, Slopes};
pub use neumann::{
    neumann_apply, neumann_seminorm_series, regression_slope, NeumannResult, NeumannSolver, ResidualCheck,
    SeriesReport, SeriesVerdict, TailCertificate, PRE_ASYMPTOTIC,
};
