//! Exact rational polynomials, root isolation, affine conjugation and orbit evaluation.

pub mod affine;
pub mod kronecker;
pub mod orbit;
pub mod poly;
pub mod roots;

pub use affine::{conjugate_to_monic, AffineMap, MonicConjugation};
pub use orbit::{iterate_eval, OrbitStepper};
pub use poly::{parse_rational, rat, rational_to_f64, serde_rational, Polynomial, DEFAULT_DEGREE_CAP};
pub use roots::{
    certified_minimum, displacement_gap, fixed_points, FixedPointClass, FixedPointReport,
    RealRoots, RootInterval,
};
