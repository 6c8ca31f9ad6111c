//! The sets `H(n, k)`, exact lemma checks and the Faà di Bruno engine.

pub mod composite;
pub mod factorials;
pub mod lemmas;
pub mod partitions;

pub use composite::{
    compose_jets_enumerated, compose_jets_log, composite_derivative_exact, composite_derivative_f64,
    polynomial_jet, DerivativeOracle, FaaDiBrunoTable, JetEntry,
};
pub use factorials::{binomial, factorial, ln_factorial, FactorialTable};
pub use lemmas::{
    faa_coefficient, inverse_binomial_recursion_holds, inverse_binomial_sum, power_factorial_check,
    lemma_sweep, partition_factorial_sum, InverseBinomialSum, LemmaRow, ProductInequality,
};
pub use partitions::{enumerate_h, MultiplicityVector};
