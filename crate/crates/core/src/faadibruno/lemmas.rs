//! Exact checks of the combinatorial inequalities behind the derivative estimates.

use crate::faadibruno::factorials::{binomial, factorial};
use crate::faadibruno::partitions::{enumerate_h, MultiplicityVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductInequality {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// `Π l^(l k_l)` against `(n^n / n!) Π l!^(k_l)`.
pub fn power_factorial_check(v: &MultiplicityVector) -> ProductInequality {
    let n = v.n();
    let mut lhs = BigInt::one();
    let mut prod_fact = BigInt::one();
    for (l, c) in v.parts() {
        lhs *= num_traits::pow(big(l), l * c as usize);
        prod_fact *= num_traits::pow(factorial(l), c as usize);
    }
    let lhs = BigRational::from_integer(lhs);
    let rhs = BigRational::new(num_traits::pow(big(n), n) * prod_fact, factorial(n));
    let holds = lhs <= rhs;
    ProductInequality { lhs, rhs, holds }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseBinomialSum {
    pub n: usize,
    pub direct: BigRational,
    pub closed_form: BigRational,
}

impl InverseBinomialSum {
    pub fn agree(&self) -> bool {
        self.direct == self.closed_form
    }

    pub fn bounded_by_three(&self) -> bool {
        self.direct <= BigRational::from_integer(big(3))
    }
}

/// `Σ_k 1/C(n,k)` directly and as `(n+1)/2^n Σ_k 2^k/(k+1)`.
pub fn inverse_binomial_sum(n: usize) -> InverseBinomialSum {
    let mut direct = BigRational::zero();
    let mut inner = BigRational::zero();
    for k in 0..=n {
        direct += BigRational::new(BigInt::one(), binomial(n, k));
        inner += BigRational::new(BigInt::one() << k, big(k + 1));
    }
    let closed_form = BigRational::new(big(n + 1), BigInt::one() << n) * inner;
    InverseBinomialSum { n, direct, closed_form }
}

/// `S_n = 1 + (n+1)/(2n) S_(n-1)`, exactly.
pub fn inverse_binomial_recursion_holds(n: usize) -> bool {
    assert!(n >= 2);
    let s = inverse_binomial_sum(n).direct;
    let prev = inverse_binomial_sum(n - 1).direct;
    s == BigRational::one() + BigRational::new(big(n + 1), big(2 * n)) * prev
}

/// `Σ_{H(n,k)} Π l!^(k_l)`; zero (empty sum) when `n < k`.
pub fn partition_factorial_sum(n: usize, k: usize) -> BigInt {
    if n < k {
        log::warn!("H({n},{k}) is empty since n < k; returning the empty sum");
        return BigInt::zero();
    }
    enumerate_h(n, k).iter().map(partition_factorial_product).sum()
}

pub fn partition_factorial_product(v: &MultiplicityVector) -> BigInt {
    v.parts()
        .map(|(l, c)| num_traits::pow(factorial(l), c as usize))
        .product()
}

/// `n! / (Π k_l! Π l!^(k_l))`, always an integer.
pub fn faa_coefficient(v: &MultiplicityVector) -> BigInt {
    let mut den = BigInt::one();
    for (l, c) in v.parts() {
        den *= factorial(c as usize) * num_traits::pow(factorial(l), c as usize);
    }
    let num = factorial(v.n());
    assert!((&num % &den).is_zero(), "non-integral coefficient for {v:?}");
    num / den
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub n: usize,
    pub k: usize,
    pub count: usize,
    pub sum: String,
    pub n_factorial: String,
    pub product_inequality_holds: bool,
    pub holds: bool,
}

/// One row per `(n, k)` with `1 <= k <= n <= n_max`, in that order.
pub fn lemma_sweep(n_max: usize) -> Vec<LemmaRow> {
    let pairs: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    pairs
        .par_iter()
        .map(|&(n, k)| {
            let h = enumerate_h(n, k);
            let sum: BigInt = h.iter().map(partition_factorial_product).sum();
            let nf = factorial(n);
            let product_ok = h.iter().all(|v| power_factorial_check(v).holds);
            let sum_ok = if k == 1 { sum == nf } else { sum <= nf };
            LemmaRow {
                n,
                k,
                count: h.len(),
                sum: sum.to_string(),
                n_factorial: nf.to_string(),
                product_inequality_holds: product_ok,
                holds: product_ok && sum_ok,
            }
        })
        .collect()
}
