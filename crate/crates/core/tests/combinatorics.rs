use gs_dynamics::faadibruno::{enumerate_h, faa_coefficient, partition_factorial_sum, factorial};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Stirling numbers of the second kind by `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
fn stirling2(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n_max + 1]; n_max + 1];
    s[0][0] = BigInt::one();
    for n in 1..=n_max {
        for k in 1..=n {
            s[n][k] = BigInt::from(k) * &s[n - 1][k] + &s[n - 1][k - 1];
        }
    }
    s
}

/// Partitions of `n` into exactly `k` parts: `p(n,k) = p(n-1,k-1) + p(n-k,k)`.
fn partitions_exact(n_max: usize) -> Vec<Vec<u64>> {
    let mut p = vec![vec![0u64; n_max + 1]; n_max + 1];
    p[0][0] = 1;
    for n in 1..=n_max {
        for k in 1..=n {
            p[n][k] = p[n - 1][k - 1] + p[n - k][k];
        }
    }
    p
}

#[test]
fn h_sizes_match_partition_counts() {
    let p = partitions_exact(30);
    for n in 1..=30 {
        for k in 1..=n {
            assert_eq!(enumerate_h(n, k).len() as u64, p[n][k], "n={n} k={k}");
        }
    }
}

#[test]
fn faa_coefficients_sum_to_stirling_numbers() {
    let s = stirling2(20);
    for n in 1..=20 {
        for k in 1..=n {
            let total: BigInt = enumerate_h(n, k).iter().map(faa_coefficient).sum();
            assert_eq!(total, s[n][k], "n={n} k={k}");
        }
    }
}

#[test]
fn first_nonzero_coordinate_claim() {
    for n in 2..=20 {
        for k in 2..=n {
            for v in enumerate_h(n, k) {
                let m = v.multiplicities();
                let j = m.iter().position(|&c| c > 0).unwrap() + 1;
                assert!(j < n);
                for l in (n - j + 1)..=n {
                    assert_eq!(m[l - 1], 0, "n={n} k={k} j={j} {m:?}");
                }
                if n - j <= j {
                    assert_eq!(n % 2, 0, "n={n} k={k} j={j}");
                }
            }
        }
    }
}

#[test]
fn reduction_map_lands_in_smaller_set() {
    for n in 3..=16 {
        for k in 2..=n {
            for v in enumerate_h(n, k) {
                let m = v.multiplicities();
                let j = m.iter().position(|&c| c > 0).unwrap() + 1;
                let mut t: Vec<u32> = m[..n - j].to_vec();
                t[j - 1] -= 1;
                let parts: usize = t.iter().sum::<u32>() as usize;
                let weight: usize = t.iter().enumerate().map(|(i, &c)| (i + 1) * c as usize).sum();
                assert_eq!((parts, weight), (k - 1, n - j));
            }
        }
    }
}

#[test]
fn empty_when_n_below_k() {
    assert!(enumerate_h(3, 5).is_empty());
    assert_eq!(partition_factorial_sum(3, 5), BigInt::zero());
}

proptest! {
    #[test]
    fn k_one_equality(n in 1usize..40) {
        prop_assert_eq!(partition_factorial_sum(n, 1), factorial(n));
    }

    #[test]
    fn sum_bounded_by_factorial(n in 2usize..22, k in 2usize..22) {
        prop_assume!(k <= n);
        prop_assert!(partition_factorial_sum(n, k) <= factorial(n));
    }
}
