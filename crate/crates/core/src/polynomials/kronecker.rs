//! Integer polynomial multiplication.
//!
//! Small products use the schoolbook method; large ones pack both operands
//! into single big integers (Kronecker substitution) with signed digits.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

const SCHOOLBOOK_LIMIT: usize = 24;

pub fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_LIMIT {
        schoolbook(a, b)
    } else {
        kronecker(a, b)
    }
}

pub fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

fn bit_len(n: usize) -> u64 {
    (usize::BITS - n.leading_zeros()) as u64
}

fn pack(v: &[BigInt], words: usize) -> BigInt {
    let mut pos = vec![0u32; v.len() * words];
    let mut neg = vec![0u32; v.len() * words];
    let mut any_neg = false;
    for (i, c) in v.iter().enumerate() {
        let digits = c.magnitude().to_u32_digits();
        let slot = if c.sign() == Sign::Minus {
            any_neg = true;
            &mut neg
        } else {
            &mut pos
        };
        slot[i * words..i * words + digits.len()].copy_from_slice(&digits);
    }
    let p = BigInt::from(BigUint::new(pos));
    if any_neg {
        p - BigInt::from(BigUint::new(neg))
    } else {
        p
    }
}

fn unpack(r: &BigInt, words: usize, count: usize) -> Vec<BigInt> {
    let negate = r.sign() == Sign::Minus;
    let digits = r.magnitude().to_u32_digits();
    let width = (words * 32) as u64;
    let full = BigInt::one() << width;
    let half = BigInt::one() << (width - 1);
    let mut carry = BigInt::zero();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let lo = (k * words).min(digits.len());
        let hi = ((k + 1) * words).min(digits.len());
        let chunk = BigInt::from(BigUint::from_slice(&digits[lo..hi])) + &carry;
        let c = if chunk >= half {
            carry = BigInt::one();
            chunk - &full
        } else {
            carry = BigInt::zero();
            chunk
        };
        out.push(if negate { -c } else { c });
    }
    out
}

pub fn kronecker(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let bits = max_bits(a) + max_bits(b) + bit_len(a.len().min(b.len())) + 2;
    let words = bits.div_ceil(32) as usize;
    let pa = pack(a, words);
    let pb = pack(b, words);
    unpack(&(pa * pb), words, a.len() + b.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_product() {
        assert_eq!(kronecker(&big(&[1, 1]), &big(&[-1, 1])), big(&[-1, 0, 1]));
        assert_eq!(kronecker(&big(&[0, 0, 3]), &big(&[0, -2])), big(&[0, 0, 0, -6]));
    }

    proptest! {
        #[test]
        fn kronecker_matches_schoolbook(
            a in proptest::collection::vec(any::<i64>(), 1..60),
            b in proptest::collection::vec(any::<i64>(), 1..60),
            shift in 0u32..200,
        ) {
            let a: Vec<BigInt> = a.into_iter().map(|x| BigInt::from(x) << shift).collect();
            let b = big(&b);
            prop_assert_eq!(kronecker(&a, &b), schoolbook(&a, &b));
        }
    }
}
