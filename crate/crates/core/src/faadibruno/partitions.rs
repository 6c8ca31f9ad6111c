use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An element `(k_1, ..., k_n)` of `H(n, k)`: `Σ k_l = k` and `Σ l k_l = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicityVector {
    n: usize,
    k: usize,
    m: Vec<u32>,
}

impl MultiplicityVector {
    /// `m[i]` is the multiplicity of the part `i + 1`.
    pub fn new(m: Vec<u32>) -> Result<Self> {
        let n = m.len();
        let k: usize = m.iter().map(|&c| c as usize).sum();
        let weight: usize = m.iter().enumerate().map(|(i, &c)| (i + 1) * c as usize).sum();
        if n == 0 || k == 0 || weight != n {
            return Err(Error::InvalidParameter(format!(
                "multiplicities {m:?} do not describe a partition of their length"
            )));
        }
        Ok(MultiplicityVector { n, k, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.m
    }

    /// Multiplicity of the part `l`, 1-indexed.
    pub fn get(&self, l: usize) -> u32 {
        self.m[l - 1]
    }

    /// Nonzero `(l, k_l)` pairs in increasing `l`.
    pub fn parts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.m
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i + 1, c))
    }
}

/// All of `H(n, k)` in descending lexicographic order.
pub fn enumerate_h(n: usize, k: usize) -> Vec<MultiplicityVector> {
    let mut out = Vec::new();
    if n == 0 || k == 0 || k > n {
        return out;
    }
    let mut m = vec![0u32; n];
    descend(n, 1, n, k, &mut m, &mut out);
    out
}

fn descend(n: usize, l: usize, rest_n: usize, rest_k: usize, m: &mut [u32], out: &mut Vec<MultiplicityVector>) {
    if rest_k == 0 {
        if rest_n == 0 {
            out.push(MultiplicityVector { n, k: m.iter().map(|&c| c as usize).sum(), m: m.to_vec() });
        }
        return;
    }
    if l > n {
        return;
    }
    let max_c = rest_k.min(rest_n / l);
    for c in (0..=max_c).rev() {
        let k2 = rest_k - c;
        let n2 = rest_n - c * l;
        let feasible = if k2 == 0 { n2 == 0 } else { k2 * (l + 1) <= n2 && n2 <= k2 * n };
        if !feasible {
            continue;
        }
        m[l - 1] = c as u32;
        descend(n, l + 1, n2, k2, m, out);
        m[l - 1] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(n: usize, k: usize) -> usize {
        fn rec(l: usize, n: usize, rest_n: usize, rest_k: usize) -> usize {
            if l > n {
                return usize::from(rest_n == 0 && rest_k == 0);
            }
            (0..=rest_k.min(rest_n / l)).map(|c| rec(l + 1, n, rest_n - c * l, rest_k - c)).sum()
        }
        rec(1, n, n, k)
    }

    #[test]
    fn examples() {
        let h = enumerate_h(4, 2);
        let ms: Vec<&[u32]> = h.iter().map(|v| v.multiplicities()).collect();
        assert_eq!(ms, vec![&[1u32, 0, 1, 0][..], &[0, 2, 0, 0][..]]);
        assert!(enumerate_h(3, 5).is_empty());
        let h = enumerate_h(5, 5);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].multiplicities(), &[5, 0, 0, 0, 0]);
        let h = enumerate_h(6, 1);
        assert_eq!(h[0].multiplicities(), &[0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn rejects_invalid() {
        assert!(MultiplicityVector::new(vec![0, 1, 0]).is_err());
        assert!(MultiplicityVector::new(vec![1, 1, 0]).is_ok());
    }

    proptest! {
        #[test]
        fn complete_sorted_and_valid(n in 1usize..16, k in 1usize..16) {
            let h = enumerate_h(n, k);
            prop_assert_eq!(h.len(), brute_force(n, k));
            for w in h.windows(2) {
                prop_assert!(w[0].multiplicities() > w[1].multiplicities());
            }
            for v in &h {
                prop_assert_eq!(MultiplicityVector::new(v.multiplicities().to_vec()).unwrap(), v.clone());
                prop_assert_eq!(v.k(), k);
            }
        }
    }
}
