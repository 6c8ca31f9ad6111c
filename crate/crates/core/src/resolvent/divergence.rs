//! Growth comparisons showing that no constant `C` rescues the resolvent in smaller classes.

use crate::error::{Error, Result};
use crate::faadibruno::ln_factorial;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const C_VALUES: [(&str, f64); 3] = [("1", 1.0), ("10", 10.0), ("1e6", 1e6)];
/// Index at which part 2 starts, so that `λ_n = ln n > 1`.
pub const PART2_START: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    /// A crossing was found for every tested `C`.
    Certified,
    /// Some `C` has no crossing up to `n_max`.
    NoCrossing,
    Inconclusive,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slopes {
    /// Least-squares coefficient of `n ln n` in `ln lhs` over `[n/2, n]`.
    pub lhs: BTreeMap<String, f64>,
    pub rhs: BTreeMap<String, f64>,
    /// `ln lhs(n) / (n ln n)`.
    pub lhs_ratio: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub status: CertificateStatus,
    pub message: String,
    #[serde(rename = "n_star_for_C")]
    pub n_star_for_c: BTreeMap<String, Option<u64>>,
    /// `ln lhs - ln rhs` with `C = 1` at `n_max`.
    pub final_log_gap: Option<f64>,
    pub slopes: Option<Slopes>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub d: f64,
    pub d_prime: Option<f64>,
    pub mu_abs: f64,
    pub n_max: u64,
    pub part1: PartReport,
    pub part2: Option<PartReport>,
}

/// `ln(((n+2)^2 / (4μ))^n / μ)`.
pub fn part1_lhs(n: u64, mu: f64) -> f64 {
    let nf = n as f64;
    nf * (2.0 * (nf + 2.0).ln() - (4.0 * mu).ln()) - mu.ln()
}

/// `ln n!^d`.
pub fn part1_rhs(n: u64, d: f64) -> f64 {
    d * ln_factorial(n as usize)
}

/// `ln((nd/(λ_n e))^(nd) (n+2)^(2n) / (4μ)^(n+1))` with `λ_n = ln n`.
pub fn part2_lhs(n: u64, d: f64, mu: f64) -> f64 {
    let nf = n as f64;
    let lambda = nf.ln();
    nf * d * (nf * d / (lambda * std::f64::consts::E)).ln() + 2.0 * nf * (nf + 2.0).ln() - (nf + 1.0) * (4.0 * mu).ln()
}

/// `ln (nd'/e)^(nd')`.
pub fn part2_rhs(n: u64, d_prime: f64) -> f64 {
    let nf = n as f64;
    nf * d_prime * (nf * d_prime / std::f64::consts::E).ln()
}

fn crossings(start: u64, n_max: u64, gap: impl Fn(u64) -> f64 + Sync) -> (BTreeMap<String, Option<u64>>, Option<f64>) {
    let mut out = BTreeMap::new();
    let mut first: Vec<Option<u64>> = vec![None; C_VALUES.len()];
    for n in start..=n_max {
        let g = gap(n);
        for (i, (_, c)) in C_VALUES.iter().enumerate() {
            if first[i].is_none() && g > c.ln() {
                first[i] = Some(n);
            }
        }
        if first.iter().all(Option::is_some) {
            break;
        }
    }
    for (i, (k, _)) in C_VALUES.iter().enumerate() {
        out.insert(k.to_string(), first[i]);
    }
    let fin = if n_max >= start { Some(gap(n_max)) } else { None };
    (out, fin)
}

/// Coefficient of `n ln n` in a least-squares fit of `f` on `{n ln n, n, 1}` over `[n/2, n]`.
pub fn nlogn_slope(n: u64, f: impl Fn(u64) -> f64 + Sync) -> f64 {
    let lo = (n / 2).max(3);
    let k = 200usize.min((n - lo + 1) as usize);
    let ns: Vec<u64> = (0..k).map(|i| lo + ((n - lo) as f64 * i as f64 / (k - 1).max(1) as f64).round() as u64).collect();
    // columns are scaled by n ln n and n at the window end to keep the system well conditioned
    let s1 = n as f64 * (n as f64).ln();
    let s2 = n as f64;
    let a = DMatrix::from_fn(k, 3, |i, j| {
        let x = ns[i] as f64;
        match j {
            0 => x * x.ln() / s1,
            1 => x / s2,
            _ => 1.0,
        }
    });
    let y = DVector::from_iterator(k, ns.iter().map(|&m| f(m) / s1));
    let sol = a.svd(true, true).solve(&y, 1e-15).expect("svd solve");
    sol[0]
}

fn slopes(checkpoints: &[u64], lhs: impl Fn(u64) -> f64 + Sync, rhs: impl Fn(u64) -> f64 + Sync) -> Slopes {
    let mut s = Slopes { lhs: BTreeMap::new(), rhs: BTreeMap::new(), lhs_ratio: BTreeMap::new() };
    for &n in checkpoints {
        if n < 8 {
            continue;
        }
        let key = n.to_string();
        s.lhs.insert(key.clone(), nlogn_slope(n, &lhs));
        s.rhs.insert(key.clone(), nlogn_slope(n, &rhs));
        let nf = n as f64;
        s.lhs_ratio.insert(key, lhs(n) / (nf * nf.ln()));
    }
    s
}

fn status_of(map: &BTreeMap<String, Option<u64>>) -> CertificateStatus {
    if map.values().all(Option::is_some) {
        CertificateStatus::Certified
    } else {
        CertificateStatus::NoCrossing
    }
}

fn not_applicable(message: String) -> PartReport {
    PartReport {
        status: CertificateStatus::NotApplicable,
        message,
        n_star_for_c: BTreeMap::new(),
        final_log_gap: None,
        slopes: None,
    }
}

pub fn divergence_certificate(d: f64, d_prime: Option<f64>, mu_abs: f64, n_max: u64) -> Result<DivergenceReport> {
    if !(mu_abs.is_finite() && mu_abs > 1.0) {
        return Err(Error::Precondition(format!("hypothesis |mu| > 1 violated: mu_abs = {mu_abs}")));
    }
    if !(d.is_finite() && d > 1.0) {
        return Err(Error::Precondition(format!("hypothesis d > 1 violated: d = {d}")));
    }
    if let Some(dp) = d_prime {
        if !(dp.is_finite() && dp > 1.0) {
            return Err(Error::Precondition(format!("hypothesis d' > 1 violated: d' = {dp}")));
        }
        if dp > d + 2.0 {
            return Err(Error::Precondition(format!("hypothesis d' < d + 2 violated: d' = {dp}, d = {d}")));
        }
    }
    if n_max < 8 {
        return Err(Error::InvalidParameter("n_max must be >= 8".into()));
    }
    let mut checkpoints = vec![1000, n_max];
    checkpoints.retain(|&n| n <= n_max);
    checkpoints.dedup();

    let remark = d == 2.0 && mu_abs < (2.0f64).exp() / 4.0;
    let part1 = if (d > 1.0 && d < 2.0) || remark {
        let lhs = move |n: u64| part1_lhs(n, mu_abs);
        let rhs = move |n: u64| part1_rhs(n, d);
        let (map, fin) = crossings(1, n_max, |n| lhs(n) - rhs(n));
        let status = status_of(&map);
        let message = if remark {
            "d = 2 with 1 < |mu| < e^2/4".to_string()
        } else {
            "1 < d < 2".to_string()
        };
        PartReport { status, message, n_star_for_c: map, final_log_gap: fin, slopes: Some(slopes(&checkpoints, lhs, rhs)) }
    } else {
        not_applicable(format!("hypothesis 1 < d < 2 (or d = 2 with 1 < |mu| < e^2/4) not met: d = {d}, mu_abs = {mu_abs}"))
    };

    let part2 = d_prime.map(|dp| {
        let lhs = move |n: u64| part2_lhs(n, d, mu_abs);
        let rhs = move |n: u64| part2_rhs(n, dp);
        if dp == d + 2.0 {
            return PartReport {
                status: CertificateStatus::Inconclusive,
                message: "inconclusive, outside theorem: d' = d + 2, leading slopes tie".into(),
                n_star_for_c: C_VALUES.iter().map(|(k, _)| (k.to_string(), None)).collect(),
                final_log_gap: Some(lhs(n_max) - rhs(n_max)),
                slopes: Some(slopes(&checkpoints, lhs, rhs)),
            };
        }
        let (map, fin) = crossings(PART2_START, n_max, |n| lhs(n) - rhs(n));
        PartReport {
            status: status_of(&map),
            message: "d' < d + 2".into(),
            n_star_for_c: map,
            final_log_gap: fin,
            slopes: Some(slopes(&checkpoints, lhs, rhs)),
        }
    });
    Ok(DivergenceReport { d, d_prime, mu_abs, n_max, part1, part2 })
}

/// Independent parameter sets, evaluated in parallel with input order preserved.
pub fn divergence_sweep(params: &[(f64, Option<f64>, f64)], n_max: u64) -> Vec<Result<DivergenceReport>> {
    params.par_iter().map(|&(d, dp, mu)| divergence_certificate(d, dp, mu, n_max)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn part1_crossing() {
        let r = divergence_certificate(1.5, None, 2.0, 10_000).unwrap();
        assert_eq!(r.part1.status, CertificateStatus::Certified);
        let s = r.part1.slopes.unwrap();
        assert!((s.lhs["10000"] - 2.0).abs() < 0.1, "{:?}", s.lhs);
        assert!((s.rhs["10000"] - 1.5).abs() < 0.1, "{:?}", s.rhs);
    }

    #[test]
    fn remark_case() {
        let r = divergence_certificate(2.0, None, 1.5, 10_000).unwrap();
        assert_eq!(r.part1.status, CertificateStatus::Certified);
        let r = divergence_certificate(2.0, None, 2.0, 10_000).unwrap();
        assert_eq!(r.part1.status, CertificateStatus::NotApplicable);
    }

    #[test]
    fn boundary_and_rejections() {
        let r = divergence_certificate(1.5, Some(3.5), 2.0, 1000).unwrap();
        assert_eq!(r.part2.unwrap().status, CertificateStatus::Inconclusive);
        assert!(divergence_certificate(1.5, Some(4.0), 2.0, 1000).is_err());
        assert!(divergence_certificate(1.5, None, 0.9, 1000).is_err());
        assert!(divergence_certificate(0.5, None, 2.0, 1000).is_err());
    }

    #[test]
    fn lhs_hand_values() {
        // n = 1, μ = 2: ln(9/8) - ln 2
        assert!((part1_lhs(1, 2.0) - ((9.0f64 / 8.0).ln() - 2f64.ln())).abs() < 1e-15);
        assert!((part1_rhs(4, 1.5) - 1.5 * 24f64.ln()).abs() < 1e-12);
    }
}
