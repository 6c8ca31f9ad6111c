//! Upper bounds `|ψ_m^(n)(x)| <= C r^n n!^2 (1+|ψ_m(x)|)^α` and their induction form.

use super::certificate::{critical_points, normal_form, CertificateOptions};
use super::jets::iterate_jets;
use crate::error::{Error, Result};
use crate::faadibruno::{composite::SIGN_UNSTABLE_LOG, ln_factorial, polynomial_jet};
use crate::grid::GridSpec;
use crate::logvalue::{LogSum, LogValue};
use crate::polynomials::{certified_minimum, displacement_gap, fixed_points, rational_to_f64, Polynomial};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const RATIO_SCAN: [f64; 4] = [1.5, 2.0, 4.0, 8.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeWitness {
    pub x: f64,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InductionCheck {
    pub p: usize,
    pub c: f64,
    /// `(2p)! c^(2p-1)`, the limit of lhs/rhs in inequality (11) of the induction.
    pub lambda: f64,
    pub x0: f64,
    pub ratio_at_scan_end: f64,
    pub m0: usize,
    pub log_d: f64,
    pub log_r: f64,
    pub m_checked: usize,
    pub holds: bool,
    pub min_margin: f64,
    pub witness: Option<DerivativeWitness>,
    pub sign_unstable: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeBoundReport {
    pub alpha: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub log_c: f64,
    pub r: f64,
    pub max_ratio_observed: f64,
    pub argmax: Option<DerivativeWitness>,
    /// `(r, ln C(r))` for every scanned ratio.
    pub scan: Vec<(f64, f64)>,
    pub n_max: usize,
    pub m_max: usize,
    pub grid: GridSpec,
    pub points_checked: usize,
    pub induction: InductionCheck,
}

fn preconditions(psi: &Polynomial, alpha: f64, n_max: usize, m_max: usize) -> Result<()> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must be > 1, got {alpha}")));
    }
    if n_max < 1 || m_max < 1 {
        return Err(Error::InvalidParameter("n_max and m_max must be >= 1".into()));
    }
    let d = psi.degree().unwrap_or(0);
    if d < 2 || d % 2 == 1 {
        return Err(Error::Unsupported(format!("derivative bounds need even degree >= 2, got {d}")));
    }
    if fixed_points(psi)?.count > 0 {
        return Err(Error::Precondition("polynomial has fixed points".into()));
    }
    Ok(())
}

fn nodes_for(psi: &Polynomial, grid: &GridSpec) -> Vec<f64> {
    let o = CertificateOptions::default();
    grid.clone().with_extra(critical_points(psi, o.critical_depth, o.critical_degree_cap)).nodes()
}

pub fn derivative_growth_ratio(
    psi: &Polynomial,
    alpha: f64,
    n_max: usize,
    m_max: usize,
    grid: &GridSpec,
) -> Result<DerivativeBoundReport> {
    preconditions(psi, alpha, n_max, m_max)?;
    let nodes = nodes_for(psi, grid);
    let ln_fact: Vec<f64> = (0..=n_max).map(ln_factorial).collect();

    // (m, n, ln|ψ_m^(n)| - 2 ln n! - α ln(1+|ψ_m|)) per node, in node order.
    let rows: Vec<Vec<(usize, usize, f64)>> = nodes
        .par_iter()
        .map(|&x| {
            let jets = iterate_jets(psi, x, n_max, m_max);
            let mut v = Vec::new();
            for (m, jet) in jets.iter().enumerate().skip(1) {
                let base = alpha * jet[0].value.log1p_abs();
                for n in 1..=n_max {
                    v.push((m, n, jet[n].value.log_abs() - 2.0 * ln_fact[n] - base));
                }
            }
            v
        })
        .collect();

    let mut scan = Vec::with_capacity(RATIO_SCAN.len());
    let mut best: Option<(f64, f64, Option<DerivativeWitness>)> = None;
    for &r in &RATIO_SCAN {
        let lr = r.ln();
        let mut log_c = f64::NEG_INFINITY;
        let mut arg = None;
        for (row, &x) in rows.iter().zip(&nodes) {
            for &(m, n, l) in row {
                let v = l - n as f64 * lr;
                if v > log_c {
                    log_c = v;
                    arg = Some(DerivativeWitness { x, n, m });
                }
            }
        }
        scan.push((r, log_c));
        if best.as_ref().is_none_or(|b| log_c < b.1) {
            best = Some((r, log_c, arg));
        }
    }
    let (r, log_c, argmax) = best.expect("non-empty scan");
    let induction = induction_check(psi, alpha, n_max, m_max, grid)?;
    Ok(DerivativeBoundReport {
        alpha,
        c: log_c.exp(),
        log_c,
        r,
        max_ratio_observed: log_c.exp(),
        argmax,
        scan,
        n_max,
        m_max,
        grid: grid.clone(),
        points_checked: nodes.len(),
        induction,
    })
}

/// `ln` of the left side of inequality (11) minus `ln` of its right side at `x`.
fn inequality11_log_ratio(phi: &Polynomial, c: f64, alpha: f64, x: f64) -> f64 {
    let deg = phi.degree().unwrap_or(0);
    let jet = polynomial_jet(phi, LogValue::from_f64(x), deg);
    let l1x = (1.0 + x.abs()).ln();
    let mut s = LogSum::new();
    for (k, d) in jet.iter().enumerate().skip(1) {
        s.push(LogValue::from_log((k - 1) as f64 * c.ln() + alpha * k as f64 * l1x + d.log_abs()));
    }
    s.log_abs_sum() - alpha * jet[0].log1p_abs()
}

fn find_x0(phi: &Polynomial, c: f64, alpha: f64) -> Result<(f64, f64)> {
    let pts: Vec<f64> = (0..=600).map(|i| 1e-3 * 10f64.powf(i as f64 * 15.0 / 600.0)).collect();
    let ratios: Vec<f64> = pts.iter().map(|&x| inequality11_log_ratio(phi, c, alpha, x)).collect();
    let end = *ratios.last().unwrap();
    if end > 0.0 {
        return Err(Error::NonConvergent(format!("inequality (11) still fails at x = {:e}", pts[pts.len() - 1])));
    }
    let mut x0 = pts[pts.len() - 1];
    for i in (0..pts.len()).rev() {
        if ratios[i] > 0.0 {
            break;
        }
        x0 = pts[i];
    }
    Ok((x0, end.exp()))
}

/// Checks `|φ_m^(n)(x)| <= c n! r^n n^n (1+|φ_m(x)|)^α` for the monic normal form `φ` with the induction constants.
pub fn induction_check(psi: &Polynomial, alpha: f64, n_max: usize, m_max: usize, grid: &GridSpec) -> Result<InductionCheck> {
    preconditions(psi, alpha, n_max, m_max)?;
    let phi = normal_form(psi)?.phi;
    let two_p = phi.degree().unwrap();
    let p = two_p / 2;
    let lf2p = ln_factorial(two_p);
    let c = 0.25 * (-lf2p / (two_p as f64 - 1.0)).exp();
    let lambda = (lf2p + (two_p as f64 - 1.0) * c.ln()).exp();
    let (x0, ratio_at_scan_end) = find_x0(&phi, c, alpha)?;

    let min_phi = rational_to_f64(&certified_minimum(&phi).expect("even monic").lower);
    let a = rational_to_f64(&displacement_gap(&phi).ok_or_else(|| Error::Invariant("no displacement gap".into()))?);
    let mut m0 = 1 + ((x0 - min_phi) / a).ceil().max(0.0) as usize;
    let mut q = phi.clone();
    for m in 1..m0 {
        if q.degree().unwrap() > 64 {
            break;
        }
        if rational_to_f64(&certified_minimum(&q).unwrap().lower) >= x0 {
            m0 = m;
            break;
        }
        q = phi.compose_with_cap(&q, usize::MAX)?;
    }
    let m_checked = m_max.max(m0);

    let nodes = nodes_for(&phi, grid);
    let ln_fact: Vec<f64> = (0..=n_max).map(ln_factorial).collect();
    let jets: Vec<_> = nodes.par_iter().map(|&x| iterate_jets(&phi, x, n_max, m_checked)).collect();

    let mut log_d = 0.0f64;
    for jet in &jets {
        for m in 1..=m0 {
            let base = alpha * jet[m][0].value.log1p_abs();
            for n in 1..=n_max {
                log_d = log_d.max(jet[m][n].value.log_abs() - base);
            }
        }
    }
    let log_d = log_d + 1e-9;
    let log_r = log_d - c.ln();

    let mut min_margin = f64::INFINITY;
    let mut witness = None;
    let mut sign_unstable = 0;
    for (jet, &x) in jets.iter().zip(&nodes) {
        for m in 1..=m_checked {
            let base = alpha * jet[m][0].value.log1p_abs();
            for n in 1..=n_max {
                let e = jet[m][n];
                if e.cancellation() > SIGN_UNSTABLE_LOG {
                    sign_unstable += 1;
                }
                let lhs = if m > m0 { e.log_abs_sum.max(e.value.log_abs()) } else { e.value.log_abs() };
                let nf = n as f64;
                let rhs = c.ln() + ln_fact[n] + nf * log_r + nf * nf.ln() + base;
                let margin = rhs - lhs;
                if margin < min_margin {
                    min_margin = margin;
                    witness = Some(DerivativeWitness { x, n, m });
                }
            }
        }
    }
    Ok(InductionCheck {
        p,
        c,
        lambda,
        x0,
        ratio_at_scan_end,
        m0,
        log_d,
        log_r,
        m_checked,
        holds: min_margin >= 0.0,
        min_margin,
        witness,
        sign_unstable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::rat;

    #[test]
    fn half_example() {
        let psi = Polynomial::quadratic(rat(1, 2));
        let rep = derivative_growth_ratio(&psi, 2.0, 8, 4, &GridSpec::chebyshev(10.0, 41)).unwrap();
        assert!(rep.max_ratio_observed <= rep.c);
        // n = 1, m = 1, x = 1: 2 / (r (1 + 3/2)^2)
        let r11 = 2.0 / (rep.r * 6.25);
        assert!(r11 <= rep.c);
        assert!(rep.induction.holds, "{:?}", rep.induction);
        assert!(rep.induction.lambda < 1.0);
    }

    #[test]
    fn fixed_points_rejected() {
        let psi = Polynomial::quadratic(rat(-2, 1));
        assert!(matches!(
            derivative_growth_ratio(&psi, 2.0, 4, 2, &GridSpec::default()),
            Err(Error::Precondition(_))
        ));
    }
}
