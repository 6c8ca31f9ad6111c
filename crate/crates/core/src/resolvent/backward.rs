//! Backward orbits of `x^2 + 1/4` and the growth facts used against the resolvent.

use crate::error::{Error, Result};
use crate::hp::{self, Hp};
use crate::polynomials::{rat, Polynomial};
use serde::{Deserialize, Serialize};

/// Largest `n` for which the direct side uses the symbolic iterate.
pub const SYMBOLIC_MAX_N: usize = 12;
/// Largest `n` for the finite-difference fallback.
pub const FINITE_DIFFERENCE_MAX_N: usize = 1000;

/// `x_(n+1) = sqrt(x_n - 1/4)` and `y_n = 2 x_n`.
#[derive(Clone, Debug)]
pub struct BackwardOrbit {
    pub x: Vec<Hp>,
    pub y: Vec<Hp>,
    pub precision: usize,
}

pub fn psi_quarter() -> Polynomial {
    Polynomial::quadratic(rat(1, 4))
}

pub fn backward_orbit(x0: f64, n: usize, precision: usize) -> Result<BackwardOrbit> {
    if !(x0.is_finite() && x0 >= 2.0) {
        return Err(Error::Precondition(format!("x0 must be >= 2 (so that y0 = 2 x0 >= 4), got {x0}")));
    }
    backward_orbit_hp(hp::from_f64(x0, precision), n, precision)
}

pub fn backward_orbit_hp(x0: Hp, n: usize, precision: usize) -> Result<BackwardOrbit> {
    let quarter = hp::from_rational(&rat(1, 4), precision);
    let two = hp::from_i64(2, precision);
    if x0 < two {
        return Err(Error::Precondition("x0 must be >= 2 (so that y0 = 2 x0 >= 4)".into()));
    }
    let mut x = Vec::with_capacity(n + 1);
    x.push(x0.with_precision(precision).value());
    for k in 0..n {
        let next = hp::sqrt(&(&x[k] - &quarter));
        x.push(next);
    }
    let y = x.iter().map(|v| v * &two).collect();
    Ok(BackwardOrbit { x, y, precision })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResiduals {
    /// `max |x_(k+1)^2 + 1/4 - x_k| / x_k`.
    pub forward: f64,
    /// `max |y_(k+1)^2 + 1 - 2 y_k| / (2 y_k)`.
    pub y_recurrence: f64,
    pub monotone: bool,
}

impl BackwardOrbit {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn residuals(&self) -> OrbitResiduals {
        let p = self.precision;
        let quarter = hp::from_rational(&rat(1, 4), p);
        let one = hp::from_i64(1, p);
        let two = hp::from_i64(2, p);
        let mut forward = 0.0f64;
        let mut yr = 0.0f64;
        let mut monotone = true;
        for k in 0..self.x.len().saturating_sub(1) {
            forward = forward.max(hp::rel_diff(&(&self.x[k + 1] * &self.x[k + 1] + &quarter), &self.x[k]));
            let lhs = &self.y[k + 1] * &self.y[k + 1] + &one;
            yr = yr.max(hp::rel_diff(&lhs, &(&two * &self.y[k])));
            monotone &= self.x[k + 1] < self.x[k];
        }
        OrbitResiduals { forward, y_recurrence: yr, monotone }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackwardBoundReport {
    pub y0: f64,
    pub n_max: usize,
    pub precision: usize,
    pub holds: bool,
    /// `min_(n>=1) y_n - ((n+2)/(n+1))^2`.
    pub min_slack: f64,
    pub min_slack_at: usize,
    /// `y_0 - 4`; zero when `y_0 = 4`.
    pub slack_at_zero: f64,
}

/// `y_(n+1) = sqrt(2 y_n - 1)` and `y_n >= ((n+2)/(n+1))^2` for `n <= n_max`.
pub fn backward_bound_check(y0: f64, n_max: usize, precision: usize) -> Result<BackwardBoundReport> {
    if !(y0.is_finite() && y0 >= 4.0) {
        return Err(Error::Precondition(format!("y0 must be >= 4, got {y0}")));
    }
    let one = hp::from_i64(1, precision);
    let two = hp::from_i64(2, precision);
    let mut y = hp::from_f64(y0, precision);
    let mut holds = y >= hp::from_i64(4, precision);
    let slack_at_zero = hp::to_f64(&(&y - hp::from_i64(4, precision)));
    let mut min_slack = f64::INFINITY;
    let mut min_slack_at = 0;
    for n in 1..=n_max {
        y = hp::sqrt(&(&two * &y - &one));
        let q = hp::from_rational(&rat(n as i64 + 2, n as i64 + 1), precision);
        let slack = &y - &q * &q;
        holds &= slack.sign() != dashu_base::Sign::Negative;
        let s = hp::to_f64(&slack);
        if s < min_slack {
            min_slack = s;
            min_slack_at = n;
        }
    }
    Ok(BackwardBoundReport { y0, n_max, precision, holds, min_slack, min_slack_at, slack_at_zero })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectMethod {
    Symbolic,
    FiniteDifference,
}

#[derive(Clone, Debug)]
pub struct ChainRuleCheck {
    pub n: usize,
    /// `∏_(k=1)^n y_k`.
    pub product: Hp,
    /// `ψ_n'(x_n)`.
    pub direct: Hp,
    pub rel_diff: f64,
    pub method: DirectMethod,
}

/// Compares `ψ_n'(x_n)` with `∏_(k=1)^n y_k` for `ψ = x^2 + 1/4`.
pub fn chain_rule_product(orbit: &BackwardOrbit, n: usize) -> Result<ChainRuleCheck> {
    if n >= orbit.len() {
        return Err(Error::InvalidParameter(format!("orbit has {} points, need index {n}", orbit.len())));
    }
    if n > FINITE_DIFFERENCE_MAX_N {
        return Err(Error::Unsupported(format!("n = {n} exceeds {FINITE_DIFFERENCE_MAX_N}")));
    }
    let p = orbit.precision;
    let mut product = hp::from_i64(1, p);
    for k in 1..=n {
        product = &product * &orbit.y[k];
    }
    let psi = psi_quarter();
    let (direct, method) = if n <= SYMBOLIC_MAX_N {
        let d = psi.iterate(n)?.derivative();
        (d.eval_hp(&orbit.x[n], p), DirectMethod::Symbolic)
    } else {
        (finite_difference(&psi, n, &orbit.x[n], p), DirectMethod::FiniteDifference)
    };
    let rel_diff = hp::rel_diff(&direct, &product);
    Ok(ChainRuleCheck { n, product, direct, rel_diff, method })
}

fn finite_difference(psi: &Polynomial, n: usize, x: &Hp, precision: usize) -> Hp {
    let wp = precision * 2;
    let h = Hp::from_parts(1.into(), -((precision / 2) as isize)).with_precision(wp).value();
    let x = x.clone().with_precision(wp).value();
    let iterate = |mut v: Hp| {
        for _ in 0..n {
            v = psi.eval_hp(&v, wp);
        }
        v
    };
    let up = iterate(&x + &h);
    let down = iterate(&x - &h);
    let two_h = &h * hp::from_i64(2, wp);
    ((up - down) / two_h).with_precision(precision).value()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TelescopingReport {
    pub n_max: usize,
    pub holds: bool,
    /// `min_n ln ∏ y_k - 2 ln((n+2)/2)`.
    pub min_log_slack: f64,
    pub min_at: usize,
}

/// `∏_(k=1)^n y_k >= ((n+2)/2)^2` for `1 <= n <= n_max`.
pub fn telescoping_product_check(orbit: &BackwardOrbit, n_max: usize) -> Result<TelescopingReport> {
    if n_max >= orbit.len() {
        return Err(Error::InvalidParameter(format!("orbit has {} points, need index {n_max}", orbit.len())));
    }
    let p = orbit.precision;
    let mut product = hp::from_i64(1, p);
    let mut holds = true;
    let mut min_log_slack = f64::INFINITY;
    let mut min_at = 0;
    for n in 1..=n_max {
        product = &product * &orbit.y[n];
        let q = hp::from_rational(&rat(n as i64 + 2, 2), p);
        let bound = &q * &q;
        holds &= product >= bound;
        let s = hp::to_f64(&hp::ln(&(&product / &bound)));
        if s < min_log_slack {
            min_log_slack = s;
            min_at = n;
        }
    }
    Ok(TelescopingReport { n_max, holds, min_log_slack, min_at })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step() {
        let o = backward_orbit(2.0, 200, 128).unwrap();
        assert!((hp::to_f64(&o.x[1]) - 7f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((hp::to_f64(&o.y[1]) - 7f64.sqrt()).abs() < 1e-15);
        assert_eq!(hp::to_f64(&o.y[0]), 4.0);
        assert!(hp::to_f64(&o.x[200]) - 0.5 < 0.01);
        let r = o.residuals();
        assert!(r.forward < 1e-30 && r.y_recurrence < 1e-30 && r.monotone, "{r:?}");
    }

    #[test]
    fn forward_consistency() {
        let o = backward_orbit(3.5, 20, 128).unwrap();
        let psi = psi_quarter();
        for k in 0..20 {
            assert!(hp::rel_diff(&psi.eval_hp(&o.x[k + 1], 128), &o.x[k]) < 1e-30);
        }
    }

    #[test]
    fn rejects_small_start() {
        assert!(backward_orbit(1.9, 3, 128).is_err());
        assert!(backward_bound_check(3.9, 3, 128).is_err());
    }

    #[test]
    fn backward_bound_small() {
        let r = backward_bound_check(4.0, 50, 128).unwrap();
        assert!(r.holds && r.min_slack > 0.0);
        assert_eq!(r.slack_at_zero, 0.0);
    }

    #[test]
    fn chain_rule_small() {
        let o = backward_orbit(2.0, 20, 128).unwrap();
        let c1 = chain_rule_product(&o, 1).unwrap();
        assert!(c1.rel_diff < 1e-30);
        let c3 = chain_rule_product(&o, 3).unwrap();
        assert!(c3.rel_diff < 1e-20);
        let c15 = chain_rule_product(&o, 15).unwrap();
        assert_eq!(c15.method, DirectMethod::FiniteDifference);
        assert!(c15.rel_diff < 1e-15, "{}", c15.rel_diff);
    }
}
