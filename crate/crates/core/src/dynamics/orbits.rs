//! Orbit escape classification and Cesàro averages along orbits.

use crate::error::{Error, Result};
use crate::logvalue::LogValue;
use crate::polynomials::{rational_to_f64, OrbitStepper, Polynomial, RealRoots};
use crate::seminorms::SmoothFunction;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

pub const ORBIT_PREFIX_LEN: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub diverges_at: Option<usize>,
    /// Horizon reached without escaping; a hint, not a proof.
    pub bounded_hint: bool,
    /// Escape is certified because the threshold lies beyond the doubling radius.
    pub justified: bool,
    pub doubling_radius: Option<f64>,
    pub orbit_prefix: Vec<f64>,
}

/// Smallest `K` (up to root isolation) with `|ψ(x)| >= 2|x|` for all `|x| >= K`; `None` below degree two.
pub fn doubling_radius(psi: &Polynomial) -> Option<f64> {
    if psi.degree().unwrap_or(0) < 2 {
        return None;
    }
    let two_x = Polynomial::monomial(BigRational::one() + BigRational::one(), 1);
    let mut k = 0.0f64;
    for q in [psi.sub(&two_x), psi.add(&two_x)] {
        for iv in RealRoots::new(&q).intervals() {
            k = k.max(rational_to_f64(&iv.lo.abs().max(iv.hi.abs())));
        }
    }
    Some(k)
}

pub fn orbit_classify(psi: &Polynomial, x: f64, horizon: usize, escape_threshold: f64) -> Result<OrbitClass> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    if !(escape_threshold > 0.0) {
        return Err(Error::InvalidParameter(format!("escape threshold must be > 0, got {escape_threshold}")));
    }
    let k = doubling_radius(psi);
    let stepper = OrbitStepper::new(psi);
    let ln_t = escape_threshold.ln();
    let mut y = LogValue::from_f64(x);
    let mut prefix = vec![x];
    let mut diverges_at = None;
    for m in 1..=horizon {
        y = stepper.step(y);
        if prefix.len() < ORBIT_PREFIX_LEN {
            prefix.push(y.to_f64());
        }
        if y.log_abs() >= ln_t {
            diverges_at = Some(m);
            break;
        }
    }
    Ok(OrbitClass {
        diverges_at,
        bounded_hint: diverges_at.is_none(),
        justified: diverges_at.is_some() && k.is_some_and(|k| escape_threshold >= k),
        doubling_radius: k,
        orbit_prefix: prefix,
    })
}

/// Beyond this `ln|y|` the function is replaced by its decay bound.
const FLOAT_RANGE_LOG: f64 = 700.0;
const UNDERFLOW_LOG: f64 = -800.0;

fn value_at(f: &dyn SmoothFunction, y: LogValue) -> Result<f64> {
    if y.log_abs() < FLOAT_RANGE_LOG {
        return Ok(f.value(y.to_f64()));
    }
    let b = f.decay_log(0, y.log_abs());
    if b < UNDERFLOW_LOG {
        Ok(0.0)
    } else {
        Err(Error::Oracle(format!("{} does not decay below f64 range at |y| = exp({})", f.name(), y.log_abs())))
    }
}

/// `(1/n) Σ_{m=1}^n f(ψ_m(x))`.
pub fn cesaro_average(f: &dyn SmoothFunction, psi: &Polynomial, n: usize, x: f64) -> Result<f64> {
    Ok(cesaro_ladder(f, psi, &[n], x)?[0].1)
}

/// Cesàro averages for several `n`, sharing one orbit.
pub fn cesaro_ladder(f: &dyn SmoothFunction, psi: &Polynomial, ns: &[usize], x: f64) -> Result<Vec<(usize, f64)>> {
    if ns.iter().any(|&n| n < 1) {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let stepper = OrbitStepper::new(psi);
    let mut y = LogValue::from_f64(x);
    let mut partial = Vec::with_capacity(n_max + 1);
    partial.push(0.0f64);
    let mut sum = 0.0;
    let mut settled = false;
    for _ in 1..=n_max {
        if !settled {
            y = stepper.step(y);
        }
        let v = value_at(f, y)?;
        // once escaped far beyond float range the remaining terms are zero
        settled = v == 0.0 && y.log_abs() >= FLOAT_RANGE_LOG;
        sum += v;
        partial.push(sum);
    }
    Ok(ns.iter().map(|&n| (n, partial[n] / n as f64)).collect())
}
