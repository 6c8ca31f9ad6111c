//! Orbit evaluation that moves to log space once values leave float range.

use crate::logvalue::LogValue;
use crate::polynomials::poly::{rational_to_f64, Polynomial};

pub const DEFAULT_LOG_THRESHOLD: f64 = 1e100;

/// One step `y -> p(y)` on floats or on log-space values.
#[derive(Clone, Debug)]
pub struct OrbitStepper {
    coeffs: Vec<f64>,
    lead_log: f64,
    lead_sign: i8,
    ratios: Vec<f64>,
    poly: Polynomial,
    log_threshold: f64,
}

impl OrbitStepper {
    pub fn new(p: &Polynomial) -> Self {
        Self::with_threshold(p, DEFAULT_LOG_THRESHOLD)
    }

    pub fn with_threshold(p: &Polynomial, threshold: f64) -> Self {
        let coeffs = p.to_f64_coeffs();
        let lead = coeffs.last().copied().unwrap_or(0.0);
        let ratios = coeffs.iter().map(|c| c / lead).collect();
        OrbitStepper {
            lead_log: lead.abs().ln(),
            lead_sign: if lead > 0.0 { 1 } else { -1 },
            coeffs,
            ratios,
            poly: p.clone(),
            log_threshold: threshold.ln(),
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    fn eval_float(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn step(&self, y: LogValue) -> LogValue {
        if self.coeffs.is_empty() {
            return LogValue::ZERO;
        }
        let n = self.coeffs.len() - 1;
        if y.log_abs() < self.log_threshold {
            let v = self.eval_float(y.to_f64());
            if v.is_finite() {
                return LogValue::from_f64(v);
            }
        }
        if n == 0 {
            return LogValue::from_f64(self.coeffs[0]);
        }
        let l = y.log_abs();
        let s = y.sign();
        let mut rho = 0.0;
        for (k, r) in self.ratios[..n].iter().enumerate() {
            if *r == 0.0 {
                continue;
            }
            let e = (n - k) as i32;
            let sk = if e % 2 == 0 { 1.0 } else { f64::from(s) };
            rho += r * sk * (-(f64::from(e)) * l).exp();
        }
        if rho.abs() > 0.5 {
            return self.poly.eval_log(y);
        }
        let sign_pow = if n.is_multiple_of(2) { 1 } else { s };
        LogValue::new(self.lead_sign * sign_pow, n as f64 * l + self.lead_log + rho.ln_1p())
    }

    /// `p_m(x)` evaluated step by step.
    pub fn iterate(&self, m: usize, x: f64) -> LogValue {
        let mut y = LogValue::from_f64(x);
        for _ in 0..m {
            y = self.step(y);
        }
        y
    }

    /// `[x, p(x), ..., p_m(x)]`.
    pub fn orbit(&self, m: usize, x: f64) -> Vec<LogValue> {
        let mut out = Vec::with_capacity(m + 1);
        let mut y = LogValue::from_f64(x);
        out.push(y);
        for _ in 0..m {
            y = self.step(y);
            out.push(y);
        }
        out
    }
}

/// `p_m(x)` as a log-space value.
pub fn iterate_eval(p: &Polynomial, m: usize, x: f64) -> LogValue {
    if p.is_identity() {
        return LogValue::from_f64(x);
    }
    OrbitStepper::new(p).iterate(m, x)
}

pub fn leading_f64(p: &Polynomial) -> f64 {
    rational_to_f64(&p.leading())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::poly::rat;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let p = Polynomial::quadratic(rat(1, 2));
        let v = iterate_eval(&p, 1, 0.0);
        assert_eq!(v.sign(), 1);
        assert!((v.log_abs() - 0.5f64.ln()).abs() < 1e-15);
        let v = iterate_eval(&p, 30, 2.0);
        assert!(v.log_abs() >= 2f64.powi(29) * 2f64.ln());
        assert!(v.log_abs().is_finite());
        let v = iterate_eval(&Polynomial::x(), 1_000_000, 5.0);
        assert!((v.to_f64() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn log_path_matches_float_path() {
        let p: Polynomial = "1/3,-1,1/2,0,2".parse().unwrap();
        let low = OrbitStepper::with_threshold(&p, 1.0);
        let high = OrbitStepper::new(&p);
        for x in [-1.7, 1.3, 2.9] {
            for m in 1..5 {
                let a = low.iterate(m, x);
                let b = high.iterate(m, x);
                assert_eq!(a.sign(), b.sign());
                assert!((a.log_abs() - b.log_abs()).abs() <= 1e-9 * b.log_abs().abs().max(1.0));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_exact_iterate(
            coeffs in proptest::collection::vec((-6i64..6, 1i64..4), 2..5),
            m in 1usize..6,
            xn in -8i64..8,
        ) {
            let p = Polynomial::new(coeffs.into_iter().map(|(n, d)| rat(n, d)).collect());
            prop_assume!(p.degree().unwrap_or(0) >= 1);
            let deg = p.degree().unwrap();
            prop_assume!(deg.pow(m as u32) <= 256);
            let x = xn as f64 / 4.0;
            let exact = rational_to_f64(&p.iterate(m).unwrap().eval(&rat(xn, 4)));
            prop_assume!(exact.is_finite() && exact.abs() > 1e-6 && exact.abs() < 1e90);
            let v = iterate_eval(&p, m, x);
            prop_assert!((v.to_f64() - exact).abs() <= 1e-8 * exact.abs());
        }
    }
}
