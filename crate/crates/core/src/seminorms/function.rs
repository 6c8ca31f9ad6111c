//! Test functions with exact derivative oracles.

use crate::logvalue::{log_add_exp, LogValue};
use crate::polynomials::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::{Arc, OnceLock, RwLock};

/// A smooth function known through its derivatives.
pub trait SmoothFunction: Send + Sync {
    fn name(&self) -> String;

    /// `f^(k)(x)` for `k = 0..=n_max`.
    fn derivatives(&self, x: f64, n_max: usize) -> Vec<LogValue>;

    /// Upper bound for `ln|f^(order)(y)|` over all `|y| >= e^log_abs_x`.
    fn decay_log(&self, order: usize, log_abs_x: f64) -> f64;

    /// Upper bound for `ln sup|f|`.
    fn sup_log(&self) -> f64;

    fn derivative(&self, n: usize, x: f64) -> f64 {
        self.derivatives(x, n)[n].to_f64()
    }

    fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
}

/// `f(x) = exp(-(x/scale)^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gaussian {
    scale: f64,
}

/// The Gaussian with derivatives from Hermite polynomials.
pub fn hermite_gaussian_oracle(scale: f64) -> crate::Result<Gaussian> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(crate::Error::InvalidParameter(format!("Gaussian scale must be > 0, got {scale}")));
    }
    Ok(Gaussian { scale })
}

impl Gaussian {
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// `H_k(t)` for `k = 0..=n` as log-space values.
pub fn hermite_values(t: f64, n: usize) -> Vec<LogValue> {
    let mut out = Vec::with_capacity(n + 1);
    if t.abs() <= 1.0 {
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        out.push(LogValue::ONE);
        for k in 0..n {
            let next = 2.0 * t * cur - 2.0 * k as f64 * prev;
            prev = cur;
            cur = next;
            out.push(LogValue::from_f64(cur));
        }
        return out;
    }
    let log2t = (2.0 * t.abs()).ln();
    let inv = 1.0 / (2.0 * t * t);
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    out.push(LogValue::ONE);
    for k in 0..n {
        let next = cur - k as f64 * inv * prev;
        prev = cur;
        cur = next;
        let kk = k + 1;
        let sign = if t < 0.0 && kk % 2 == 1 { -1 } else { 1 };
        let v = LogValue::from_f64(cur);
        out.push(LogValue::new(sign * v.sign(), v.log_abs() + kk as f64 * log2t));
    }
    out
}

/// Exact Hermite polynomial `H_n`, cached.
pub fn hermite_polynomial(n: usize) -> Polynomial {
    static CACHE: OnceLock<RwLock<Vec<Polynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(vec![Polynomial::one(), Polynomial::from_i64s(&[0, 2])]));
    if let Some(p) = cache.read().unwrap().get(n) {
        return p.clone();
    }
    let mut c = cache.write().unwrap();
    while c.len() <= n {
        let k = c.len() - 1;
        let two_x = Polynomial::from_i64s(&[0, 2]);
        let next = two_x
            .mul(&c[k])
            .sub(&c[k - 1].scale(&BigRational::from_integer(BigInt::from(2 * k))));
        c.push(next);
    }
    c[n].clone()
}

impl SmoothFunction for Gaussian {
    fn name(&self) -> String {
        format!("gaussian(scale={})", self.scale)
    }

    fn derivatives(&self, x: f64, n_max: usize) -> Vec<LogValue> {
        let t = x / self.scale;
        let t2 = t * t;
        let ls = self.scale.ln();
        hermite_values(t, n_max)
            .into_iter()
            .enumerate()
            .map(|(k, h)| {
                let sign = if k % 2 == 1 { -h.sign() } else { h.sign() };
                LogValue::new(sign, h.log_abs() - t2 - k as f64 * ls)
            })
            .collect()
    }

    fn decay_log(&self, order: usize, log_abs_x: f64) -> f64 {
        let n = order as f64;
        let t = (log_abs_x - self.scale.ln()).exp();
        let ls = n * self.scale.ln();
        if t > 1e150 {
            f64::NEG_INFINITY
        } else if t >= 1.0 {
            n * (2.0 * t + 2.0 * n).ln() - t * t - ls
        } else {
            n * (2.0 + 2.0 * n).ln() - ls
        }
    }

    fn sup_log(&self) -> f64 {
        0.0
    }
}

/// `f ≡ 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroFunction;

impl SmoothFunction for ZeroFunction {
    fn name(&self) -> String {
        "zero".into()
    }

    fn derivatives(&self, _x: f64, n_max: usize) -> Vec<LogValue> {
        vec![LogValue::ZERO; n_max + 1]
    }

    fn decay_log(&self, _order: usize, _log_abs_x: f64) -> f64 {
        f64::NEG_INFINITY
    }

    fn sup_log(&self) -> f64 {
        f64::NEG_INFINITY
    }
}

/// `c * f`.
#[derive(Clone)]
pub struct Scaled {
    factor: f64,
    inner: Arc<dyn SmoothFunction>,
}

impl Scaled {
    pub fn new(factor: f64, inner: Arc<dyn SmoothFunction>) -> Self {
        Scaled { factor, inner }
    }
}

impl SmoothFunction for Scaled {
    fn name(&self) -> String {
        format!("{}*{}", self.factor, self.inner.name())
    }

    fn derivatives(&self, x: f64, n_max: usize) -> Vec<LogValue> {
        let c = LogValue::from_f64(self.factor);
        self.inner.derivatives(x, n_max).into_iter().map(|v| v * c).collect()
    }

    fn decay_log(&self, order: usize, log_abs_x: f64) -> f64 {
        self.inner.decay_log(order, log_abs_x) + self.factor.abs().ln()
    }

    fn sup_log(&self) -> f64 {
        self.inner.sup_log() + self.factor.abs().ln()
    }
}

/// `f + g`.
#[derive(Clone)]
pub struct Sum {
    left: Arc<dyn SmoothFunction>,
    right: Arc<dyn SmoothFunction>,
}

impl Sum {
    pub fn new(left: Arc<dyn SmoothFunction>, right: Arc<dyn SmoothFunction>) -> Self {
        Sum { left, right }
    }
}

impl SmoothFunction for Sum {
    fn name(&self) -> String {
        format!("{}+{}", self.left.name(), self.right.name())
    }

    fn derivatives(&self, x: f64, n_max: usize) -> Vec<LogValue> {
        let a = self.left.derivatives(x, n_max);
        let b = self.right.derivatives(x, n_max);
        a.into_iter().zip(b).map(|(u, v)| u + v).collect()
    }

    fn decay_log(&self, order: usize, log_abs_x: f64) -> f64 {
        log_add_exp(self.left.decay_log(order, log_abs_x), self.right.decay_log(order, log_abs_x))
    }

    fn sup_log(&self) -> f64 {
        log_add_exp(self.left.sup_log(), self.right.sup_log())
    }
}

/// Exact rational value of `H_n(t)`; used for cross-checks.
pub fn hermite_exact(n: usize, t: &BigRational) -> BigRational {
    hermite_polynomial(n).eval(t)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::rational_to_f64;
    use proptest::prelude::*;

    fn five_point(f: &dyn Fn(f64) -> f64, x: f64, h: f64, order: usize) -> f64 {
        let (a, b, c, d, e) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
        match order {
            1 => (a - 8.0 * b + 8.0 * d - e) / (12.0 * h),
            2 => (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * h * h),
            _ => unreachable!(),
        }
    }

    #[test]
    fn examples() {
        let g = hermite_gaussian_oracle(1.0).unwrap();
        assert!((g.value(0.7) - (-0.49f64).exp()).abs() < 1e-15);
        assert!(g.derivative(1, 0.0).abs() == 0.0);
        assert!((g.derivative(2, 0.0) + 2.0).abs() < 1e-14);
        assert!(hermite_gaussian_oracle(0.0).is_err());
    }

    #[test]
    fn hermite_recurrences_agree() {
        for &t in &[-3.5, -1.0, -0.3, 0.0, 0.8, 1.7, 6.0] {
            let v = hermite_values(t, 30);
            let tr = BigRational::from_float(t).unwrap();
            for (k, h) in v.iter().enumerate() {
                let exact = rational_to_f64(&hermite_exact(k, &tr));
                assert!((h.to_f64() - exact).abs() <= 1e-10 * exact.abs().max(1.0), "t={t} k={k}");
            }
        }
        assert_eq!(hermite_polynomial(2), Polynomial::from_i64s(&[-2, 0, 4]));
    }

    #[test]
    fn decay_bound_holds() {
        let g = hermite_gaussian_oracle(1.5).unwrap();
        for n in 0..12 {
            for &l in &[-2.0f64, 0.0, 0.5, 1.0, 2.0, 3.0] {
                let bound = g.decay_log(n, l);
                for j in 0..200 {
                    let y = l.exp() * (1.0 + j as f64 * 0.05);
                    let d = g.derivatives(y, n)[n];
                    assert!(d.log_abs() <= bound + 1e-12, "n={n} y={y}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matches_finite_differences(x in -3.0f64..3.0, scale in 0.5f64..2.0, n in 0usize..3) {
            let g = hermite_gaussian_oracle(scale).unwrap();
            let f = |y: f64| g.derivative(n, y);
            for order in 1..=2 {
                let fd = five_point(&f, x, 1e-3, order);
                let exact = g.derivative(n + order, x);
                prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{} vs {}", fd, exact);
            }
        }
    }
}
