//! Derivatives of compositions `(f ∘ g)^(n)`.

use crate::error::{Error, Result};
use crate::faadibruno::factorials::ln_factorial;
use crate::faadibruno::lemmas::faa_coefficient;
use crate::faadibruno::partitions::enumerate_h;
use crate::logvalue::{LogSum, LogValue};
use crate::polynomials::{rational_to_f64, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::sync::{Arc, OnceLock, RwLock};

/// Supplies `h^(order)(at)`.
pub trait DerivativeOracle<T> {
    fn derivative(&self, order: usize, at: &T) -> Result<T>;
}

impl<T, F> DerivativeOracle<T> for F
where
    F: Fn(usize, &T) -> Result<T>,
{
    fn derivative(&self, order: usize, at: &T) -> Result<T> {
        self(order, at)
    }
}

impl DerivativeOracle<BigRational> for Polynomial {
    fn derivative(&self, order: usize, at: &BigRational) -> Result<BigRational> {
        Ok(self.nth_derivative(order).eval(at))
    }
}

impl DerivativeOracle<f64> for Polynomial {
    fn derivative(&self, order: usize, at: &f64) -> Result<f64> {
        Ok(self.nth_derivative(order).eval_f64(*at))
    }
}

/// One term of the expansion of `(f ∘ g)^(n)`.
#[derive(Clone, Debug)]
pub struct FdbTerm {
    pub k: usize,
    pub parts: Vec<(usize, u32)>,
    pub coeff: BigInt,
    pub coeff_f64: f64,
    pub log_coeff: f64,
}

/// All expansion terms for orders `1..=n_max`, grouped by order.
#[derive(Debug)]
pub struct FaaDiBrunoTable {
    n_max: usize,
    terms: Vec<Vec<FdbTerm>>,
}

impl FaaDiBrunoTable {
    pub fn new(n_max: usize) -> Self {
        let mut terms: Vec<Vec<FdbTerm>> = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let mut v = Vec::new();
                for k in 1..=n {
                    for h in enumerate_h(n, k) {
                        let coeff = faa_coefficient(&h);
                        let coeff_f64 = coeff.to_f64().unwrap_or(f64::INFINITY);
                        v.push(FdbTerm {
                            k,
                            parts: h.parts().collect(),
                            log_coeff: coeff_f64.ln(),
                            coeff_f64,
                            coeff,
                        });
                    }
                }
                v
            })
            .collect();
        terms.shrink_to_fit();
        FaaDiBrunoTable { n_max, terms }
    }

    /// Process-wide table covering at least `n_max`.
    pub fn shared(n_max: usize) -> Arc<FaaDiBrunoTable> {
        static CACHE: OnceLock<RwLock<Option<Arc<FaaDiBrunoTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(None));
        if let Some(t) = cache.read().unwrap().as_ref() {
            if t.n_max >= n_max {
                return t.clone();
            }
        }
        let mut w = cache.write().unwrap();
        if let Some(t) = w.as_ref() {
            if t.n_max >= n_max {
                return t.clone();
            }
        }
        let t = Arc::new(FaaDiBrunoTable::new(n_max));
        *w = Some(t.clone());
        t
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn terms(&self, n: usize) -> &[FdbTerm] {
        &self.terms[n]
    }
}

fn table_for(n: usize) -> Result<Arc<FaaDiBrunoTable>> {
    if n > 200 {
        return Err(Error::InvalidParameter(format!("derivative order {n} is beyond the enumeration limit 200")));
    }
    Ok(FaaDiBrunoTable::shared(n))
}

/// Exact `(f ∘ g)^(n)(x)`; `n = 0` gives `f(g(x))`.
pub fn composite_derivative_exact<F, G>(f: &F, g: &G, n: usize, x: &BigRational) -> Result<BigRational>
where
    F: DerivativeOracle<BigRational> + ?Sized,
    G: DerivativeOracle<BigRational> + ?Sized,
{
    let gx = g.derivative(0, x)?;
    if n == 0 {
        return f.derivative(0, &gx);
    }
    let table = table_for(n)?;
    let inner = (0..=n).map(|l| g.derivative(l, x)).collect::<Result<Vec<_>>>()?;
    let outer = (0..=n).map(|k| f.derivative(k, &gx)).collect::<Result<Vec<_>>>()?;
    let mut acc = BigRational::zero();
    for t in table.terms(n) {
        if outer[t.k].is_zero() {
            continue;
        }
        let mut term = BigRational::from_integer(t.coeff.clone()) * &outer[t.k];
        for &(l, c) in &t.parts {
            term *= num_traits::pow(inner[l].clone(), c as usize);
        }
        acc += term;
    }
    Ok(acc)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Floating point `(f ∘ g)^(n)(x)` with compensated summation.
pub fn composite_derivative_f64<F, G>(f: &F, g: &G, n: usize, x: f64) -> Result<f64>
where
    F: DerivativeOracle<f64> + ?Sized,
    G: DerivativeOracle<f64> + ?Sized,
{
    let gx = g.derivative(0, &x)?;
    if n == 0 {
        return f.derivative(0, &gx);
    }
    let table = table_for(n)?;
    let inner = (0..=n).map(|l| g.derivative(l, &x)).collect::<Result<Vec<_>>>()?;
    let outer = (0..=n).map(|k| f.derivative(k, &gx)).collect::<Result<Vec<_>>>()?;
    let mut acc = CompensatedSum::default();
    for t in table.terms(n) {
        if outer[t.k] == 0.0 {
            continue;
        }
        let mut term = t.coeff_f64 * outer[t.k];
        for &(l, c) in &t.parts {
            term *= inner[l].powi(c as i32);
        }
        acc.add(term);
    }
    Ok(acc.value())
}

/// A derivative in log space with `ln Σ|terms|` for cancellation checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JetEntry {
    pub value: LogValue,
    pub log_abs_sum: f64,
}

impl JetEntry {
    pub fn exact(value: LogValue) -> Self {
        JetEntry { value, log_abs_sum: value.log_abs() }
    }

    /// `ln(Σ|terms| / |value|)`; large values mean the sign or leading digits are unreliable.
    pub fn cancellation(&self) -> f64 {
        if self.value.is_zero() {
            if self.log_abs_sum == f64::NEG_INFINITY {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.log_abs_sum - self.value.log_abs()
        }
    }
}

/// Cancellation above which a log-space sum is reported as sign-unstable (about ten digits).
pub const SIGN_UNSTABLE_LOG: f64 = 23.0;

/// `(f ∘ g)^(n)(x)` for `n = 0..=n_max` from the jets `outer[k] = f^(k)(g(x))` and `inner[l] = g^(l)(x)`,
/// by summing over the enumerated sets `H(n, k)`.
pub fn compose_jets_enumerated(table: &FaaDiBrunoTable, outer: &[LogValue], inner: &[LogValue]) -> Vec<JetEntry> {
    let n_max = (outer.len().min(inner.len()) - 1).min(table.n_max());
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(JetEntry::exact(outer[0]));
    for n in 1..=n_max {
        let mut s = LogSum::new();
        for t in table.terms(n) {
            let o = outer[t.k];
            if o.is_zero() {
                continue;
            }
            let mut sign = o.sign();
            let mut log = o.log_abs() + t.log_coeff;
            for &(l, c) in &t.parts {
                let g = inner[l];
                if g.is_zero() {
                    sign = 0;
                    break;
                }
                if c % 2 == 1 {
                    sign *= g.sign();
                }
                log += f64::from(c) * g.log_abs();
            }
            s.push(LogValue::new(sign, log));
        }
        out.push(JetEntry { value: s.value(), log_abs_sum: s.log_abs_sum() });
    }
    out
}

/// Same as [`compose_jets_enumerated`] through the partial Bell polynomial recurrence
/// `B(n,k) = Σ_i C(n-1,i-1) g_i B(n-i,k-1)`, which needs `O(n^2 k)` work.
pub fn compose_jets_log(outer: &[LogValue], inner: &[LogValue]) -> Vec<JetEntry> {
    let n_max = outer.len().min(inner.len()) - 1;
    let k_max = outer
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, _)| k)
        .max()
        .unwrap_or(0)
        .min(n_max);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(JetEntry::exact(outer[0]));
    if k_max == 0 {
        out.extend((1..=n_max).map(|_| JetEntry::exact(LogValue::ZERO)));
        return out;
    }
    let width = k_max + 1;
    let mut bell = vec![LogValue::ZERO; (n_max + 1) * width];
    let mut bell_abs = vec![f64::NEG_INFINITY; (n_max + 1) * width];
    bell[0] = LogValue::ONE;
    bell_abs[0] = 0.0;
    let ln_binom = |a: usize, b: usize| ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b);
    for n in 1..=n_max {
        for k in 1..=k_max.min(n) {
            let mut s = LogSum::new();
            let mut abs = f64::NEG_INFINITY;
            for i in 1..=(n - k + 1) {
                let g = inner[i];
                let b = bell[(n - i) * width + k - 1];
                if g.is_zero() || b.is_zero() {
                    continue;
                }
                let c = ln_binom(n - 1, i - 1);
                s.push(LogValue::new(g.sign() * b.sign(), c + g.log_abs() + b.log_abs()));
                abs = crate::logvalue::log_add_exp(abs, c + g.log_abs() + bell_abs[(n - i) * width + k - 1]);
            }
            bell[n * width + k] = s.value();
            bell_abs[n * width + k] = abs;
        }
        let mut s = LogSum::new();
        let mut abs = f64::NEG_INFINITY;
        for k in 1..=k_max.min(n) {
            let o = outer[k];
            if o.is_zero() {
                continue;
            }
            s.push(o * bell[n * width + k]);
            abs = crate::logvalue::log_add_exp(abs, o.log_abs() + bell_abs[n * width + k]);
        }
        out.push(JetEntry { value: s.value(), log_abs_sum: abs });
    }
    out
}

/// Jet `p^(k)(y)` for `k = 0..=n_max` in log space.
pub fn polynomial_jet(p: &Polynomial, y: LogValue, n_max: usize) -> Vec<LogValue> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut d = p.clone();
    for k in 0..=n_max {
        if d.is_zero() {
            out.push(LogValue::ZERO);
            continue;
        }
        out.push(d.eval_log(y));
        if k < n_max {
            d = d.derivative();
        }
    }
    out
}

/// Jet of the identity map at `x`.
pub fn identity_jet(x: f64, n_max: usize) -> Vec<LogValue> {
    let mut v = vec![LogValue::ZERO; n_max + 1];
    v[0] = LogValue::from_f64(x);
    if n_max >= 1 {
        v[1] = LogValue::ONE;
    }
    v
}

pub fn rational_jet(p: &Polynomial, x: &BigRational, n_max: usize) -> Vec<LogValue> {
    (0..=n_max)
        .map(|k| LogValue::from_f64(rational_to_f64(&p.nth_derivative(k).eval(x))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::rat;

    #[test]
    fn quarter_squared_second_derivative() {
        let f = Polynomial::quadratic(rat(1, 4));
        let v = composite_derivative_exact(&f, &f, 2, &rat(1, 1)).unwrap();
        assert_eq!(v, rat(13, 1));
        let direct = f.compose(&f).unwrap().nth_derivative(2).eval(&rat(1, 1));
        assert_eq!(v, direct);
    }

    #[test]
    fn identity_inner_returns_outer() {
        let f: Polynomial = "1,-2,3,0,5,1/7".parse().unwrap();
        for n in 1..7 {
            let v = composite_derivative_exact(&f, &Polynomial::x(), n, &rat(2, 3)).unwrap();
            assert_eq!(v, f.nth_derivative(n).eval(&rat(2, 3)));
        }
    }

    #[test]
    fn closure_oracle() {
        let exp = |_: usize, x: &f64| -> Result<f64> { Ok(x.exp()) };
        let g = Polynomial::quadratic(rat(0, 1));
        let v = composite_derivative_f64(&exp, &g, 1, 0.5).unwrap();
        assert!((v - 0.25f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn bell_recurrence_matches_enumeration() {
        let table = FaaDiBrunoTable::shared(18);
        let f: Vec<LogValue> = (0..=18).map(|k| LogValue::from_f64(((k as f64) * 0.7).sin() + 0.1)).collect();
        let g: Vec<LogValue> = (0..=18).map(|k| LogValue::from_f64(((k as f64) * 1.3).cos() * 2.0)).collect();
        let a = compose_jets_enumerated(&table, &f, &g);
        let b = compose_jets_log(&f, &g);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.value.sign(), y.value.sign());
            assert!((x.value.log_abs() - y.value.log_abs()).abs() < 1e-9 * (1.0 + x.value.log_abs().abs()));
            assert!((x.log_abs_sum - y.log_abs_sum).abs() < 1e-9 * (1.0 + x.log_abs_sum.abs()));
        }
    }
}
