use num_bigint::BigInt;
use num_traits::One;
use std::sync::{OnceLock, RwLock};

pub const DEFAULT_FACTORIAL_CAP: usize = 10_000;

/// Memoized big-integer factorials up to a cap; larger arguments are computed on demand.
#[derive(Debug)]
pub struct FactorialTable {
    cap: usize,
    table: RwLock<Vec<BigInt>>,
}

impl FactorialTable {
    pub fn new(cap: usize) -> Self {
        FactorialTable { cap, table: RwLock::new(vec![BigInt::one()]) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, n: usize) -> BigInt {
        if n > self.cap {
            let mut f = self.get(self.cap);
            for i in self.cap + 1..=n {
                f *= i;
            }
            return f;
        }
        if let Some(f) = self.table.read().unwrap().get(n) {
            return f.clone();
        }
        let mut t = self.table.write().unwrap();
        while t.len() <= n {
            let next = t.last().unwrap() * t.len();
            t.push(next);
        }
        t[n].clone()
    }
}

fn shared() -> &'static FactorialTable {
    static TABLE: OnceLock<FactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| FactorialTable::new(DEFAULT_FACTORIAL_CAP))
}

pub fn factorial(n: usize) -> BigInt {
    shared().get(n)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `ln n!`, tabulated up to the default cap.
pub fn ln_factorial(n: usize) -> f64 {
    static LOGS: OnceLock<Vec<f64>> = OnceLock::new();
    let logs = LOGS.get_or_init(|| {
        let mut v = Vec::with_capacity(DEFAULT_FACTORIAL_CAP + 1);
        let mut acc = 0.0f64;
        v.push(0.0);
        for i in 1..=DEFAULT_FACTORIAL_CAP {
            acc += (i as f64).ln();
            v.push(acc);
        }
        v
    });
    if let Some(&v) = logs.get(n) {
        return v;
    }
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}
