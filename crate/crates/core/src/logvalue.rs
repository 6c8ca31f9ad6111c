//! Signed numbers stored as `sign * exp(log_abs)`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    sign: i8,
    log_abs: f64,
}

/// `ln(e^a + e^b)`, exact when one side is `-inf`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 + e^l)`.
pub fn log1p_exp(l: f64) -> f64 {
    if l > 40.0 {
        l + (-l).exp().ln_1p()
    } else {
        l.exp().ln_1p()
    }
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { sign: 0, log_abs: f64::NEG_INFINITY };
    pub const ONE: LogValue = LogValue { sign: 1, log_abs: 0.0 };

    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { sign: sign.signum(), log_abs }
        }
    }

    /// Positive value `e^log_abs`.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { sign: if x > 0.0 { 1 } else { -1 }, log_abs: x.abs().ln() }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.sign.abs(), self.log_abs)
    }

    pub fn powi(&self, k: u32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if k.is_multiple_of(2) { self.sign.abs() } else { self.sign };
        Self::new(sign, self.log_abs * f64::from(k))
    }

    pub fn recip(&self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        Self::new(self.sign, -self.log_abs)
    }

    /// `ln(1 + |self|)`.
    pub fn log1p_abs(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            log1p_exp(self.log_abs)
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log_abs.total_cmp(&other.log_abs)
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "exp({})", self.log_abs),
            _ => write!(f, "-exp({})", self.log_abs),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        Self::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        self * rhs.recip()
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue { sign: -self.sign, log_abs: self.log_abs }
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs { (self, rhs) } else { (rhs, self) };
        if big.log_abs == f64::INFINITY {
            return big;
        }
        let r = (small.log_abs - big.log_abs).exp();
        if big.sign == small.sign {
            Self::new(big.sign, big.log_abs + r.ln_1p())
        } else if r >= 1.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.log_abs + (-r).ln_1p())
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

/// Sum of signed log-space terms that also tracks `ln Σ|term|`.
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    pos: f64,
    neg: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum { pos: f64::NEG_INFINITY, neg: f64::NEG_INFINITY }
    }

    pub fn push(&mut self, term: LogValue) {
        match term.sign {
            1 => self.pos = log_add_exp(self.pos, term.log_abs),
            -1 => self.neg = log_add_exp(self.neg, term.log_abs),
            _ => {}
        }
    }

    pub fn value(&self) -> LogValue {
        LogValue::from_log(self.pos) - LogValue::from_log(self.neg)
    }

    /// `ln Σ|term|`, an upper bound for `ln|value|`.
    pub fn log_abs_sum(&self) -> f64 {
        log_add_exp(self.pos, self.neg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert_eq!(LogValue::from_f64(0.0), LogValue::ZERO);
        assert_eq!(LogValue::from_f64(1.0), LogValue::ONE);
        assert_eq!((LogValue::ZERO * LogValue::ONE).sign(), 0);
    }

    #[test]
    fn cancellation_is_zero() {
        let a = LogValue::from_f64(3.5);
        assert!((a - a).is_zero());
    }

    #[test]
    fn single_term_sum_is_exact() {
        let mut s = LogSum::new();
        let t = LogValue::new(-1, 123.456);
        s.push(t);
        assert_eq!(s.value(), t);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_floats(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (la, lb) = (LogValue::from_f64(a), LogValue::from_f64(b));
            let prod = (la * lb).to_f64();
            prop_assert!((prod - a * b).abs() <= 1e-12 * (a * b).abs() + 1e-300);
            let sum = (la + lb).to_f64();
            prop_assert!((sum - (a + b)).abs() <= 1e-9 * (a.abs() + b.abs()) + 1e-300);
        }
    }
}
