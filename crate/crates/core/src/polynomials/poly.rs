use crate::error::{Error, Result};
use crate::hp::{self, Hp};
use crate::logvalue::{LogSum, LogValue};
use crate::polynomials::kronecker;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_DEGREE_CAP: usize = 4096;

/// Univariate polynomial with exact rational coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/4"`, `"0.3"` or `"2.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if s.contains('/') || !s.contains(['.', 'e', 'E']) {
        let r = BigRational::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        return Ok(r);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let mut num = BigInt::from_str(&digits).map_err(|e| Error::Parse(e.to_string()))?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * p)
    } else {
        BigRational::new(num, p)
    })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = n - d - 60;
    let scaled = if shift >= 0 {
        r / BigRational::from_integer(BigInt::one() << shift as u64)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-shift) as u64)
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn monomial(c: BigRational, power: usize) -> Self {
        let mut v = vec![BigRational::zero(); power + 1];
        v[power] = c;
        Self::new(v)
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// `x^2 + c`.
    pub fn quadratic(c: BigRational) -> Self {
        Self::new(vec![c, BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::x()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn eval_hp(&self, x: &Hp, precision: usize) -> Hp {
        let mut acc = hp::from_i64(0, precision);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + hp::from_rational(c, precision);
        }
        acc
    }

    /// Horner evaluation in log space.
    pub fn eval_log(&self, y: LogValue) -> LogValue {
        let mut acc = LogValue::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * y + LogValue::from_f64(rational_to_f64(c));
        }
        acc
    }

    /// Sum of `c_k y^k` evaluated term by term, returning the value and `ln Σ|c_k y^k|`.
    pub fn eval_log_checked(&self, y: LogValue) -> (LogValue, f64) {
        let mut s = LogSum::new();
        let mut pw = LogValue::ONE;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                pw = pw * y;
            }
            if !c.is_zero() {
                s.push(LogValue::from_f64(rational_to_f64(c)) * pw);
            }
        }
        (s.value(), s.log_abs_sum())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        if n >= self.coeffs.len() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - n);
        for (i, c) in self.coeffs.iter().enumerate().skip(n) {
            let mut f = BigInt::one();
            for j in (i - n + 1)..=i {
                f *= j;
            }
            out.push(c * BigRational::from_integer(f));
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Common denominator and integer numerators.
    pub fn to_integer_parts(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (nums, den)
    }

    pub fn from_integer_parts(nums: Vec<BigInt>, den: &BigInt) -> Self {
        Self::new(
            nums.into_iter()
                .map(|n| BigRational::new(n, den.clone()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, da) = self.to_integer_parts();
        let (b, db) = other.to_integer_parts();
        Self::from_integer_parts(kronecker::mul_int(&a, &b), &(da * db))
    }

    /// `self ∘ q` with the default degree cap.
    pub fn compose(&self, q: &Self) -> Result<Self> {
        self.compose_with_cap(q, DEFAULT_DEGREE_CAP)
    }

    pub fn compose_with_cap(&self, q: &Self, cap: usize) -> Result<Self> {
        let dp = self.degree().unwrap_or(0);
        let dq = q.degree().unwrap_or(0);
        let degree = dp.saturating_mul(dq);
        if degree > cap {
            return Err(Error::CapExceeded { degree, cap });
        }
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone()));
        }
        Ok(acc)
    }

    /// The `m`-fold iterate, `x` for `m = 0`.
    pub fn iterate(&self, m: usize) -> Result<Self> {
        self.iterate_with_cap(m, DEFAULT_DEGREE_CAP)
    }

    pub fn iterate_with_cap(&self, m: usize, cap: usize) -> Result<Self> {
        if m == 0 {
            return Ok(Self::x());
        }
        let d = self.degree().unwrap_or(0);
        if d >= 2 {
            let degree = u32::try_from(m)
                .ok()
                .and_then(|m| d.checked_pow(m))
                .unwrap_or(usize::MAX);
            if degree > cap {
                return Err(Error::CapExceeded { degree, cap });
            }
        }
        let mut acc = self.clone();
        for _ in 1..m {
            acc = self.compose_with_cap(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Exact quotient and remainder over the rationals.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / &lead;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Bound `M` with every real root strictly inside `(-M, M)`.
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        (BigRational::one() + m).ceil() + BigRational::one()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Comma separated coefficients, lowest power first: `"1/2,0,1"`.
impl FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialRepr {
    coeffs: Vec<String>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialRepr { coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Polynomial::new(coeffs))
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::parse_rational;
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quarter() -> Polynomial {
        Polynomial::quadratic(rat(1, 4))
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(quarter().eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(Polynomial::zero().eval(&rat(7, 3)), rat(0, 1));
        assert_eq!(Polynomial::quadratic(rat(1, 2)).eval(&rat(2, 1)), rat(9, 2));
    }

    #[test]
    fn compose_examples() {
        let q = quarter();
        let qq = q.compose(&q).unwrap();
        assert_eq!(qq, "5/16,0,1/2,0,1".parse().unwrap());
        assert_eq!(q.compose(&Polynomial::x()).unwrap(), q);
        let c = rat(3, 7);
        let p = Polynomial::quadratic(c.clone());
        assert_eq!(p.compose(&p).unwrap().eval(&rat(0, 1)), &c * &c + &c);
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(quarter().iterate(0).unwrap(), Polynomial::x());
        assert_eq!(quarter().iterate(2).unwrap(), quarter().compose(&quarter()).unwrap());
        let half = Polynomial::quadratic(rat(1, 2));
        assert_eq!(half.iterate(3).unwrap().eval(&rat(0, 1)), rat(17, 16));
    }

    #[test]
    fn cap_is_enforced() {
        let err = quarter().iterate(13).unwrap_err();
        assert_eq!(err, Error::CapExceeded { degree: 8192, cap: DEFAULT_DEGREE_CAP });
        assert!(quarter().iterate(12).is_ok());
    }

    #[test]
    fn parsing_and_json() {
        let p: Polynomial = "0.25, 0, 1".parse().unwrap();
        assert_eq!(p, quarter());
        assert_eq!(parse_rational("-2.5e-3").unwrap(), rat(-1, 400));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"coeffs":["1/4","0","1"]}"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Polynomial>(r#"{"coeffs":[],"x":1}"#).is_err());
        assert_eq!(p.to_string(), "x^2 + 1/4");
    }

    #[test]
    fn division_round_trip() {
        let a: Polynomial = "1,2,3,4,5".parse().unwrap();
        let b: Polynomial = "-1,0,2".parse().unwrap();
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn large_rational_to_f64() {
        let big = BigRational::from_integer(BigInt::one() << 2000u32);
        assert_eq!(rational_to_f64(&big.recip()), 0.0);
        let x = BigRational::new(BigInt::one() << 1100u32, BigInt::one() << 1099u32);
        assert_eq!(rational_to_f64(&x), 2.0);
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((-20i64..20, 1i64..6), 1..5).prop_map(|v| {
            Polynomial::new(v.into_iter().map(|(n, d)| rat(n, d)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn compose_is_associative(p in small_poly(), q in small_poly(), r in small_poly()) {
            let left = p.compose(&q).unwrap().compose(&r).unwrap();
            let right = p.compose(&q.compose(&r).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn compose_evaluates_pointwise(p in small_poly(), q in small_poly(), n in -9i64..9, d in 1i64..5) {
            let x = rat(n, d);
            prop_assert_eq!(p.compose(&q).unwrap().eval(&x), p.eval(&q.eval(&x)));
        }

        #[test]
        fn iterate_splits(p in small_poly(), m in 0usize..3, n in 0usize..3) {
            let lhs = p.iterate(m + n).unwrap();
            let rhs = p.iterate(m).unwrap().compose(&p.iterate(n).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
