//! Binary multi-precision floats on top of `dashu-float`.

use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

pub type Hp = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION: usize = 128;

pub fn ibig(x: &BigInt) -> IBig {
    let (sign, bytes) = x.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn from_bigint(x: &BigInt, precision: usize) -> Hp {
    Hp::from_parts(ibig(x), 0).with_precision(precision).value()
}

pub fn from_i64(x: i64, precision: usize) -> Hp {
    Hp::from_parts(IBig::from(x), 0).with_precision(precision).value()
}

pub fn from_rational(x: &BigRational, precision: usize) -> Hp {
    let n = from_bigint(x.numer(), precision + 8);
    let d = from_bigint(x.denom(), precision + 8);
    (n / d).with_precision(precision).value()
}

pub fn from_f64(x: f64, precision: usize) -> Hp {
    let r = BigRational::from_float(x).expect("finite float");
    from_rational(&r, precision.max(64))
        .with_precision(precision)
        .value()
}

pub fn to_f64(x: &Hp) -> f64 {
    x.to_f64().value()
}

pub fn sqrt(x: &Hp) -> Hp {
    x.sqrt()
}

pub fn ln(x: &Hp) -> Hp {
    x.ln()
}

pub fn abs(x: &Hp) -> Hp {
    if x.sign() == dashu_base::Sign::Negative {
        -x.clone()
    } else {
        x.clone()
    }
}

/// `|a - b| / |b|` as a float.
pub fn rel_diff(a: &Hp, b: &Hp) -> f64 {
    let diff = abs(&(a - b));
    if b.repr().is_zero() {
        return to_f64(&diff);
    }
    to_f64(&(diff / abs(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_seven() {
        let seven = from_i64(7, 128);
        let s = sqrt(&seven);
        assert!((to_f64(&s) - 7f64.sqrt()).abs() < 1e-15);
        let back = &s * &s;
        assert!(rel_diff(&back, &seven) < 1e-36);
    }

    #[test]
    fn rational_conversion() {
        let r = BigRational::new(BigInt::from(-1), BigInt::from(3));
        let x = from_rational(&r, 200);
        assert!((to_f64(&x) + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(to_f64(&from_f64(0.1, 64)), 0.1);
    }
}
