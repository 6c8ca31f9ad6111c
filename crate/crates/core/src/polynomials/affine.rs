use crate::error::{Error, Result};
use crate::polynomials::poly::{rational_to_f64, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `l(x) = alpha * x + beta` with `alpha != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    alpha: BigRational,
    beta: BigRational,
}

impl AffineMap {
    pub fn new(alpha: BigRational, beta: BigRational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidParameter("affine map needs alpha != 0".into()));
        }
        Ok(AffineMap { alpha, beta })
    }

    pub fn identity() -> Self {
        AffineMap { alpha: BigRational::one(), beta: BigRational::zero() }
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_one() && self.beta.is_zero()
    }

    pub fn apply(&self, x: &BigRational) -> BigRational {
        &self.alpha * x + &self.beta
    }

    pub fn inverse(&self) -> Self {
        let a = self.alpha.recip();
        let b = -&self.beta * &a;
        AffineMap { alpha: a, beta: b }
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Self) -> Self {
        AffineMap {
            alpha: &self.alpha * &other.alpha,
            beta: &self.alpha * &other.beta + &self.beta,
        }
    }

    pub fn as_polynomial(&self) -> Polynomial {
        Polynomial::new(vec![self.beta.clone(), self.alpha.clone()])
    }

    /// `l ∘ p ∘ l⁻¹`.
    pub fn conjugate(&self, p: &Polynomial) -> Polynomial {
        let inner = p
            .compose_with_cap(&self.inverse().as_polynomial(), usize::MAX)
            .expect("affine composition keeps the degree");
        self.as_polynomial()
            .compose_with_cap(&inner, usize::MAX)
            .expect("affine composition keeps the degree")
    }
}

#[derive(Serialize, Deserialize)]
struct AffineRepr {
    alpha: String,
    beta: String,
}

impl Serialize for AffineMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AffineRepr { alpha: self.alpha.to_string(), beta: self.beta.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::polynomials::poly::parse_rational;
        let r = AffineRepr::deserialize(d)?;
        let a = parse_rational(&r.alpha).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&r.beta).map_err(serde::de::Error::custom)?;
        AffineMap::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// Result of conjugating an even-degree polynomial to a monic one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonicConjugation {
    pub map: AffineMap,
    pub phi: Polynomial,
    /// The root `b` was rational, so `phi` is exactly monic.
    pub exact: bool,
}

fn exact_root(x: &BigInt, k: u32) -> Option<BigInt> {
    let r = x.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *x).then_some(r)
}

/// Rational `b` with `b^k = a` if one exists (`k` odd).
fn rational_odd_root(a: &BigRational, k: u32) -> Option<BigRational> {
    let n = exact_root(&a.numer().abs(), k)?;
    let d = exact_root(a.denom(), k)?;
    let r = BigRational::new(n, d);
    Some(if a.is_negative() { -r } else { r })
}

pub fn conjugate_to_monic(p: &Polynomial) -> Result<MonicConjugation> {
    let deg = p.degree().unwrap_or(0);
    if deg < 2 || deg % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "monic conjugation needs even degree at least 2, got {deg}"
        )));
    }
    let lead = p.leading();
    if lead.is_one() {
        return Ok(MonicConjugation { map: AffineMap::identity(), phi: p.clone(), exact: true });
    }
    let k = (deg - 1) as u32;
    let (b, exact) = match rational_odd_root(&lead, k) {
        Some(b) => (b, true),
        None => {
            let l = rational_to_f64(&lead);
            let b = l.signum() * l.abs().powf(1.0 / f64::from(k));
            (BigRational::from_float(b).expect("finite root"), false)
        }
    };
    let map = AffineMap::new(b, BigRational::zero())?;
    let phi = map.conjugate(p);
    Ok(MonicConjugation { map, phi, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::poly::rat;

    #[test]
    fn inverse_is_exact() {
        let l = AffineMap::new(rat(-3, 7), rat(5, 2)).unwrap();
        let id = l.then_after(&l.inverse());
        assert!(id.is_identity());
        assert_eq!(l.inverse().apply(&l.apply(&rat(11, 13))), rat(11, 13));
    }

    #[test]
    fn monic_examples() {
        let p = Polynomial::quadratic(rat(1, 2));
        let c = conjugate_to_monic(&p).unwrap();
        assert!(c.map.is_identity());
        assert_eq!(c.phi, p);

        let c = conjugate_to_monic(&Polynomial::monomial(rat(4, 1), 2)).unwrap();
        assert_eq!(c.map.alpha(), &rat(4, 1));
        assert_eq!(c.phi, Polynomial::monomial(rat(1, 1), 2));
        assert!(c.exact);

        let p: Polynomial = "1,0,2,0,3".parse().unwrap();
        let c = conjugate_to_monic(&p).unwrap();
        assert!(!c.exact);
        assert!((rational_to_f64(&c.phi.leading()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn odd_degree_rejected() {
        assert!(matches!(
            conjugate_to_monic(&"0,0,0,1".parse().unwrap()),
            Err(Error::Unsupported(_))
        ));
    }
}
