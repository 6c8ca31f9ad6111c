//! Real root isolation with Sturm sequences over the integers.

use crate::polynomials::poly::{rational_to_f64, Polynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A real root in `(lo, hi]`, or exactly `lo` when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn exact(x: BigRational) -> Self {
        RootInterval { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

#[derive(Serialize, Deserialize)]
struct RootIntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for RootInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RootIntervalRepr { lo: self.lo.to_string(), hi: self.hi.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootInterval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use crate::polynomials::poly::parse_rational;
        let r = RootIntervalRepr::deserialize(d)?;
        let lo = parse_rational(&r.lo).map_err(serde::de::Error::custom)?;
        let hi = parse_rational(&r.hi).map_err(serde::de::Error::custom)?;
        Ok(RootInterval { lo, hi })
    }
}

type IntPoly = Vec<BigInt>;

fn trim(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(v: IntPoly) -> IntPoly {
    let g = content(&v);
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn int_derivative(v: &[BigInt]) -> IntPoly {
    trim(v.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Remainder of `a` by `b` scaled by a positive factor.
fn pos_prem(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: IntPoly = a.to_vec();
    let mut flips = false;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, c) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * c;
        }
        r = trim(r);
        if lb.is_negative() {
            flips = !flips;
        }
    }
    if flips {
        r = r.into_iter().map(|c| -c).collect();
    }
    primitive(r)
}

fn int_gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut x = primitive(a.to_vec());
    let mut y = primitive(b.to_vec());
    while !y.is_empty() {
        let r = pos_prem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn to_int(p: &Polynomial) -> IntPoly {
    primitive(trim(p.to_integer_parts().0))
}

fn from_int(v: &[BigInt]) -> Polynomial {
    Polynomial::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Sign of `v(x)` for rational `x`.
fn sign_at(v: &[BigInt], x: &BigRational) -> i8 {
    if v.is_empty() {
        return 0;
    }
    let (p, q) = (x.numer(), x.denom());
    let n = v.len() - 1;
    let mut acc = v[n].clone();
    let mut qpow = BigInt::one();
    for i in (0..n).rev() {
        qpow *= q;
        acc = acc * p + &v[i] * &qpow;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn sign_at_infinity(v: &[BigInt], positive: bool) -> i8 {
    let lead = if v.last().unwrap().is_positive() { 1 } else { -1 };
    if positive || (v.len() - 1).is_multiple_of(2) {
        lead
    } else {
        -lead
    }
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Sturm chain of a square-free polynomial and its isolated real roots.
#[derive(Clone, Debug)]
pub struct RealRoots {
    base: IntPoly,
    chain: Vec<IntPoly>,
    roots: Vec<RootInterval>,
}

impl RealRoots {
    pub fn new(p: &Polynomial) -> Self {
        assert!(!p.is_zero(), "root isolation of the zero polynomial");
        let v = to_int(p);
        let base = if v.len() <= 2 {
            v
        } else {
            let g = int_gcd(&v, &int_derivative(&v));
            if g.len() > 1 {
                to_int(&from_int(&v).div_rem(&from_int(&g)).0)
            } else {
                v
            }
        };
        let mut chain = vec![base.clone()];
        if base.len() > 1 {
            chain.push(primitive(int_derivative(&base)));
            while chain.last().unwrap().len() > 1 {
                let n = chain.len();
                let r = pos_prem(&chain[n - 2], &chain[n - 1]);
                if r.is_empty() {
                    break;
                }
                chain.push(r.into_iter().map(|c| -c).collect());
            }
        }
        let mut out = RealRoots { base, chain, roots: Vec::new() };
        out.roots = out.isolate();
        out
    }

    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn intervals(&self) -> &[RootInterval] {
        &self.roots
    }

    /// Square-free primitive integer polynomial with the same real roots.
    pub fn square_free(&self) -> Polynomial {
        from_int(&self.base)
    }

    fn variations(&self, x: &BigRational) -> usize {
        count_changes(self.chain.iter().map(|q| sign_at(q, x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        count_changes(self.chain.iter().map(|q| sign_at_infinity(q, positive)))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations(a) - self.variations(b)
    }

    pub fn count_total(&self) -> usize {
        if self.base.len() <= 1 {
            return 0;
        }
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    fn isolate(&self) -> Vec<RootInterval> {
        if self.base.len() <= 1 || self.count_total() == 0 {
            return Vec::new();
        }
        if self.base.len() == 2 {
            let r = BigRational::new(-self.base[0].clone(), self.base[1].clone());
            return vec![RootInterval::exact(r)];
        }
        let m = from_int(&self.base).cauchy_bound();
        let two = BigRational::from_integer(BigInt::from(2));
        let mut out = Vec::new();
        let mut stack = vec![(-m.clone(), m.clone(), self.count_in(&-m.clone(), &m))];
        while let Some((lo, hi, c)) = stack.pop() {
            match c {
                0 => {}
                1 => {
                    if sign_at(&self.base, &hi) == 0 {
                        out.push(RootInterval::exact(hi));
                    } else {
                        out.push(RootInterval { lo, hi });
                    }
                }
                _ => {
                    let mid = (&lo + &hi) / &two;
                    let left = self.count_in(&lo, &mid);
                    stack.push((mid.clone(), hi, c - left));
                    stack.push((lo, mid, left));
                }
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// Shrinks an isolating interval below `width`, snapping to a rational root when one is found.
    pub fn refine(&self, iv: &RootInterval, width: &BigRational) -> RootInterval {
        let mut lo = iv.lo.clone();
        let mut hi = iv.hi.clone();
        let two = BigRational::from_integer(BigInt::from(2));
        let mut step = 0usize;
        while lo != hi && &(&hi - &lo) > width {
            if step.is_multiple_of(8) {
                let cand = simplest_between(&lo, &hi);
                if cand > lo && sign_at(&self.base, &cand) == 0 {
                    return RootInterval::exact(cand);
                }
            }
            step += 1;
            let mid = (&lo + &hi) / &two;
            if sign_at(&self.base, &mid) == 0 {
                return RootInterval::exact(mid);
            }
            if self.count_in(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if lo != hi {
            let cand = simplest_between(&lo, &hi);
            if cand > lo && sign_at(&self.base, &cand) == 0 {
                return RootInterval::exact(cand);
            }
        }
        RootInterval { lo, hi }
    }

    pub fn refined(&self, width: &BigRational) -> Vec<RootInterval> {
        self.roots.iter().map(|iv| self.refine(iv, width)).collect()
    }
}

/// Rational with the smallest denominator in `[a, b]`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    if a > b {
        return simplest_between(b, a);
    }
    if b.is_negative() {
        return -simplest_between(&-b.clone(), &-a.clone());
    }
    if !a.is_positive() {
        return BigRational::zero();
    }
    let fa = a.floor();
    if &fa == a {
        return fa;
    }
    let next = &fa + BigRational::one();
    if &next <= b {
        return next;
    }
    let inner = simplest_between(&(b - &fa).recip(), &(a - &fa).recip());
    fa + inner.recip()
}

/// Enclosure of `p` over `[lo, hi]` by interval Horner evaluation.
pub fn eval_interval(p: &Polynomial, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in p.coeffs().iter().rev() {
        let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// Certified lower bound for the global minimum of `p`, with an approximate minimizer.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub lower: BigRational,
    pub at: f64,
}

/// Lower bound on `inf p` over the reals; `None` when `p` is unbounded below.
pub fn certified_minimum(p: &Polynomial) -> Option<Minimum> {
    certified_minimum_with_width(p, 64)
}

pub fn certified_minimum_with_width(p: &Polynomial, width_bits: u32) -> Option<Minimum> {
    let d = p.degree()?;
    if d == 0 {
        return Some(Minimum { lower: p.coeff(0), at: 0.0 });
    }
    if d % 2 == 1 || p.leading().is_negative() {
        return None;
    }
    let crit = RealRoots::new(&p.derivative());
    let width = BigRational::new(BigInt::one(), BigInt::one() << width_bits);
    let mut best: Option<Minimum> = None;
    for iv in crit.refined(&width) {
        let lower = if iv.is_exact() {
            p.eval(&iv.lo)
        } else {
            eval_interval(p, &iv.lo, &iv.hi).0
        };
        if best.as_ref().is_none_or(|b| lower < b.lower) {
            best = Some(Minimum { lower, at: iv.to_f64() });
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointClass {
    None,
    One,
    TwoOrMore,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub count: usize,
    pub points: Vec<RootInterval>,
    pub classification: FixedPointClass,
}

/// Real fixed points of `p`, isolated exactly.
pub fn fixed_points(p: &Polynomial) -> crate::Result<FixedPointReport> {
    if p.degree().unwrap_or(0) < 1 {
        return Err(crate::Error::Precondition(
            "fixed point classification needs degree at least 1".into(),
        ));
    }
    let g = p.sub(&Polynomial::x());
    if g.is_zero() {
        return Err(crate::Error::Unsupported("the identity fixes every point".into()));
    }
    let roots = RealRoots::new(&g);
    let count = roots.count();
    let classification = match count {
        0 => FixedPointClass::None,
        1 => FixedPointClass::One,
        _ => FixedPointClass::TwoOrMore,
    };
    Ok(FixedPointReport { count, points: roots.intervals().to_vec(), classification })
}

/// Certified lower bound `a > 0` with `p(x) > x + a` everywhere, if one exists.
pub fn displacement_gap(p: &Polynomial) -> Option<BigRational> {
    let g = p.sub(&Polynomial::x());
    let d = g.degree()?;
    if d == 0 {
        return g.coeff(0).is_positive().then(|| g.coeff(0));
    }
    if d % 2 == 1 || g.leading().is_negative() || RealRoots::new(&g).count() > 0 {
        return None;
    }
    for bits in [64u32, 128, 256] {
        if let Some(m) = certified_minimum_with_width(&g, bits) {
            if m.lower.is_positive() {
                return Some(m.lower);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::poly::rat;
    use proptest::prelude::*;

    #[test]
    fn fixed_point_examples() {
        let r = fixed_points(&Polynomial::quadratic(rat(1, 2))).unwrap();
        assert_eq!((r.count, r.classification), (0, FixedPointClass::None));
        let r = fixed_points(&Polynomial::quadratic(rat(1, 4))).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.points[0], RootInterval::exact(rat(1, 2)));
        let r = fixed_points(&Polynomial::quadratic(rat(-1, 1))).unwrap();
        assert_eq!((r.count, r.classification), (2, FixedPointClass::TwoOrMore));
    }

    #[test]
    fn gap_examples() {
        assert_eq!(displacement_gap(&Polynomial::quadratic(rat(1, 2))), Some(rat(1, 4)));
        assert_eq!(displacement_gap(&Polynomial::quadratic(rat(1, 4))), None);
        assert_eq!(displacement_gap(&Polynomial::quadratic(rat(-1, 1))), None);
        assert_eq!(displacement_gap(&Polynomial::x().add(&Polynomial::constant(rat(3, 1)))), Some(rat(3, 1)));
    }

    #[test]
    fn repeated_roots_counted_once() {
        let p: Polynomial = "1,-2,1".parse().unwrap();
        let r = RealRoots::new(&p.mul(&p).mul(&"2,1".parse().unwrap()));
        assert_eq!(r.count(), 2);
    }

    #[test]
    fn irrational_roots_refine() {
        let p: Polynomial = "-2,0,1".parse().unwrap();
        let r = RealRoots::new(&p);
        assert_eq!(r.count(), 2);
        let w = rat(1, 1_000_000_000);
        let iv = r.refine(&r.intervals()[1], &w);
        assert!((iv.to_f64() - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-7, 5), &rat(-6, 5)), rat(-4, 3));
        assert_eq!(simplest_between(&rat(-1, 3), &rat(1, 7)), rat(0, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn product_of_linear_factors(roots in proptest::collection::btree_set((-30i64..30, 1i64..5), 1..6)) {
            let mut p = Polynomial::one();
            let mut values = std::collections::BTreeSet::new();
            for (n, d) in &roots {
                let r = rat(*n, *d);
                values.insert(r.clone());
                p = p.mul(&Polynomial::new(vec![-r, BigRational::one()]));
            }
            let rr = RealRoots::new(&p);
            prop_assert_eq!(rr.count(), values.len());
            let found: Vec<BigRational> = rr
                .refined(&rat(1, 1 << 30))
                .into_iter()
                .map(|iv| { assert!(iv.is_exact()); iv.lo })
                .collect();
            prop_assert_eq!(found, values.into_iter().collect::<Vec<_>>());
        }

        #[test]
        fn conjugation_preserves_fixed_point_count(c in -40i64..40, lead in 1i64..9, sign in proptest::bool::ANY) {
            let a = if sign { rat(lead, 3) } else { rat(-lead, 3) };
            let p = Polynomial::new(vec![rat(c, 8), rat(1, 2), a]);
            let conj = crate::polynomials::conjugate_to_monic(&p).unwrap();
            prop_assert_eq!(fixed_points(&p).unwrap().count, fixed_points(&conj.phi).unwrap().count);
        }
    }
}
