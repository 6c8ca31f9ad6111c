//! Constructive lower bounds `|ψ_(m0+k)(x)| >= b^(2^k)` for fixed-point-free polynomials.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::polynomials::{
    certified_minimum, conjugate_to_monic, displacement_gap, fixed_points, rational_to_f64, serde_rational, AffineMap,
    OrbitStepper, Polynomial, RealRoots,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `phi = map ∘ ψ ∘ map⁻¹`, monic, and of the form `x^2 + c` in degree two.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalForm {
    pub map: AffineMap,
    pub phi: Polynomial,
    pub exact: bool,
}

pub fn normal_form(psi: &Polynomial) -> Result<NormalForm> {
    let mc = conjugate_to_monic(psi)?;
    if psi.degree() != Some(2) {
        return Ok(NormalForm { map: mc.map, phi: mc.phi, exact: mc.exact });
    }
    let shift = mc.phi.coeff(1) / BigRational::from_integer(BigInt::from(2));
    let t = AffineMap::new(BigRational::one(), shift)?;
    let map = t.then_after(&mc.map);
    let phi = map.conjugate(psi);
    Ok(NormalForm { map, phi, exact: mc.exact })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateOptions {
    pub epsilon: f64,
    pub critical_depth: usize,
    pub critical_degree_cap: usize,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { epsilon: 1e-6, critical_depth: 6, critical_degree_cap: 128 }
    }
}

/// Real critical points of `ψ_m` for `m <= depth`, as long as `deg ψ_m' <= cap`.
pub fn critical_points(psi: &Polynomial, depth: usize, cap: usize) -> Vec<f64> {
    let d = psi.degree().unwrap_or(0);
    let width = BigRational::new(BigInt::one(), BigInt::one() << 50u32);
    let mut out = Vec::new();
    let mut q = Polynomial::x();
    for m in 1..=depth {
        let deg = d.checked_pow(m as u32).unwrap_or(usize::MAX);
        if deg == 0 || deg - 1 > cap {
            break;
        }
        q = psi.compose_with_cap(&q, usize::MAX).expect("uncapped composition");
        let dq = q.derivative();
        if dq.degree().unwrap_or(0) == 0 {
            continue;
        }
        let roots = RealRoots::new(&dq);
        out.extend(roots.refined(&width).iter().map(|iv| iv.to_f64()));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterateBoundCertificate {
    pub b: f64,
    /// Index produced by the constructive recipe.
    pub m0: usize,
    /// Smallest index that still passes the grid check.
    pub m0_empirical: usize,
    #[serde(rename = "B")]
    pub big_b: f64,
    #[serde(with = "serde_rational")]
    pub a_gap: BigRational,
    #[serde(with = "serde_rational")]
    pub min_phi: BigRational,
    pub k_max: usize,
    pub grid: GridSpec,
    pub critical_depth: usize,
    pub critical_points: Vec<f64>,
    pub map: AffineMap,
    pub min_margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness {
    pub x: f64,
    pub k: usize,
    pub margin: f64,
}

fn log_orbits(psi: &Polynomial, nodes: &[f64], len: usize) -> Vec<Vec<f64>> {
    let stepper = OrbitStepper::new(psi);
    nodes
        .par_iter()
        .map(|&x| stepper.orbit(len, x).into_iter().map(|v| v.log_abs()).collect())
        .collect()
}

/// Smallest `ln|ψ_(m+k)(x)| - 2^k ln b` over nodes and `1 <= k <= k_max`.
fn min_margin(orbits: &[Vec<f64>], nodes: &[f64], m: usize, k_max: usize, ln_b: f64) -> BoundWitness {
    let mut w = BoundWitness { x: f64::NAN, k: 0, margin: f64::INFINITY };
    for (orbit, &x) in orbits.iter().zip(nodes) {
        for k in 1..=k_max {
            let margin = orbit[m + k] - 2f64.powi(k as i32) * ln_b;
            if margin < w.margin {
                w = BoundWitness { x, k, margin };
            }
        }
    }
    w
}

fn check_preconditions(psi: &Polynomial) -> Result<()> {
    let d = psi.degree().unwrap_or(0);
    if d < 2 || d % 2 == 1 {
        return Err(Error::Unsupported(format!("iterate bounds need even degree >= 2, got {d}")));
    }
    let fp = fixed_points(psi)?;
    if fp.count > 0 {
        return Err(Error::Precondition(format!("polynomial has fixed points ({} real)", fp.count)));
    }
    Ok(())
}

pub fn find_m0(psi: &Polynomial, b: f64, k_max: usize, grid: &GridSpec) -> Result<IterateBoundCertificate> {
    find_m0_with(psi, b, k_max, grid, &CertificateOptions::default())
}

pub fn find_m0_with(
    psi: &Polynomial,
    b: f64,
    k_max: usize,
    grid: &GridSpec,
    opts: &CertificateOptions,
) -> Result<IterateBoundCertificate> {
    if !(b.is_finite() && b > 1.0) {
        return Err(Error::InvalidParameter(format!("b must be > 1, got {b}")));
    }
    if k_max < 1 {
        return Err(Error::InvalidParameter("k_max must be >= 1".into()));
    }
    check_preconditions(psi)?;
    let nf = normal_form(psi)?;
    let phi = &nf.phi;

    let inv = nf.map.inverse();
    let e = rational_to_f64(inv.alpha()).abs();
    let d = rational_to_f64(inv.beta()).abs();
    let threshold = b.max((d + 1.0) / e * b) * (1.0 + opts.epsilon);
    let h = phi.sub(&Polynomial::monomial(BigRational::one(), 2));
    let root_bound = if h.degree().unwrap_or(0) >= 1 {
        RealRoots::new(&h)
            .intervals()
            .iter()
            .map(|iv| rational_to_f64(&iv.lo.abs().max(iv.hi.abs())))
            .fold(0.0f64, f64::max)
    } else {
        0.0
    };
    let big_b = threshold.max(root_bound * (1.0 + 1e-12));

    let min_phi = certified_minimum(phi)
        .ok_or_else(|| Error::Invariant("monic even-degree polynomial without a minimum".into()))?
        .lower;
    let a_gap = displacement_gap(phi)
        .ok_or_else(|| Error::Invariant("no positive displacement gap for a fixed-point-free polynomial".into()))?;
    let steps = ((BigRational::from_float(big_b).unwrap() - &min_phi) / &a_gap).ceil();
    let steps = if steps.is_negative() { BigRational::zero() } else { steps };
    let m0 = 2 + steps
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::Unsupported("recipe index does not fit in usize".into()))?;

    let crit = critical_points(psi, opts.critical_depth, opts.critical_degree_cap);
    let nodes = grid.clone().with_extra(crit.iter().copied()).nodes();
    let orbits = log_orbits(psi, &nodes, m0 + k_max);
    let ln_b = b.ln();
    let w = min_margin(&orbits, &nodes, m0, k_max, ln_b);
    if w.margin < 0.0 {
        return Err(Error::Invariant(format!(
            "recipe index m0 = {m0} fails at x = {}, k = {} (margin {})",
            w.x, w.k, w.margin
        )));
    }
    let mut m0_empirical = m0;
    for m in (1..m0).rev() {
        if min_margin(&orbits, &nodes, m, k_max, ln_b).margin >= 0.0 {
            m0_empirical = m;
        } else {
            break;
        }
    }
    Ok(IterateBoundCertificate {
        b,
        m0,
        m0_empirical,
        big_b,
        a_gap,
        min_phi,
        k_max,
        grid: grid.clone(),
        critical_depth: opts.critical_depth,
        critical_points: crit,
        map: nf.map,
        min_margin: w.margin,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterateBoundReport {
    pub passed: bool,
    pub m0: usize,
    pub k_max: usize,
    pub points_checked: usize,
    pub min_margin: f64,
    /// Location of the smallest margin; a violation when `passed` is false.
    pub witness: BoundWitness,
}

/// Re-checks a certificate on a ten times denser grid plus critical points of low iterates.
pub fn verify_iterate_lower_bound(cert: &IterateBoundCertificate, psi: &Polynomial) -> Result<IterateBoundReport> {
    let crit = critical_points(psi, cert.critical_depth, CertificateOptions::default().critical_degree_cap);
    let nodes = cert.grid.denser(10).with_extra(crit).nodes();
    let orbits = log_orbits(psi, &nodes, cert.m0 + cert.k_max);
    let w = min_margin(&orbits, &nodes, cert.m0, cert.k_max, cert.b.ln());
    Ok(IterateBoundReport {
        passed: w.margin >= 0.0,
        m0: cert.m0,
        k_max: cert.k_max,
        points_checked: nodes.len(),
        min_margin: w.margin,
        witness: w,
    })
}
