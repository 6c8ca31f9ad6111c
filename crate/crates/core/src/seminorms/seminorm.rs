//! Truncated seminorms `sup_x sup_{n,q} (1+|x|)^q |f^(n)(x)| exp(-λ φ*((n+q)/λ))`.

use crate::dynamics::jets::iterate_jets_values;
use crate::error::{Error, Result};
use crate::faadibruno::compose_jets_log;
use crate::grid::GridSpec;
use crate::logvalue::LogValue;
use crate::polynomials::Polynomial;
use crate::seminorms::function::SmoothFunction;
use crate::weights::WeightSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormParams {
    pub lambda: f64,
    pub n_max: usize,
    pub q_max: usize,
    pub grid: GridSpec,
}

impl Default for SeminormParams {
    fn default() -> Self {
        SeminormParams { lambda: 1.0, n_max: 40, q_max: 40, grid: GridSpec::chebyshev(20.0, 401) }
    }
}

impl SeminormParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if self.n_max < 1 || self.q_max < 1 {
            return Err(Error::InvalidParameter("n_max and q_max must be >= 1".into()));
        }
        if self.grid.points == 0 && self.grid.extra.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        SeminormParams { lambda, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Argmax {
    pub x: f64,
    pub n: usize,
    pub q: usize,
    pub grid_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormResult {
    pub value: f64,
    pub log_value: f64,
    pub argmax: Option<Argmax>,
    /// The maximum sits on the truncation boundary, so `value` is only a lower bound.
    pub boundary: bool,
    pub truncation_note: String,
    /// `ln sup_x (1+|x|)^q |f^(n)(x)|`, row-major in `(n, q)`.
    #[serde(skip)]
    pub slice_log_max: Vec<f64>,
    pub n_max: usize,
    pub q_max: usize,
    pub lambda: f64,
}

impl SeminormResult {
    pub fn slice(&self, n: usize, q: usize) -> f64 {
        self.slice_log_max[n * (self.q_max + 1) + q]
    }
}

struct PointScan {
    best: f64,
    n: usize,
    q: usize,
    slice: Vec<f64>,
}

fn scan_point(derivs: &[LogValue], x: f64, conj: &[f64], p: &SeminormParams) -> PointScan {
    let l1p = (1.0 + x.abs()).ln();
    let width = p.q_max + 1;
    let mut slice = vec![f64::NEG_INFINITY; (p.n_max + 1) * width];
    let mut best = f64::NEG_INFINITY;
    let (mut bn, mut bq) = (0, 0);
    for n in 0..=p.n_max {
        let d = derivs[n];
        if d.is_zero() {
            continue;
        }
        for q in 0..=p.q_max {
            let s = q as f64 * l1p + d.log_abs();
            slice[n * width + q] = s;
            let v = s - p.lambda * conj[n + q];
            if v > best {
                best = v;
                bn = n;
                bq = q;
            }
        }
    }
    PointScan { best, n: bn, q: bq, slice }
}

fn conjugate_table(w: &WeightSpec, p: &SeminormParams) -> Result<Vec<f64>> {
    (0..=p.n_max + p.q_max)
        .map(|j| w.young_conjugate(j as f64 / p.lambda))
        .collect()
}

fn reduce(scans: Vec<PointScan>, nodes: &[f64], p: &SeminormParams) -> SeminormResult {
    let width = p.q_max + 1;
    let mut slice = vec![f64::NEG_INFINITY; (p.n_max + 1) * width];
    let mut best = f64::NEG_INFINITY;
    let mut arg: Option<Argmax> = None;
    for (i, s) in scans.into_iter().enumerate() {
        for (a, b) in slice.iter_mut().zip(&s.slice) {
            if *b > *a {
                *a = *b;
            }
        }
        if s.best == f64::NEG_INFINITY {
            continue;
        }
        let better = match arg {
            None => true,
            Some(a) => s.best > best || (s.best == best && (s.n, s.q, i) < (a.n, a.q, a.grid_index)),
        };
        if better {
            best = s.best;
            arg = Some(Argmax { x: nodes[i], n: s.n, q: s.q, grid_index: i });
        }
    }
    let boundary = arg.is_some_and(|a| {
        a.n == p.n_max || a.q == p.q_max || a.grid_index == 0 || a.grid_index + 1 == nodes.len()
    });
    let truncation_note = match (arg, boundary) {
        (None, _) => "identically zero on the grid".to_string(),
        (Some(_), true) => "maximum on the truncation boundary: value is a lower bound; increase n_max/q_max or the grid radius".to_string(),
        (Some(_), false) => "maximum attained in the interior of the truncation box".to_string(),
    };
    SeminormResult {
        value: best.exp(),
        log_value: best,
        argmax: arg,
        boundary,
        truncation_note,
        slice_log_max: slice,
        n_max: p.n_max,
        q_max: p.q_max,
        lambda: p.lambda,
    }
}

pub fn gs_seminorm(f: &dyn SmoothFunction, w: &WeightSpec, p: &SeminormParams) -> Result<SeminormResult> {
    p.validate()?;
    let conj = conjugate_table(w, p)?;
    let nodes = p.grid.nodes();
    let scans: Vec<PointScan> = nodes
        .par_iter()
        .map(|&x| scan_point(&f.derivatives(x, p.n_max), x, &conj, p))
        .collect();
    Ok(reduce(scans, &nodes, p))
}

/// Beyond this `ln|y|` the outer function is evaluated through its decay bound.
const FLOAT_RANGE_LOG: f64 = 700.0;
const NEGLIGIBLE_LOG: f64 = -1e4;

/// `f^(k)(y)` for a log-space argument.
pub fn outer_jet(f: &dyn SmoothFunction, y: LogValue, n_max: usize) -> Result<Vec<LogValue>> {
    if y.log_abs() < FLOAT_RANGE_LOG {
        return Ok(f.derivatives(y.to_f64(), n_max));
    }
    for k in 0..=n_max {
        let b = f.decay_log(k, y.log_abs());
        if b > NEGLIGIBLE_LOG {
            return Err(Error::Oracle(format!(
                "{} at |y| = exp({}) is outside float range and its decay bound {b} is not negligible",
                f.name(),
                y.log_abs()
            )));
        }
    }
    Ok(vec![LogValue::ZERO; n_max + 1])
}

/// Jet of `f ∘ ψ_m` at `x`.
pub fn composite_jet(f: &dyn SmoothFunction, psi: &Polynomial, m: usize, x: f64, n_max: usize) -> Result<Vec<LogValue>> {
    if m == 0 || psi.is_identity() {
        return Ok(f.derivatives(x, n_max));
    }
    let inner = iterate_jets_values(psi, x, n_max, m);
    let outer = outer_jet(f, inner[0], n_max)?;
    if outer.iter().all(|v| v.is_zero()) {
        return Ok(outer);
    }
    Ok(compose_jets_log(&outer, &inner).into_iter().map(|e| e.value).collect())
}

pub fn composite_seminorm(
    f: &dyn SmoothFunction,
    psi: &Polynomial,
    m: usize,
    w: &WeightSpec,
    p: &SeminormParams,
) -> Result<SeminormResult> {
    if m == 0 || psi.is_identity() {
        return gs_seminorm(f, w, p);
    }
    p.validate()?;
    let conj = conjugate_table(w, p)?;
    let nodes = p.grid.nodes();
    let scans: Vec<PointScan> = nodes
        .par_iter()
        .map(|&x| composite_jet(f, psi, m, x, p.n_max).map(|d| scan_point(&d, x, &conj, p)))
        .collect::<Result<_>>()?;
    Ok(reduce(scans, &nodes, p))
}

/// `ln C + ρ φ_σ*((n+q)/ρ)` for given fit parameters.
pub fn envelope_log(sigma: &WeightSpec, rho: f64, log_c: f64, n: usize, q: usize) -> Result<f64> {
    Ok(log_c + rho * sigma.young_conjugate((n + q) as f64 / rho)?)
}

/// Fit parameters of the comparison envelope `C exp(ρ φ_σ*((n+q)/ρ))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub rho: f64,
    /// Smallest `ln C` for which the envelope dominates every `(n, q)` slice.
    pub log_c: f64,
    pub tight_at: Option<(usize, usize)>,
}

pub fn fit_envelope(result: &SeminormResult, sigma: &WeightSpec, rho: f64) -> Result<EnvelopeFit> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be > 0, got {rho}")));
    }
    let mut log_c = f64::NEG_INFINITY;
    let mut tight_at = None;
    for n in 0..=result.n_max {
        for q in 0..=result.q_max {
            let s = result.slice(n, q);
            if s == f64::NEG_INFINITY {
                continue;
            }
            let need = s - rho * sigma.young_conjugate((n + q) as f64 / rho)?;
            if need > log_c {
                log_c = need;
                tight_at = Some((n, q));
            }
        }
    }
    Ok(EnvelopeFit { rho, log_c, tight_at })
}
