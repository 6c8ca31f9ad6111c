//! Neumann series `R_μ f = Σ_m f ∘ ψ_m / μ^(m+1)` with tail certificates.

use crate::dynamics::{find_m0, IterateBoundCertificate};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::logvalue::{log_add_exp, LogValue};
use crate::polynomials::{fixed_points, OrbitStepper, Polynomial};
use crate::seminorms::{composite_seminorm, SeminormParams, SmoothFunction};
use crate::weights::WeightSpec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_B: f64 = 2.0;
pub const DEFAULT_K_MAX: usize = 6;
/// Term budget for partial sums without a certificate.
pub const PARTIAL_SUM_TERMS: usize = 400;
pub const NO_CERTIFICATE: &str = "no global certificate: polynomial has fixed points";
pub const PARTIAL_ONLY: &str = "partial sums only: fixed points present and |mu| <= 1, convergence not expected in general";
pub const DELICATE: &str = "theorem-backed but numerically delicate: |mu| <= 1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCertificate {
    pub m0: usize,
    pub b: f64,
    pub mu_abs: f64,
    /// `ln` of the bound on `|f(ψ_m(x)) / μ^(m+1)|`, for `m = 0, 1, ...`.
    pub bound_terms: Vec<f64>,
    /// `ln` of the bound on the omitted tail.
    pub tail_log: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeumannResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub cert: TailCertificate,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualCheck {
    pub x: f64,
    pub residual: f64,
    pub passed: bool,
}

/// Reusable evaluator; the iterate certificate is computed once.
#[derive(Clone, Debug)]
pub struct NeumannSolver {
    psi: Polynomial,
    stepper: OrbitStepper,
    cert: Option<IterateBoundCertificate>,
}

fn check_mu(mu: Complex64) -> Result<()> {
    if mu.norm() == 0.0 || !mu.norm().is_finite() {
        return Err(Error::Domain(format!("mu must be a finite nonzero number, got {mu}")));
    }
    Ok(())
}

impl NeumannSolver {
    pub fn new(psi: &Polynomial) -> Result<Self> {
        let d = psi.degree().unwrap_or(0);
        let fixed = psi.is_identity() || d < 2 || fixed_points(psi)?.count > 0;
        let cert = if fixed || d % 2 == 1 {
            None
        } else {
            Some(find_m0(psi, DEFAULT_B, DEFAULT_K_MAX, &GridSpec::default())?)
        };
        Ok(NeumannSolver { psi: psi.clone(), stepper: OrbitStepper::new(psi), cert })
    }

    pub fn certificate(&self) -> Option<&IterateBoundCertificate> {
        self.cert.as_ref()
    }

    /// `ln` bound on term `m` for any `x`, from the iterate certificate and the decay of `f`.
    fn term_bound(&self, f: &dyn SmoothFunction, m: usize, ln_mu: f64) -> f64 {
        let shift = (m + 1) as f64 * ln_mu;
        match &self.cert {
            Some(c) if m > c.m0 => {
                let k = (m - c.m0) as i32;
                f.decay_log(0, 2f64.powi(k) * c.b.ln()).min(f.sup_log()) - shift
            }
            _ => f.sup_log() - shift,
        }
    }

    /// Smallest `M` with certified tail below `tol`, and the tail bound.
    fn choose_terms(&self, f: &dyn SmoothFunction, ln_mu: f64, tol: f64) -> (usize, Vec<f64>, f64, bool) {
        let ln_tol = tol.ln();
        let mut bounds = Vec::new();
        match &self.cert {
            Some(c) => {
                let mut m = c.m0;
                loop {
                    bounds.clear();
                    bounds.extend((0..=m).map(|j| self.term_bound(f, j, ln_mu)));
                    let tail = self.tail_after(f, m, ln_mu);
                    if tail < ln_tol || m > c.m0 + 60 {
                        return (m, bounds, tail, tail < ln_tol);
                    }
                    m += 1;
                }
            }
            None if ln_mu > 0.0 => {
                // geometric tail sup|f| |μ|^-(m+2) / (1 - 1/|μ|)
                let g = (-(-ln_mu).exp()).ln_1p();
                let mut m = 0;
                while f.sup_log() - (m + 2) as f64 * ln_mu - g >= ln_tol && m < 100_000 {
                    m += 1;
                }
                bounds.extend((0..=m).map(|j| self.term_bound(f, j, ln_mu)));
                let tail = f.sup_log() - (m + 2) as f64 * ln_mu - g;
                (m, bounds, tail, tail < ln_tol)
            }
            None => {
                let m = PARTIAL_SUM_TERMS;
                bounds.extend((0..=m).map(|j| self.term_bound(f, j, ln_mu)));
                (m, bounds, f64::INFINITY, false)
            }
        }
    }

    /// `ln Σ_(m>M)` of the term bounds; summed until terms halve and drop far below the running total.
    fn tail_after(&self, f: &dyn SmoothFunction, big_m: usize, ln_mu: f64) -> f64 {
        let mut total = f64::NEG_INFINITY;
        let mut prev = f64::INFINITY;
        for m in big_m + 1..big_m + 200 {
            let t = self.term_bound(f, m, ln_mu);
            total = log_add_exp(total, t);
            if t == f64::NEG_INFINITY {
                return total;
            }
            if t <= prev - 2f64.ln() && t < total - 50.0 {
                // remaining terms form at most a geometric series of ratio 1/2
                return log_add_exp(total, t + 2f64.ln());
            }
            prev = t;
        }
        f64::INFINITY
    }

    pub fn apply(&self, f: &dyn SmoothFunction, mu: Complex64, x: f64, tol: f64) -> Result<NeumannResult> {
        check_mu(mu)?;
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
        }
        let ln_mu = mu.norm().ln();
        let arg = mu.arg();
        let (big_m, bound_terms, tail_log, certified) = self.choose_terms(f, ln_mu, tol);
        let mut warnings = Vec::new();
        if self.cert.is_none() {
            warnings.push(if ln_mu > 0.0 { NO_CERTIFICATE } else { PARTIAL_ONLY }.to_string());
        } else if ln_mu <= 0.0 {
            warnings.push(DELICATE.to_string());
        }
        let mut y = LogValue::from_f64(x);
        let mut value = Complex64::new(0.0, 0.0);
        for m in 0..=big_m {
            if m > 0 {
                y = self.stepper.step(y);
            }
            let fy = f_value(f, y)?;
            if !fy.is_zero() {
                let k = (m + 1) as f64;
                let mag = fy.log_abs() - k * ln_mu;
                value += Complex64::from_polar(fy.sign() as f64 * mag.exp(), -k * arg);
            }
        }
        let cert = TailCertificate {
            m0: self.cert.as_ref().map_or(0, |c| c.m0),
            b: self.cert.as_ref().map_or(DEFAULT_B, |c| c.b),
            mu_abs: mu.norm(),
            bound_terms,
            tail_log,
            certified: certified && self.cert.is_some(),
        };
        if !certified && self.cert.is_some() {
            warnings.push(format!("tail bound exp({tail_log}) did not reach tol"));
        }
        Ok(NeumannResult { value, terms_used: big_m + 1, cert, warnings })
    }

    /// `|μ g(x) - g(ψ(x)) - f(x)|` with `g = R_μ f`.
    pub fn residual(&self, f: &dyn SmoothFunction, mu: Complex64, x: f64, tol: f64) -> Result<ResidualCheck> {
        let gx = self.apply(f, mu, x, tol)?.value;
        let px = self.psi.eval_f64(x);
        let gpx = self.apply(f, mu, px, tol)?.value;
        let residual = (mu * gx - gpx - f.value(x)).norm();
        Ok(ResidualCheck { x, residual, passed: residual <= 10.0 * tol })
    }
}

const FLOAT_RANGE_LOG: f64 = 700.0;

fn f_value(f: &dyn SmoothFunction, y: LogValue) -> Result<LogValue> {
    if y.log_abs() < FLOAT_RANGE_LOG {
        return Ok(f.derivatives(y.to_f64(), 0)[0]);
    }
    let b = f.decay_log(0, y.log_abs());
    if b < -800.0 {
        Ok(LogValue::ZERO)
    } else {
        Err(Error::Oracle(format!("{} does not decay below f64 range at |y| = exp({})", f.name(), y.log_abs())))
    }
}

/// Evaluates `R_μ f(x)` and checks the resolvent identity at `x`.
pub fn neumann_apply(
    f: &dyn SmoothFunction,
    psi: &Polynomial,
    mu: Complex64,
    x: f64,
    tol: f64,
) -> Result<(NeumannResult, ResidualCheck)> {
    let solver = NeumannSolver::new(psi)?;
    let r = solver.apply(f, mu, x, tol)?;
    let check = solver.residual(f, mu, x, tol)?;
    Ok((r, check))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Converged,
    NotConverged,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub m0: usize,
    pub b: f64,
    pub mu_abs: f64,
    pub partial_sums: Vec<f64>,
    /// `ln(‖f ∘ ψ_m‖ / |μ|^m)`.
    pub log_increments: Vec<f64>,
    /// Least-squares slope of `ln` increments against `-2^(m-m0) ln b` past `m0`.
    pub shape_slope: Option<f64>,
    pub verdict: SeriesVerdict,
    pub detail: String,
}

pub const SERIES_TOL: f64 = 1e-10;
/// The decay must be at least this fraction of the `b^(-2^(m-m0))` shape.
pub const SHAPE_SLOPE_MIN: f64 = 0.8;
pub const PRE_ASYMPTOTIC: &str = "inconclusive: pre-asymptotic";

pub fn neumann_seminorm_series(
    f: &dyn SmoothFunction,
    psi: &Polynomial,
    mu_abs: f64,
    sigma: &WeightSpec,
    p: &SeminormParams,
    m_max: usize,
) -> Result<SeriesReport> {
    if !(mu_abs.is_finite() && mu_abs > 0.0) {
        return Err(Error::Domain(format!("|mu| must be > 0, got {mu_abs}")));
    }
    if sigma.scale_a() <= 2.0 {
        return Err(Error::Precondition(format!("sigma scale a must be > 2, got {}", sigma.scale_a())));
    }
    let solver = NeumannSolver::new(psi)?;
    let cert = solver
        .certificate()
        .ok_or_else(|| Error::Precondition("polynomial has fixed points".into()))?;
    let (m0, b) = (cert.m0, cert.b);
    let ln_mu = mu_abs.ln();
    let mut partial_sums = Vec::with_capacity(m_max + 1);
    let mut log_increments = Vec::with_capacity(m_max + 1);
    let mut acc = f64::NEG_INFINITY;
    for m in 0..=m_max {
        let s = composite_seminorm(f, psi, m, sigma, p)?;
        let inc = s.log_value - m as f64 * ln_mu;
        acc = log_add_exp(acc, inc);
        log_increments.push(inc);
        partial_sums.push(acc.exp());
    }
    if partial_sums.iter().all(|&v| v == 0.0) {
        return Ok(SeriesReport {
            m0,
            b,
            mu_abs,
            partial_sums,
            log_increments,
            shape_slope: None,
            verdict: SeriesVerdict::Converged,
            detail: "all increments vanish".into(),
        });
    }
    let pts: Vec<(f64, f64)> = (m0 + 1..=m_max)
        .filter(|&m| log_increments[m].is_finite())
        .map(|m| (-(2f64.powi((m - m0) as i32)) * b.ln(), log_increments[m]))
        .collect();
    if pts.len() < 2 {
        return Ok(SeriesReport {
            m0,
            b,
            mu_abs,
            partial_sums,
            log_increments,
            shape_slope: None,
            verdict: SeriesVerdict::Inconclusive,
            detail: format!("{PRE_ASYMPTOTIC}: need two finite increments past m0 = {m0}, m_max = {m_max}"),
        });
    }
    let slope = regression_slope(&pts);
    let last = *log_increments.last().unwrap();
    let small = last < SERIES_TOL.ln() + acc.max(0.0);
    let (verdict, detail) = if small && slope >= SHAPE_SLOPE_MIN {
        (SeriesVerdict::Converged, format!("last increment exp({last:.3e}); shape slope {slope:.3e}"))
    } else {
        (
            SeriesVerdict::NotConverged,
            format!("last increment exp({last:.3e}) (tol {SERIES_TOL:e}); shape slope {slope:.3e} (need >= {SHAPE_SLOPE_MIN})"),
        )
    };
    Ok(SeriesReport { m0, b, mu_abs, partial_sums, log_increments, shape_slope: Some(slope), verdict, detail })
}

/// Least-squares slope of `y` on `x` with intercept.
pub fn regression_slope(pts: &[(f64, f64)]) -> f64 {
    let a = DMatrix::from_fn(pts.len(), 2, |i, j| if j == 0 { pts[i].0 } else { 1.0 });
    let y = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let sol = a.svd(true, true).solve(&y, 1e-14).expect("svd solve");
    sol[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::rat;
    use crate::seminorms::{hermite_gaussian_oracle, ZeroFunction};

    #[test]
    fn zero_function() {
        let psi = Polynomial::quadratic(rat(1, 2));
        let (r, c) = neumann_apply(&ZeroFunction, &psi, Complex64::new(2.0, 0.0), 0.0, 1e-10).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert!(c.passed);
    }

    #[test]
    fn gaussian_mu_two() {
        let g = hermite_gaussian_oracle(1.0).unwrap();
        let psi = Polynomial::quadratic(rat(1, 2));
        let (r, c) = neumann_apply(&g, &psi, Complex64::new(2.0, 0.0), 0.0, 1e-10).unwrap();
        assert!(r.cert.certified);
        assert!(c.passed, "{c:?}");
        assert!(r.value.re > 0.5);
    }

    #[test]
    fn fixed_point_warning() {
        let g = hermite_gaussian_oracle(1.0).unwrap();
        let psi = Polynomial::quadratic(rat(1, 4));
        let s = NeumannSolver::new(&psi).unwrap();
        let r = s.apply(&g, Complex64::new(3.0, 0.0), 2.0, 1e-10).unwrap();
        assert!(r.warnings.iter().any(|w| w == NO_CERTIFICATE));
        assert!(matches!(s.apply(&g, Complex64::new(0.0, 0.0), 2.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn slope_of_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 - 1.0)).collect();
        assert!((regression_slope(&pts) - 3.0).abs() < 1e-12);
    }
}
