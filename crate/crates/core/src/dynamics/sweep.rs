//! Truncated seminorms of `f ∘ ψ_m` along the iterates.

use crate::error::{Error, Result};
use crate::polynomials::{fixed_points, Polynomial};
use crate::seminorms::{composite_seminorm, SeminormParams, SeminormResult, SmoothFunction};
use crate::weights::WeightSpec;
use serde::{Deserialize, Serialize};

pub const OUTSIDE_HYPOTHESIS: &str = "outside theorem hypothesis";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub seminorm: SeminormResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub has_fixed_points: bool,
    pub sup_log: f64,
    pub bounded: bool,
    /// The last third of the sweep is non-increasing and ends below its start.
    pub eventually_decaying: bool,
    pub flags: Vec<String>,
}

pub fn power_bound_seminorm_sweep(
    f: &dyn SmoothFunction,
    psi: &Polynomial,
    sigma: &WeightSpec,
    lambda: f64,
    m_max: usize,
    trunc: &SeminormParams,
) -> Result<SweepReport> {
    let a = sigma.scale_a();
    let mut flags = Vec::new();
    if a < 2.0 {
        return Err(Error::Precondition(format!("sigma scale a must be > 2, got {a}")));
    }
    if a == 2.0 {
        flags.push(OUTSIDE_HYPOTHESIS.to_string());
    }
    let has_fixed_points = psi.degree().unwrap_or(0) >= 1 && !psi.is_identity() && fixed_points(psi)?.count > 0
        || psi.is_identity();
    let params = trunc.with_lambda(lambda);
    let rows = (0..=m_max)
        .map(|m| Ok(SweepRow { m, seminorm: composite_seminorm(f, psi, m, sigma, &params)? }))
        .collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = rows.iter().map(|r| r.seminorm.log_value).collect();
    let sup_log = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail = &logs[logs.len() - (logs.len() / 3).max(2).min(logs.len())..];
    let eventually_decaying = tail.len() >= 2
        && tail.windows(2).all(|w| w[1] <= w[0])
        && tail[tail.len() - 1] < tail[0];
    if has_fixed_points {
        flags.push("fixed points present: no boundedness expected".into());
    }
    Ok(SweepReport { rows, has_fixed_points, sup_log, bounded: sup_log.is_finite() || sup_log == f64::NEG_INFINITY, eventually_decaying, flags })
}
