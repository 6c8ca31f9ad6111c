//! Weight functions, their rescalings `σ(t) = ω(t^(1/a))`, Young conjugates and sampled condition checks.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    /// `ω(t) = t^(1/d)`.
    Gevrey { d: f64 },
    /// `ω(t) = max(0, ln t)^p`.
    LogPower { p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct WeightSpec {
    kind: WeightKind,
    scale_a: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum WeightRepr {
    Gevrey {
        d: f64,
        #[serde(default = "unit")]
        a: f64,
    },
    LogPower {
        p: f64,
        #[serde(default = "unit")]
        a: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl TryFrom<WeightRepr> for WeightSpec {
    type Error = Error;
    fn try_from(r: WeightRepr) -> Result<Self> {
        match r {
            WeightRepr::Gevrey { d, a } => WeightSpec::gevrey(d)?.scaled(a),
            WeightRepr::LogPower { p, a } => WeightSpec::log_power(p)?.scaled(a),
        }
    }
}

impl From<WeightSpec> for WeightRepr {
    fn from(w: WeightSpec) -> Self {
        match w.kind {
            WeightKind::Gevrey { d } => WeightRepr::Gevrey { d, a: w.scale_a },
            WeightKind::LogPower { p } => WeightRepr::LogPower { p, a: w.scale_a },
        }
    }
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            WeightKind::Gevrey { d } => write!(f, "gevrey(d={d}, a={})", self.scale_a),
            WeightKind::LogPower { p } => write!(f, "logpower(p={p}, a={})", self.scale_a),
        }
    }
}

impl WeightSpec {
    pub fn gevrey(d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 1.0) {
            return Err(Error::InvalidParameter(format!("Gevrey weight needs d > 1, got {d}")));
        }
        Ok(WeightSpec { kind: WeightKind::Gevrey { d }, scale_a: 1.0 })
    }

    pub fn log_power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidParameter(format!("log-power weight needs p > 1, got {p}")));
        }
        Ok(WeightSpec { kind: WeightKind::LogPower { p }, scale_a: 1.0 })
    }

    /// `σ(t) = ω(t^(1/a))`, replacing any previous scaling.
    pub fn scaled(self, a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 1.0) {
            return Err(Error::InvalidParameter(format!("scale a must be >= 1, got {a}")));
        }
        Ok(WeightSpec { scale_a: a, ..self })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn scale_a(&self) -> f64 {
        self.scale_a
    }

    /// The unscaled weight `ω`.
    pub fn base(&self) -> WeightSpec {
        WeightSpec { scale_a: 1.0, ..*self }
    }

    fn gevrey_exponent(&self) -> Option<f64> {
        match self.kind {
            WeightKind::Gevrey { d } => Some(self.scale_a * d),
            WeightKind::LogPower { .. } => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("weight argument must be finite and >= 0, got {t}")));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Gevrey { .. } => t.powf(1.0 / self.gevrey_exponent().unwrap()),
            WeightKind::LogPower { p } => {
                if t <= 1.0 {
                    0.0
                } else {
                    (t.ln() / self.scale_a).powf(p)
                }
            }
        }
    }

    /// `φ(t) = σ(e^t)` for `t >= 0`.
    pub fn phi(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Gevrey { .. } => (t / self.gevrey_exponent().unwrap()).exp(),
            WeightKind::LogPower { p } => (t.max(0.0) / self.scale_a).powf(p),
        }
    }

    pub fn phi_derivative(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Gevrey { .. } => {
                let dd = self.gevrey_exponent().unwrap();
                (t / dd).exp() / dd
            }
            WeightKind::LogPower { p } => p / self.scale_a * (t.max(0.0) / self.scale_a).powf(p - 1.0),
        }
    }

    /// Closed-form `φ*(s) = sup_{t >= 0} (s t - φ(t))`.
    pub fn young_conjugate(&self, s: f64) -> Result<f64> {
        check_conjugate_arg(s)?;
        Ok(match self.kind {
            WeightKind::Gevrey { .. } => {
                let sd = s * self.gevrey_exponent().unwrap();
                if sd >= 1.0 {
                    sd * (sd.ln() - 1.0)
                } else {
                    -1.0
                }
            }
            WeightKind::LogPower { p } => {
                let a = self.scale_a;
                let t = a * (s * a / p).powf(1.0 / (p - 1.0));
                s * t - (t / a).powf(p)
            }
        })
    }

    /// `φ*(s)` by golden-section search of the concave objective `s t - φ(t)`.
    pub fn young_conjugate_numeric(&self, s: f64) -> Result<f64> {
        check_conjugate_arg(s)?;
        let objective = |t: f64| s * t - self.phi(t);
        if s - self.phi_derivative(0.0) <= 0.0 {
            return Ok(objective(0.0));
        }
        let mut hi = 1.0f64;
        while s - self.phi_derivative(hi) >= 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::NonConvergent(format!(
                    "objective s t - φ(t) is unbounded for s = {s} on {self}"
                )));
            }
        }
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0f64, hi);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (objective(c), objective(d));
        for _ in 0..300 {
            if b - a <= 1e-15 * b.abs().max(1e-300) {
                break;
            }
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = objective(d);
            }
        }
        Ok(objective(0.5 * (a + b)).max(fc).max(fd))
    }
}

fn check_conjugate_arg(s: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::Domain(format!("conjugate argument must be finite and >= 0, got {s}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentOnGrid,
    ViolatedOnGrid,
}

impl Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::ConsistentOnGrid
        } else {
            Verdict::ViolatedOnGrid
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ConsistentOnGrid => "consistent_on_grid",
            Verdict::ViolatedOnGrid => "violated_on_grid",
        }
    }

    pub fn is_consistent(&self) -> bool {
        *self == Verdict::ConsistentOnGrid
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub verdict: Verdict,
    pub witness: f64,
    pub tail_bound: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub weight: WeightSpec,
    pub t_max: f64,
    pub samples: usize,
    /// `ω(2t) <= K (ω(t) + 1)`; witness is the grid `K`.
    pub doubling: ConditionCheck,
    /// `∫ ω(t)/(1+t²) dt < ∞`; witness is the truncated integral.
    pub integrability: ConditionCheck,
    /// `ln(1+t²) = o(ω(t))`; witness is `ω(t_max)/ln(1+t_max²)`.
    pub log_domination: ConditionCheck,
    /// Convexity of `t -> ω(e^t)`; witness is the smallest scaled second difference.
    pub convexity: ConditionCheck,
    /// `∫_1^∞ ω(yt)/t² dt <= C ω(y) + C`; witness is the grid `C`.
    pub dilation_integral: ConditionCheck,
    /// `ω(s+t) <= ω(s) + ω(t)`; witness is the largest excess.
    pub subadditivity: ConditionCheck,
}

impl ConditionReport {
    pub fn checks(&self) -> [(&'static str, &ConditionCheck); 6] {
        [
            ("doubling", &self.doubling),
            ("integrability", &self.integrability),
            ("log_domination", &self.log_domination),
            ("convexity", &self.convexity),
            ("dilation_integral", &self.dilation_integral),
            ("subadditivity", &self.subadditivity),
        ]
    }
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let (lm, flm, left) = simpson_step(f, a, fa, m, fm);
    let (rm, frm, right) = simpson_step(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, lm, flm, left, eps / 2.0, depth - 1)
        + adaptive(f, m, fm, b, fb, rm, frm, right, eps / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson_step(&f, a, fa, b, fb);
    adaptive(&f, a, fa, b, fb, m, fm, whole, eps, 48)
}

impl WeightSpec {
    /// Exponent `γ < 1` with `σ(t) <= σ(T) (t/T)^γ` for `t >= T`, if available.
    fn growth_exponent(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Gevrey { .. } => 1.0 / self.gevrey_exponent().unwrap(),
            WeightKind::LogPower { p } => {
                if t > 1.0 {
                    p / t.ln()
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Upper bound for `∫_T^∞ σ(t)/t² dt`.
    fn tail_bound(&self, t: f64) -> f64 {
        let g = self.growth_exponent(t);
        if g >= 1.0 {
            f64::INFINITY
        } else {
            self.eval_unchecked(t) / ((1.0 - g) * t)
        }
    }

    /// `∫_0^T σ(t)/(1+t²) dt` and a bound on the remainder.
    pub fn integrability(&self, t_max: f64) -> (f64, f64) {
        let head = integrate(|t| self.eval_unchecked(t) / (1.0 + t * t), 0.0, t_max.min(1.0), 1e-12);
        let body = if t_max > 1.0 {
            integrate(
                |u| {
                    let t = u.exp();
                    self.eval_unchecked(t) * t / (1.0 + t * t)
                },
                0.0,
                t_max.ln(),
                1e-12,
            )
        } else {
            0.0
        };
        (head + body, self.tail_bound(t_max))
    }

    /// `∫_1^∞ σ(yt)/t² dt` truncated at `y t = t_max`, with the remainder bound.
    pub fn dilation_integral(&self, y: f64, t_max: f64) -> (f64, f64) {
        let body = integrate(
            |u| {
                let s = u.exp();
                self.eval_unchecked(s) * y / s
            },
            y.ln(),
            t_max.ln(),
            1e-12,
        );
        (body, y * self.tail_bound(t_max))
    }
}

/// Samples the defining conditions of a weight on a geometric grid in `[1e-2, t_max]`.
pub fn check_weight_conditions(w: &WeightSpec, t_max: f64, samples: usize) -> Result<ConditionReport> {
    if !(t_max.is_finite() && t_max > 1.0) {
        return Err(Error::InvalidParameter(format!("t_max must be > 1, got {t_max}")));
    }
    if samples < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 samples, got {samples}")));
    }
    let lo = 1e-2f64.min(t_max / 10.0);
    let ratio = (t_max / lo).powf(1.0 / (samples - 1) as f64);
    let grid: Vec<f64> = (0..samples).map(|i| lo * ratio.powi(i as i32)).collect();
    let om = |t: f64| w.eval_unchecked(t);

    let doubling_ratio = |t: f64| om(2.0 * t) / (om(t) + 1.0);
    let k = grid.iter().map(|&t| doubling_ratio(t)).fold(1.0f64, f64::max);
    let (r0, r1, r2) = (
        doubling_ratio(t_max / 100.0),
        doubling_ratio(t_max / 10.0),
        doubling_ratio(t_max),
    );
    let (late, early) = (r2 - r1, r1 - r0);
    let settled = late <= 1e-3 * k || late < 0.9 * early;
    let doubling = ConditionCheck {
        verdict: Verdict::from(k.is_finite() && settled),
        witness: k,
        tail_bound: None,
        detail: format!("K = {k:.6} on grid; last two decade increments of the ratio {late:.3e}, {early:.3e}"),
    };

    let (value, tail) = w.integrability(t_max);
    let integrability = ConditionCheck {
        verdict: Verdict::from(value.is_finite() && tail.is_finite()),
        witness: value,
        tail_bound: Some(tail),
        detail: format!("integral up to {t_max:e} = {value:.9}, tail <= {tail:.3e}"),
    };

    let dom = |t: f64| om(t) / (1.0 + t * t).ln();
    let (g_end, g_prev) = (dom(t_max), dom(t_max / 10.0));
    let log_domination = ConditionCheck {
        verdict: Verdict::from(g_end > g_prev),
        witness: g_end,
        tail_bound: None,
        detail: format!("ω(t)/ln(1+t²) = {g_end:.6} at t_max, {g_prev:.6} one decade earlier"),
    };

    let u_max = t_max.ln();
    let h = u_max / (samples - 1) as f64;
    let phis: Vec<f64> = (0..samples).map(|i| w.phi(i as f64 * h)).collect();
    let min_dd = phis
        .windows(3)
        .map(|v| (v[0] - 2.0 * v[1] + v[2]) / (v[0].abs() + v[1].abs() + v[2].abs() + 1.0))
        .fold(f64::INFINITY, f64::min);
    let convexity = ConditionCheck {
        verdict: Verdict::from(min_dd >= -1e-12),
        witness: min_dd,
        tail_bound: None,
        detail: format!("smallest scaled second difference of ω(e^t) on [0, {u_max:.3}]: {min_dd:.3e}"),
    };

    let ys: Vec<f64> = grid.iter().copied().filter(|&y| y >= 1.0 && y <= t_max / 100.0).collect();
    let cs: Vec<(f64, f64, f64)> = ys
        .iter()
        .map(|&y| {
            let (v, tail) = w.dilation_integral(y, t_max);
            (y, (v + tail) / (om(y) + 1.0), tail)
        })
        .collect();
    let c = cs.iter().map(|x| x.1).fold(0.0f64, f64::max);
    let worst_tail = cs.iter().map(|x| x.2).fold(0.0f64, f64::max);
    let c_at = |y: f64| {
        let (v, tail) = w.dilation_integral(y, t_max);
        (v + tail) / (om(y) + 1.0)
    };
    let y_end = ys.last().copied().unwrap_or(1.0);
    let late = c_at(y_end) - c_at(y_end / 10.0);
    let early = c_at(y_end / 10.0) - c_at(y_end / 100.0);
    let settling = late <= 1e-3 * c || late < 0.9 * early;
    let dilation_integral = ConditionCheck {
        verdict: Verdict::from(c.is_finite() && !cs.is_empty() && settling),
        witness: c,
        tail_bound: Some(worst_tail),
        detail: format!(
            "C = {c:.6} over {} grid values of y in [1, t_max/100]; last two decade increments {late:.3e}, {early:.3e}",
            cs.len()
        ),
    };

    let step = (samples / 200).max(1);
    let sub: Vec<f64> = grid.iter().copied().step_by(step).collect();
    let mut excess = f64::NEG_INFINITY;
    let mut witness_pair = (0.0, 0.0);
    for (i, &s) in sub.iter().enumerate() {
        for &t in &sub[i..] {
            let e = om(s + t) - om(s) - om(t);
            if e > excess {
                excess = e;
                witness_pair = (s, t);
            }
        }
    }
    let subadditivity = ConditionCheck {
        verdict: Verdict::from(excess <= 1e-12),
        witness: excess,
        tail_bound: None,
        detail: format!(
            "largest ω(s+t) - ω(s) - ω(t) = {excess:.3e} at (s, t) = ({:.6e}, {:.6e})",
            witness_pair.0, witness_pair.1
        ),
    };

    Ok(ConditionReport {
        weight: *w,
        t_max,
        samples,
        doubling,
        integrability,
        log_domination,
        convexity,
        dilation_integral,
        subadditivity,
    })
}
