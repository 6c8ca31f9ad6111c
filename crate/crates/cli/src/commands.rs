//! Dispatch from configs to library calls.

use crate::config::*;
use crate::report::{num, Report};
use gs_dynamics::dynamics::{
    cesaro_ladder, derivative_growth_ratio, find_m0, orbit_classify, power_bound_seminorm_sweep,
    verify_iterate_lower_bound,
};
use gs_dynamics::faadibruno::{inverse_binomial_recursion_holds, inverse_binomial_sum, lemma_sweep};
use gs_dynamics::resolvent::{
    backward_orbit, chain_rule_product, divergence_certificate, backward_bound_check, telescoping_product_check, NeumannSolver,
    PartReport,
};
use gs_dynamics::weights::check_weight_conditions;
use gs_dynamics::Error;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error as ThisError;

/// Relative agreement required of the two sides of the chain-rule identity.
pub const CHAIN_RULE_TOL: f64 = 1e-20;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Library(#[from] Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(Error::Invariant(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub precision_bits: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { precision_bits: gs_dynamics::hp::DEFAULT_PRECISION }
    }
}

fn parse<T: DeserializeOwned + Serialize>(v: &serde_json::Value) -> Result<(T, serde_json::Value), CliError> {
    let t: T = serde_json::from_value(v.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let resolved = serde_json::to_value(&t).expect("params serialize");
    Ok((t, resolved))
}

/// Parameters with every default filled in.
pub fn default_params(name: CommandName) -> serde_json::Value {
    fn v<T: Serialize + Default>() -> serde_json::Value {
        serde_json::to_value(T::default()).expect("params serialize")
    }
    match name {
        CommandName::VerifyLemmas => v::<VerifyLemmasParams>(),
        CommandName::Iterate => v::<IterateParams>(),
        CommandName::BoundCert => v::<BoundCertParams>(),
        CommandName::DerivativeBounds => v::<DerivativeBoundsParams>(),
        CommandName::SeminormSweep => v::<SeminormSweepParams>(),
        CommandName::Cesaro => v::<CesaroParams>(),
        CommandName::Neumann => v::<NeumannParams>(),
        CommandName::DivergenceCert => v::<DivergenceParams>(),
        CommandName::WeightCheck => v::<WeightCheckParams>(),
    }
}

/// Runs one experiment; returns the resolved parameters and the report.
pub fn run_command(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<(serde_json::Value, Report), CliError> {
    let p = &cfg.params;
    match cfg.command {
        CommandName::VerifyLemmas => {
            let (t, r) = parse(p)?;
            Ok((r, verify_lemmas(&t, opts)?))
        }
        CommandName::Iterate => {
            let (t, r) = parse(p)?;
            Ok((r, iterate(&t)?))
        }
        CommandName::BoundCert => {
            let (t, r) = parse(p)?;
            Ok((r, bound_cert(&t)?))
        }
        CommandName::DerivativeBounds => {
            let (t, r) = parse(p)?;
            Ok((r, derivative_bounds(&t)?))
        }
        CommandName::SeminormSweep => {
            let (t, r) = parse(p)?;
            Ok((r, seminorm_sweep(&t)?))
        }
        CommandName::Cesaro => {
            let (t, r) = parse(p)?;
            Ok((r, cesaro(&t)?))
        }
        CommandName::Neumann => {
            let (t, r) = parse(p)?;
            Ok((r, neumann(&t)?))
        }
        CommandName::DivergenceCert => {
            let (t, r) = parse(p)?;
            Ok((r, divergence(&t)?))
        }
        CommandName::WeightCheck => {
            let (t, r) = parse(p)?;
            Ok((r, weight_check(&t)?))
        }
    }
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn verify_lemmas(p: &VerifyLemmasParams, opts: &RunOptions) -> Result<Report, CliError> {
    let mut rep = Report::table(&["check", "n", "k", "count", "lhs", "rhs", "holds"], p);
    let sums: Vec<_> = (1..=p.binomial_n_max).into_par_iter().map(|n| (n, inverse_binomial_sum(n))).collect();
    for (n, s) in sums {
        let holds = s.agree() && s.bounded_by_three() && (n < 2 || inverse_binomial_recursion_holds(n));
        rep.push(vec!["inverse_binomial".into(), n.to_string(), String::new(), String::new(), s.direct.to_string(), "3".into(), flag(holds)]);
    }
    for row in lemma_sweep(p.n_max) {
        rep.push(vec![
            "partition_factorial".into(),
            row.n.to_string(),
            row.k.to_string(),
            row.count.to_string(),
            row.sum,
            row.n_factorial,
            flag(row.holds),
        ]);
    }
    if p.backward_bound_n_max > 0 {
        let l = backward_bound_check(4.0, p.backward_bound_n_max, opts.precision_bits)?;
        rep.push(vec![
            "backward_lower_bound".into(),
            l.n_max.to_string(),
            String::new(),
            String::new(),
            num(l.min_slack),
            "0".into(),
            flag(l.holds && l.min_slack > 0.0),
        ]);
    }
    let need = p.chain_rule_n_max.max(p.telescoping_n_max);
    if need > 0 {
        let orbit = backward_orbit(2.0, need, opts.precision_bits)?;
        for n in 1..=p.chain_rule_n_max {
            let c = chain_rule_product(&orbit, n)?;
            rep.push(vec![
                "chain_rule_product".into(),
                n.to_string(),
                String::new(),
                String::new(),
                format!("{:.3e}", c.rel_diff),
                num(CHAIN_RULE_TOL),
                flag(c.rel_diff <= CHAIN_RULE_TOL),
            ]);
        }
        if p.telescoping_n_max > 0 {
            let t = telescoping_product_check(&orbit, p.telescoping_n_max)?;
            rep.push(vec![
                "telescoping_product".into(),
                t.n_max.to_string(),
                String::new(),
                String::new(),
                num(t.min_log_slack),
                "0".into(),
                flag(t.holds),
            ]);
        }
    }
    let bad = rep.rows.iter().filter(|r| r[6] != "true").count();
    if bad > 0 {
        rep.failure = Some(format!("{bad} checks failed"));
    }
    Ok(rep)
}

fn iterate(p: &IterateParams) -> Result<Report, CliError> {
    let psi = p.psi.parse()?;
    let classes = p
        .x
        .iter()
        .map(|&x| orbit_classify(&psi, x, p.horizon, p.escape_threshold).map(|c| (x, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::table(&["x", "m", "value", "diverges_at", "bounded_hint", "justified"], &classes);
    for (x, c) in &classes {
        let div = c.diverges_at.map(|m| m.to_string()).unwrap_or_default();
        for (m, v) in c.orbit_prefix.iter().enumerate() {
            rep.push(vec![num(*x), m.to_string(), num(*v), div.clone(), flag(c.bounded_hint), flag(c.justified)]);
        }
    }
    if let Some(k) = classes.first().and_then(|c| c.1.doubling_radius) {
        rep.notes.push(format!("doubling radius K = {}", num(k)));
    }
    Ok(rep)
}

fn bound_cert(p: &BoundCertParams) -> Result<Report, CliError> {
    let psi = p.psi.parse()?;
    let cert = find_m0(&psi, p.b, p.k_max, &p.grid)?;
    let v = verify_iterate_lower_bound(&cert, &psi)?;
    let mut rep = Report::key_value(
        vec![
            ("b", num(cert.b)),
            ("m0", cert.m0.to_string()),
            ("m0_empirical", cert.m0_empirical.to_string()),
            ("B", num(cert.big_b)),
            ("a_gap", cert.a_gap.to_string()),
            ("min_phi", cert.min_phi.to_string()),
            ("k_max", cert.k_max.to_string()),
            ("critical_points", cert.critical_points.len().to_string()),
            ("points_checked", v.points_checked.to_string()),
            ("min_margin", num(v.min_margin)),
            ("witness_x", num(v.witness.x)),
            ("witness_k", v.witness.k.to_string()),
            ("passed", flag(v.passed)),
        ],
        serde_json::json!({ "certificate": cert, "verification": v }),
    );
    if !v.passed {
        rep.failure = Some(format!("lower bound violated at x = {}, k = {}", num(v.witness.x), v.witness.k));
    }
    Ok(rep)
}

fn derivative_bounds(p: &DerivativeBoundsParams) -> Result<Report, CliError> {
    let psi = p.psi.parse()?;
    let d = derivative_growth_ratio(&psi, p.alpha, p.n_max, p.m_max, &p.grid)?;
    let i = &d.induction;
    let wit = |w: Option<gs_dynamics::dynamics::DerivativeWitness>| {
        w.map(|w| format!("x={} n={} m={}", num(w.x), w.n, w.m)).unwrap_or_default()
    };
    let mut pairs = vec![
        ("alpha", num(d.alpha)),
        ("C", num(d.c)),
        ("log_C", num(d.log_c)),
        ("r", num(d.r)),
        ("max_ratio_observed", num(d.max_ratio_observed)),
        ("argmax", wit(d.argmax)),
        ("points_checked", d.points_checked.to_string()),
        ("induction_c", num(i.c)),
        ("induction_lambda", num(i.lambda)),
        ("induction_x0", num(i.x0)),
        ("induction_m0", i.m0.to_string()),
        ("induction_log_r", num(i.log_r)),
        ("induction_min_margin", num(i.min_margin)),
        ("induction_witness", wit(i.witness)),
        ("induction_sign_unstable", i.sign_unstable.to_string()),
        ("induction_holds", flag(i.holds)),
    ];
    let scan: Vec<(String, String)> = d.scan.iter().map(|(r, lc)| (format!("log_C_at_r={}", num(*r)), num(*lc))).collect();
    let mut rep = Report::key_value(std::mem::take(&mut pairs), &d);
    for (k, v) in scan {
        rep.push(vec![k, v]);
    }
    if !i.holds {
        rep.failure = Some("induction-form bound violated".into());
    }
    Ok(rep)
}

fn seminorm_sweep(p: &SeminormSweepParams) -> Result<Report, CliError> {
    let psi = p.psi.parse()?;
    let f = p.f.build()?;
    let s = power_bound_seminorm_sweep(f.as_ref(), &psi, &p.sigma, p.lambda, p.m_max, &p.trunc)?;
    let mut rep = Report::table(&["m", "log_value", "value", "argmax_x", "argmax_n", "argmax_q", "boundary"], &s);
    for row in &s.rows {
        let r = &row.seminorm;
        let (ax, an, aq) = r
            .argmax
            .map(|a| (num(a.x), a.n.to_string(), a.q.to_string()))
            .unwrap_or_default();
        rep.push(vec![row.m.to_string(), num(r.log_value), num(r.value), ax, an, aq, flag(r.boundary)]);
    }
    rep.notes.extend(s.flags.iter().cloned());
    rep.notes.push(format!("bounded={} eventually_decaying={}", s.bounded, s.eventually_decaying));
    Ok(rep)
}

fn cesaro(p: &CesaroParams) -> Result<Report, CliError> {
    let psi = p.psi.parse()?;
    let f = p.f.build()?;
    let rows = p
        .x
        .iter()
        .map(|&x| cesaro_ladder(f.as_ref(), &psi, &p.n, x).map(|v| (x, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::table(&["x", "n", "average"], &rows);
    for (x, v) in &rows {
        for (n, a) in v {
            rep.push(vec![num(*x), n.to_string(), num(*a)]);
        }
    }
    Ok(rep)
}

fn neumann(p: &NeumannParams) -> Result<Report, CliError> {
    let psi = p.psi.parse()?;
    let f = p.f.build()?;
    let mu = Complex64::new(p.mu[0], p.mu[1]);
    let solver = NeumannSolver::new(&psi)?;
    let results = p
        .x
        .par_iter()
        .map(|&x| -> Result<_, Error> {
            let r = solver.apply(f.as_ref(), mu, x, p.tol)?;
            let c = solver.residual(f.as_ref(), mu, x, p.tol)?;
            Ok((r, c))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::table(
        &["x", "re", "im", "terms_used", "certified", "tail_log", "residual", "passed"],
        &results,
    );
    let mut warnings: Vec<String> = Vec::new();
    for (r, c) in &results {
        rep.push(vec![
            num(c.x),
            num(r.value.re),
            num(r.value.im),
            r.terms_used.to_string(),
            flag(r.cert.certified),
            num(r.cert.tail_log),
            num(c.residual),
            flag(c.passed),
        ]);
        for w in &r.warnings {
            if !warnings.contains(w) {
                warnings.push(w.clone());
            }
        }
    }
    rep.notes = warnings;
    let bad = results.iter().filter(|(_, c)| !c.passed).count();
    if bad > 0 {
        rep.failure = Some(format!("resolvent identity residual above 10 tol at {bad} points"));
    }
    Ok(rep)
}

fn part_pairs(prefix: &str, part: &PartReport, out: &mut Vec<(String, String)>) {
    out.push((format!("{prefix}.status"), format!("{:?}", part.status).to_lowercase()));
    out.push((format!("{prefix}.message"), part.message.clone()));
    for (c, n) in &part.n_star_for_c {
        out.push((format!("{prefix}.n_star_for_C.{c}"), n.map(|n| n.to_string()).unwrap_or_default()));
    }
    if let Some(g) = part.final_log_gap {
        out.push((format!("{prefix}.final_log_gap"), num(g)));
    }
    if let Some(s) = &part.slopes {
        for (n, v) in &s.lhs {
            out.push((format!("{prefix}.slopes.lhs.{n}"), num(*v)));
        }
        for (n, v) in &s.rhs {
            out.push((format!("{prefix}.slopes.rhs.{n}"), num(*v)));
        }
    }
}

fn divergence(p: &DivergenceParams) -> Result<Report, CliError> {
    let d = divergence_certificate(p.d, p.d_prime, p.mu_abs, p.n_max)?;
    let mut pairs = Vec::new();
    part_pairs("part1", &d.part1, &mut pairs);
    if let Some(p2) = &d.part2 {
        part_pairs("part2", p2, &mut pairs);
    }
    let mut rep = Report::table(&["key", "value"], &d);
    for (k, v) in pairs {
        rep.push(vec![k, v]);
    }
    Ok(rep)
}

fn weight_check(p: &WeightCheckParams) -> Result<Report, CliError> {
    let r = check_weight_conditions(&p.weight, p.t_max, p.samples)?;
    let mut rep = Report::table(&["check", "verdict", "witness", "tail_bound", "detail"], &r);
    for (name, c) in r.checks() {
        rep.push(vec![
            name.to_string(),
            c.verdict.as_str().to_string(),
            num(c.witness),
            c.tail_bound.map(num).unwrap_or_default(),
            c.detail.clone(),
        ]);
    }
    rep.notes.push(format!("weight {}", p.weight));
    Ok(rep)
}
