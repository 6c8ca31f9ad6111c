//! Acceptance suite: one PASS/FAIL line per criterion. Run with `cargo test --test acceptance`.

use gs_dynamics::dynamics::{find_m0, induction_check, verify_iterate_lower_bound};
use gs_dynamics::faadibruno::{
    composite_derivative_exact, inverse_binomial_recursion_holds, inverse_binomial_sum, lemma_sweep,
};
use gs_dynamics::polynomials::{parse_rational, rat, Polynomial};
use gs_dynamics::resolvent::{
    backward_orbit, chain_rule_product, divergence_certificate, backward_bound_check, neumann_seminorm_series,
    telescoping_product_check, CertificateStatus, NeumannSolver, SeriesVerdict,
};
use gs_dynamics::seminorms::{hermite_gaussian_oracle, SeminormParams};
use gs_dynamics::{GridSpec, WeightSpec};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

const C1_N_MAX: usize = 200;
const C1_LIMIT: Duration = Duration::from_secs(5);
const C2_N_MAX: usize = 25;
const C2_LIMIT: Duration = Duration::from_secs(60);
const C3_PAIRS: usize = 200;
const C3_DEGREE: usize = 6;
const C3_ORDER: usize = 10;
const C4_K_MAX: usize = 6;
const C4_LIMIT: Duration = Duration::from_secs(30);
const C5_N_MAX: usize = 20;
const C5_M_MAX: usize = 10;
const C6_N_MAX: usize = 10_000;
const C6_PRECISION: usize = 256;
const C6_LIMIT: Duration = Duration::from_secs(10);
const C7_SYMBOLIC_N: usize = 12;
const C7_PRODUCT_N: usize = 1000;
const C7_REL_TOL: f64 = 1e-20;
const C8_N_MAX: u64 = 10_000;
const C8_SLOPE_REL: f64 = 0.05;
const C9_TOL: f64 = 1e-10;
const C9_POINTS: usize = 100;
const C10_M_MAX: usize = 12;
const C10_MU: f64 = 2.0;
const C10_SLOPE_MIN: f64 = 0.8;

type Outcome = (bool, String);

fn seed() -> u64 {
    std::env::var("GS_DYNAMICS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_601)
}

/// Pascal-row recomputation of `Σ 1/C(n,k)`.
fn pascal_inverse_sum(n: usize) -> BigRational {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row.into_iter().map(|c| BigRational::new(BigInt::one(), c)).sum()
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let three = BigRational::from_integer(3.into());
    let mut bad = Vec::new();
    for n in 1..=C1_N_MAX {
        let s = inverse_binomial_sum(n);
        let ok = s.agree()
            && s.direct == pascal_inverse_sum(n)
            && s.direct <= three
            && (n < 2 || inverse_binomial_recursion_holds(n));
        if !ok {
            bad.push(n);
        }
    }
    let el = t.elapsed();
    (bad.is_empty() && el < C1_LIMIT, format!("n <= {C1_N_MAX}, failures {bad:?}, {el:.2?}"))
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let rows = lemma_sweep(C2_N_MAX);
    let bad: Vec<_> = rows.iter().filter(|r| !r.holds).map(|r| (r.n, r.k)).collect();
    let vectors: usize = rows.iter().map(|r| r.count).sum();
    let el = t.elapsed();
    (
        bad.is_empty() && el < C2_LIMIT,
        format!("{} (n,k) pairs, {vectors} vectors, failures {bad:?}, {el:.2?}", rows.len()),
    )
}

fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
    let deg = rng.gen_range(0..=C3_DEGREE);
    let coeffs = (0..=deg)
        .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
        .collect();
    Polynomial::new(coeffs)
}

fn criterion3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut mismatches = 0;
    for _ in 0..C3_PAIRS {
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let x = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let fg = f.compose(&g).expect("small degree");
        for n in 0..=C3_ORDER {
            let lhs = composite_derivative_exact(&f, &g, n, &x).expect("oracle");
            if lhs != fg.nth_derivative(n).eval(&x) {
                mismatches += 1;
            }
        }
    }
    (mismatches == 0, format!("{C3_PAIRS} pairs, n <= {C3_ORDER}, seed {}, mismatches {mismatches}", seed()))
}

fn criterion4() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for c in ["0.3", "0.5", "1", "2"] {
        let psi = Polynomial::quadratic(parse_rational(c).unwrap());
        for b in [2.0, 10.0] {
            match find_m0(&psi, b, C4_K_MAX, &GridSpec::default()) {
                Ok(cert) => {
                    let r = verify_iterate_lower_bound(&cert, &psi).expect("verify");
                    ok &= r.passed;
                    parts.push(format!("c={c} b={b}: m0={} emp={} margin={:.3}", cert.m0, cert.m0_empirical, r.min_margin));
                }
                Err(e) => {
                    ok = false;
                    parts.push(format!("c={c} b={b}: {e}"));
                }
            }
        }
    }
    let el = t.elapsed();
    (ok && el < C4_LIMIT, format!("{}; {el:.2?}", parts.join("; ")))
}

fn criterion5() -> Outcome {
    let psi = Polynomial::quadratic(rat(1, 2));
    match induction_check(&psi, 2.0, C5_N_MAX, C5_M_MAX, &GridSpec::default()) {
        Ok(r) => (
            r.holds && r.m_checked >= C5_M_MAX,
            format!(
                "c={:.4} lambda={:.4} x0={:.3} m0={} ln r={:.3} min margin {:.3} at {:?}, sign-unstable {}",
                r.c, r.lambda, r.x0, r.m0, r.log_r, r.min_margin, r.witness, r.sign_unstable
            ),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn criterion6() -> Outcome {
    let t = Instant::now();
    let r = backward_bound_check(4.0, C6_N_MAX, C6_PRECISION).expect("lemma check");
    let el = t.elapsed();
    (
        r.holds && r.min_slack > 0.0 && el < C6_LIMIT,
        format!("min slack {:.3e} at n={}, {el:.2?}", r.min_slack, r.min_slack_at),
    )
}

fn criterion7() -> Outcome {
    let orbit = backward_orbit(2.0, C7_PRODUCT_N, 128).expect("orbit");
    let mut worst = 0.0f64;
    for n in 1..=C7_SYMBOLIC_N {
        worst = worst.max(chain_rule_product(&orbit, n).expect("chain rule").rel_diff);
    }
    let tel = telescoping_product_check(&orbit, C7_PRODUCT_N).expect("telescoping");
    (
        worst <= C7_REL_TOL && tel.holds,
        format!("max rel diff {worst:.3e} (n <= {C7_SYMBOLIC_N}); telescoping min log slack {:.3e}", tel.min_log_slack),
    )
}

fn criterion8() -> Outcome {
    let r1 = divergence_certificate(1.5, None, 2.0, C8_N_MAX).expect("part 1");
    let key = C8_N_MAX.to_string();
    let slope = r1.part1.slopes.as_ref().map(|s| s.lhs[&key]).unwrap_or(f64::NAN);
    let p1 = r1.part1.n_star_for_c["1e6"].is_some_and(|n| n <= C8_N_MAX) && ((slope - 2.0) / 2.0).abs() <= C8_SLOPE_REL;

    let r2 = divergence_certificate(2.0, Some(3.5), 2.0, C8_N_MAX).expect("part 2");
    let part2 = r2.part2.expect("part 2 report");
    let p2 = part2.status == CertificateStatus::Certified;

    let r3 = divergence_certificate(1.5, Some(3.5), 2.0, C8_N_MAX).expect("boundary");
    let p3 = r3.part2.expect("boundary report").status == CertificateStatus::Inconclusive;
    (
        p1 && p2 && p3,
        format!(
            "part1 n*={:?} slope {slope:.4} [{}]; part2 n*={:?} gap at n_max {:.3} [{}]; boundary [{}]",
            r1.part1.n_star_for_c,
            if p1 { "ok" } else { "fail" },
            part2.n_star_for_c,
            part2.final_log_gap.unwrap_or(f64::NAN),
            if p2 { "ok" } else { "fail" },
            if p3 { "ok" } else { "fail" },
        ),
    )
}

fn criterion9() -> Outcome {
    let f = hermite_gaussian_oracle(1.0).unwrap();
    let psi = Polynomial::quadratic(rat(1, 2));
    let solver = NeumannSolver::new(&psi).expect("solver");
    let nodes = GridSpec::chebyshev(10.0, C9_POINTS).nodes();
    let mut ok = true;
    let mut parts = Vec::new();
    for mu in [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(-3.0, 0.0), Complex64::new(1.0, 1.0)] {
        let mut worst = 0.0f64;
        for &x in &nodes {
            let r = solver.residual(&f, mu, x, C9_TOL).expect("residual");
            worst = worst.max(r.residual);
        }
        ok &= worst <= 10.0 * C9_TOL;
        parts.push(format!("mu={mu}: {worst:.2e}"));
    }
    (ok, format!("{} points; {}", nodes.len(), parts.join(", ")))
}

fn criterion10() -> Outcome {
    let f = hermite_gaussian_oracle(1.0).unwrap();
    let psi = Polynomial::quadratic(rat(1, 2));
    // Gevrey(5) written as the Gevrey(2) weight composed with t^(1/2.5)
    let sigma = WeightSpec::gevrey(2.0).unwrap().scaled(2.5).unwrap();
    let params = SeminormParams::default().with_lambda(1.0);
    match neumann_seminorm_series(&f, &psi, C10_MU, &sigma, &params, C10_M_MAX) {
        Ok(r) => (
            r.verdict == SeriesVerdict::Converged && r.shape_slope.is_some_and(|s| s >= C10_SLOPE_MIN),
            format!("m0={} verdict {:?}, {}", r.m0, r.verdict, r.detail),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
        (10, criterion10),
    ];
    let mut failed = Vec::new();
    for (i, run) in criteria {
        let (ok, detail) = run();
        println!("CRITERION {i}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(i);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
