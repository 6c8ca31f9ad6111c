use gs_dynamics::polynomials::{rat, OrbitStepper, Polynomial};
use gs_dynamics::resolvent::{
    backward_orbit, divergence_sweep, neumann_seminorm_series, CertificateStatus, NeumannSolver, SeriesVerdict,
    PRE_ASYMPTOTIC,
};
use gs_dynamics::seminorms::{hermite_gaussian_oracle, SeminormParams, SmoothFunction, ZeroFunction};
use gs_dynamics::{hp, GridSpec, WeightSpec};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn terms_dominated_by_certificate(x in -6.0f64..6.0, re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let mu = Complex64::new(re, im);
        prop_assume!(mu.norm() > 0.2);
        let g = hermite_gaussian_oracle(1.0).unwrap();
        let psi = Polynomial::quadratic(rat(1, 2));
        let solver = NeumannSolver::new(&psi).unwrap();
        let r = solver.apply(&g, mu, x, 1e-10).unwrap();
        let orbit = OrbitStepper::new(&psi).orbit(r.terms_used - 1, x);
        for (m, y) in orbit.iter().enumerate() {
            let term = if y.log_abs() < 700.0 { (g.value(y.to_f64())).ln() } else { f64::NEG_INFINITY };
            let term = term - (m + 1) as f64 * mu.norm().ln();
            prop_assert!(term <= r.cert.bound_terms[m] + 1e-9, "m={} {} {}", m, term, r.cert.bound_terms[m]);
        }
    }
}

#[test]
fn backward_orbit_consistency() {
    let o = backward_orbit(2.0, 300, 160).unwrap();
    let psi = Polynomial::quadratic(rat(1, 4));
    for k in 0..300 {
        assert!(hp::rel_diff(&psi.eval_hp(&o.x[k + 1], 160), &o.x[k]) < 1e-40);
    }
    let r = o.residuals();
    assert!(r.monotone && r.forward < 1e-40 && r.y_recurrence < 1e-40);
}

#[test]
fn series_small_m_max_is_pre_asymptotic() {
    let g = hermite_gaussian_oracle(1.0).unwrap();
    let psi = Polynomial::quadratic(rat(1, 2));
    let sigma = WeightSpec::gevrey(2.0).unwrap().scaled(2.5).unwrap();
    let p = SeminormParams { lambda: 1.0, n_max: 10, q_max: 10, grid: GridSpec::chebyshev(8.0, 81) };
    let r = neumann_seminorm_series(&g, &psi, 0.5, &sigma, &p, 5).unwrap();
    assert_eq!(r.verdict, SeriesVerdict::Inconclusive);
    assert!(r.detail.starts_with(PRE_ASYMPTOTIC));
    let z = neumann_seminorm_series(&ZeroFunction, &psi, 0.5, &sigma, &p, 3).unwrap();
    assert!(z.partial_sums.iter().all(|&v| v == 0.0));
}

#[test]
fn series_converges_for_small_mu() {
    let g = hermite_gaussian_oracle(1.0).unwrap();
    let psi = Polynomial::quadratic(rat(1, 2));
    let sigma = WeightSpec::gevrey(2.0).unwrap().scaled(2.5).unwrap();
    let p = SeminormParams { lambda: 1.0, n_max: 16, q_max: 16, grid: GridSpec::chebyshev(10.0, 101) };
    let r = neumann_seminorm_series(&g, &psi, 0.5, &sigma, &p, 12).unwrap();
    assert_eq!(r.verdict, SeriesVerdict::Converged, "{}", r.detail);
}

#[test]
fn divergence_sweep_keeps_order() {
    let params = [(1.5, None, 2.0), (1.2, None, 3.0), (2.0, None, 1.5)];
    let out = divergence_sweep(&params, 2000);
    for ((d, _, mu), r) in params.iter().zip(&out) {
        let r = r.as_ref().unwrap();
        assert_eq!((r.d, r.mu_abs), (*d, *mu));
        assert_eq!(r.part1.status, CertificateStatus::Certified);
    }
}

#[test]
fn json_shape_of_certificate() {
    let r = gs_dynamics::resolvent::divergence_certificate(1.5, None, 2.0, 1000).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert!(v["part1"]["n_star_for_C"]["1e6"].is_u64());
    assert!(v["part1"]["slopes"]["lhs"]["1000"].is_f64());
}
