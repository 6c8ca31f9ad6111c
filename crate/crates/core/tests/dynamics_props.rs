use gs_dynamics::dynamics::{
    cesaro_ladder, derivative_growth_ratio, doubling_radius, find_m0, orbit_classify, power_bound_seminorm_sweep,
    verify_iterate_lower_bound, OUTSIDE_HYPOTHESIS,
};
use gs_dynamics::polynomials::{rat, OrbitStepper, Polynomial};
use gs_dynamics::seminorms::{hermite_gaussian_oracle, SeminormParams};
use gs_dynamics::{Error, GridSpec, WeightSpec};
use proptest::prelude::*;

fn small_grid() -> GridSpec {
    GridSpec::chebyshev(10.0, 41)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_survive_denser_grid(num in 27i64..300, b in prop::sample::select(vec![2.0f64, 3.0, 10.0])) {
        let psi = Polynomial::quadratic(rat(num, 100));
        let cert = find_m0(&psi, b, 4, &small_grid()).unwrap();
        prop_assert!(cert.m0_empirical <= cert.m0);
        prop_assert!(verify_iterate_lower_bound(&cert, &psi).unwrap().passed);
    }

    #[test]
    fn doubling_from_exact_radius(c in -30i64..30, x_off in 0.0f64..20.0, sign in prop::bool::ANY) {
        let psi = Polynomial::quadratic(rat(c, 10));
        let k = doubling_radius(&psi).unwrap();
        let x = if sign { k + x_off } else { -k - x_off };
        prop_assume!(x != 0.0);
        let orbit = OrbitStepper::new(&psi).orbit(20, x);
        for (m, y) in orbit.iter().enumerate() {
            prop_assert!(y.log_abs() >= m as f64 * 2f64.ln() + x.abs().ln() - 1e-9);
        }
    }
}

#[test]
fn quartic_certificate() {
    let psi: Polynomial = "1,0,1,0,1".parse().unwrap();
    let cert = find_m0(&psi, 2.0, 5, &GridSpec::default()).unwrap();
    assert!(verify_iterate_lower_bound(&cert, &psi).unwrap().passed);
}

#[test]
fn odd_degree_unsupported() {
    let psi: Polynomial = "1,0,0,1".parse().unwrap();
    assert!(matches!(find_m0(&psi, 2.0, 3, &GridSpec::default()), Err(Error::Unsupported(_))));
}

#[test]
fn derivative_ratio_certified_by_reported_constant() {
    let psi = Polynomial::quadratic(rat(1, 1));
    let rep = derivative_growth_ratio(&psi, 1.5, 10, 5, &small_grid()).unwrap();
    assert!(rep.max_ratio_observed <= rep.c);
    assert!(rep.scan.iter().all(|&(_, lc)| lc >= rep.log_c));
    assert!(rep.induction.holds);
}

#[test]
fn escape_classification_uses_doubling_radius() {
    let psi = Polynomial::quadratic(rat(1, 2));
    let k = doubling_radius(&psi).unwrap();
    let c = orbit_classify(&psi, 0.0, 50, k / 2.0).unwrap();
    assert!(c.diverges_at.is_some());
    assert!(!c.justified);
}

#[test]
fn cesaro_averages_are_cauchy_on_doubling_ladder() {
    let g = hermite_gaussian_oracle(1.0).unwrap();
    let psi = Polynomial::quadratic(rat(1, 2));
    let ns: Vec<usize> = (0..10).map(|i| 10usize << i).collect();
    for x in [-1.0, 0.0, 0.3] {
        let v = cesaro_ladder(&g, &psi, &ns, x).unwrap();
        for w in v.windows(2) {
            // the orbit leaves the support after a few steps, so S_n is constant and the average halves
            let diff = (w[1].1 - w[0].1).abs();
            assert!(diff <= w[0].1 / 2.0 + 1e-15, "{w:?}");
        }
    }
}

#[test]
fn sweep_bounded_and_decaying_without_fixed_points() {
    let g = hermite_gaussian_oracle(1.0).unwrap();
    let psi = Polynomial::quadratic(rat(1, 2));
    let sigma = WeightSpec::gevrey(2.0).unwrap().scaled(2.5).unwrap();
    let p = SeminormParams { lambda: 1.0, n_max: 16, q_max: 16, grid: GridSpec::chebyshev(10.0, 101) };
    let rep = power_bound_seminorm_sweep(&g, &psi, &sigma, 1.0, 10, &p).unwrap();
    assert!(!rep.has_fixed_points);
    assert!(rep.bounded && rep.eventually_decaying, "{:?}", rep.rows.iter().map(|r| r.seminorm.log_value).collect::<Vec<_>>());
    assert_eq!(rep.rows[0].m, 0);

    let with_fp = Polynomial::quadratic(rat(-2, 1));
    let rep = power_bound_seminorm_sweep(&g, &with_fp, &sigma, 1.0, 4, &p).unwrap();
    assert!(rep.has_fixed_points);

    let edge = WeightSpec::gevrey(2.0).unwrap().scaled(2.0).unwrap();
    let rep = power_bound_seminorm_sweep(&g, &psi, &edge, 1.0, 2, &p).unwrap();
    assert!(rep.flags.iter().any(|f| f == OUTSIDE_HYPOTHESIS));
    let low = WeightSpec::gevrey(2.0).unwrap().scaled(1.5).unwrap();
    assert!(power_bound_seminorm_sweep(&g, &psi, &low, 1.0, 2, &p).is_err());
}
