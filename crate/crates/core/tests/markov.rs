use corank::markov::{
    drift_certificate, drift_ratio, l1_distance, pi_cl_log2, pi_cl_vector, pi_cl_vector_exact,
    propagate, qcl_entry, rate_fit, stationarity_residual, stationarity_residual_exact, Dyadic,
    ProbVector, TruncatedKernel, DEFAULT_PRECISION,
};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn point_masses_converge_monotonically() {
    let n = 64;
    let kernel = TruncatedKernel::qcl(n);
    let pi = pi_cl_vector(n, DEFAULT_PRECISION);
    for j in 0..=8 {
        let mut mu = ProbVector::<f64>::delta(n, j);
        let mut prev = l1_distance(&mu, &pi);
        for step in 1..=200 {
            mu = propagate(&mu, &kernel, 1).unwrap();
            let d = l1_distance(&mu, &pi);
            assert!(d <= prev + 1e-14, "j = {j}, step = {step}: {d} > {prev}");
            prev = d;
        }
        assert!(prev < 1e-10, "j = {j}: distance {prev} after 200 steps");
    }
}

#[test]
fn exact_pi_is_positive_and_decreasing() {
    let pi = pi_cl_vector_exact(64, 80);
    let m = pi.masses();
    assert!(m.iter().all(|p| *p > Zero::zero()));
    // pi(1) = 2 pi(0); from j = 1 on the law decreases.
    assert!(m[1] > m[0]);
    assert!(m[1..].windows(2).all(|w| w[1] < w[0]));
    // The log scale stays finite where f64 underflows.
    let logs: Vec<f64> = (0..=64).map(|j| pi_cl_log2(j, DEFAULT_PRECISION)).collect();
    assert!(logs.iter().all(|x| x.is_finite()));
    assert!(logs[1..].windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn truncated_rows_are_stochastic() {
    for n in [1usize, 2, 7, 64, 255, 256] {
        let k = TruncatedKernel::qcl(n);
        for i in 0..=n {
            assert_eq!(k.row_sum(i), Dyadic::one(), "n = {n}, row {i}");
        }
    }
}

#[test]
fn kernel_rows_sum_to_one_untruncated() {
    for i in 0..200u64 {
        let lo = i.saturating_sub(1);
        let s: Dyadic = (lo..=i + 1).map(|j| qcl_entry(i, j)).sum();
        assert_eq!(s, Dyadic::one());
    }
}

#[test]
fn stationarity_within_bounds() {
    let s = stationarity_residual(64, DEFAULT_PRECISION);
    assert!(s.residual <= 1e-12);
    assert!(s.residual <= s.bound);
    for n in [8, 20, 64] {
        assert!(stationarity_residual_exact(n, 100).is_zero());
    }
}

#[test]
fn drift_identity_and_certificate() {
    for x in 1..=64u64 {
        assert_eq!(drift_ratio(x), &Dyadic::pow2(-1) + &Dyadic::pow2(-(x as i64)));
    }
    let cert = drift_certificate(0, 64);
    assert_eq!(cert.lambda, Dyadic::new(5, 3));
    assert_eq!(cert.exceptional, vec![0, 1, 2]);
    assert!(cert.contracting);
}

#[test]
fn rate_fit_recovers_geometric_decay() {
    let pts: Vec<(f64, f64)> = (1..=6).map(|r| (r as f64, 3.0 * 0.7f64.powi(r))).collect();
    let fit = rate_fit(&pts).unwrap();
    assert!((fit.rho_hat - 0.7).abs() < 1e-12);
    assert!((fit.c_hat - 3.0).abs() < 1e-10);
    assert!(fit.residual < 1e-12);
}

proptest! {
    #[test]
    fn propagation_preserves_mass(weights in prop::collection::vec(0u32..1000, 33), steps in 0usize..40) {
        let total: u32 = weights.iter().sum();
        prop_assume!(total > 0);
        let mu = ProbVector::new(weights.iter().map(|&w| Dyadic::ratio(w as u128, 0)).collect());
        let k = TruncatedKernel::qcl(32);
        let out = propagate(&mu, &k, steps).unwrap();
        prop_assert_eq!(out.total(), mu.total());
        prop_assert!(out.masses().iter().all(|p| !p.is_negative()));
    }

    #[test]
    fn l1_is_a_metric(a in prop::collection::vec(0.0f64..1.0, 10), b in prop::collection::vec(0.0f64..1.0, 10)) {
        let (pa, pb) = (ProbVector::new(a), ProbVector::new(b));
        let d = l1_distance(&pa, &pb);
        prop_assert!(d >= 0.0);
        prop_assert!((d - l1_distance(&pb, &pa)).abs() < 1e-12);
        prop_assert_eq!(l1_distance(&pa, &pa), 0.0);
    }
}
