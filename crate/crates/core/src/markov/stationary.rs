use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::prob::{l1_distance, propagate, Mass, ProbVector};
use super::{Dyadic, TruncatedKernel};

/// Partial product of `prod_{k>=1} (1 - 2^{-k})`, stopped once the next
/// factor is within `precision` of 1. Returns `(value, factors used)`.
///
/// The omitted factors multiply to at least `1 - 2·2^{-K}`, so the relative
/// error is below `2·precision`.
pub fn eta_infinity(precision: f64) -> (f64, u32) {
    assert!(precision > 0.0);
    let mut acc = 1.0f64;
    let mut k = 1;
    loop {
        let update = 2f64.powi(-(k as i32));
        if update < precision {
            return (acc, k - 1);
        }
        acc *= 1.0 - update;
        k += 1;
    }
}

/// `eta_j(2) = prod_{k=1}^{j} (1 - 2^{-k})`.
pub fn eta(j: u64) -> f64 {
    (1..=j.min(1100)).map(|k| 1.0 - 2f64.powi(-(k as i32))).product()
}

/// `log2 pi_CL(j)`; finite for every `j` even when `pi_cl` underflows.
pub fn pi_cl_log2(j: u64, precision: f64) -> f64 {
    let (eta_inf, _) = eta_infinity(precision);
    -((j * j) as f64) + eta_inf.log2() - 2.0 * eta(j).log2()
}

/// `pi_CL(j) = 2^{-j^2} eta_inf(2) / eta_j(2)^2`. Underflows to 0 for `j >= 33`.
pub fn pi_cl(j: u64, precision: f64) -> f64 {
    let (eta_inf, _) = eta_infinity(precision);
    let scale = if j * j > 1100 {
        0.0
    } else {
        // 2^{-j^2} in two halves to stay clear of subnormal steps.
        let half = (j * j / 2) as i32;
        2f64.powi(-half) * 2f64.powi(-((j * j) as i32 - half))
    };
    scale * eta_inf / (eta(j) * eta(j))
}

pub fn pi_cl_vector(n: usize, precision: f64) -> ProbVector<f64> {
    ProbVector::new((0..=n as u64).map(|j| pi_cl(j, precision)).collect())
}

/// `sum_{j > n} pi_CL(j)`, summed directly rather than as `1 - sum`.
pub fn pi_cl_tail(n: usize, precision: f64) -> f64 {
    let mut acc = 0.0;
    for j in n as u64 + 1.. {
        let t = pi_cl(j, precision);
        acc += t;
        if t == 0.0 || t < acc * 1e-17 {
            break;
        }
    }
    acc
}

/// `prod_{k=1}^{terms} (1 - 2^{-k})` as an exact dyadic.
pub fn eta_dyadic(terms: u64) -> Dyadic {
    let mut acc = Dyadic::one();
    for k in 1..=terms {
        acc = &acc * &(&Dyadic::one() - &Dyadic::pow2(-(k as i64)));
    }
    acc
}

/// `pi_CL(j)` with `eta_inf` replaced by its `terms`-factor partial product,
/// in exact rational arithmetic.
pub fn pi_cl_exact(j: u64, terms: u64) -> BigRational {
    pi_cl_exact_with(j, &eta_dyadic(terms))
}

fn pi_cl_exact_with(j: u64, eta_inf: &Dyadic) -> BigRational {
    let ej = BigRational::from_dyadic(&eta_dyadic(j));
    let scale = BigRational::new(BigInt::one(), BigInt::one() << (j * j) as usize);
    scale * BigRational::from_dyadic(eta_inf) / (&ej * &ej)
}

pub fn pi_cl_vector_exact(n: usize, terms: u64) -> ProbVector<BigRational> {
    let eta_inf = eta_dyadic(terms);
    ProbVector::new((0..=n as u64).map(|j| pi_cl_exact_with(j, &eta_inf)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stationarity {
    pub residual: f64,
    /// Truncation, clipping and rounding allowance the residual must respect.
    pub bound: f64,
}

/// `||pi K - pi||_1` for the truncated kernel, with leaked masses counted.
pub fn stationarity_residual(n: usize, precision: f64) -> Stationarity {
    let kernel = TruncatedKernel::qcl(n);
    let pi = pi_cl_vector(n, precision);
    let moved = propagate(&pi, &kernel, 1).expect("matching bounds");
    let residual = l1_distance(&moved, &pi);
    // Inflow from the unrepresented state N+1, mass kept at N by clipping,
    // the tail both vectors lack, and float rounding.
    let clip = pi.get(n) * kernel.clipped_mass().to_f64();
    let tail = pi_cl_tail(n, precision);
    let rounding = 8.0 * (n as f64 + 1.0) * f64::EPSILON;
    let bound = 2.0 * pi_cl(n as u64 + 1, precision) + 2.0 * clip + 2.0 * tail + 2.0 * precision + rounding;
    Stationarity { residual, bound }
}

/// `sum_j |(pi K)(j) - pi(j)|` over `0..=n` in exact arithmetic, with a
/// `terms`-factor `eta_inf`. Leaked masses are not added; the total mass is
/// preserved by the kernel.
pub fn stationarity_residual_exact(n: usize, terms: u64) -> BigRational {
    let kernel = TruncatedKernel::qcl(n);
    let pi = pi_cl_vector_exact(n, terms);
    let moved = propagate(&pi, &kernel, 1).expect("matching bounds");
    pi.masses()
        .iter()
        .zip(moved.masses())
        .fold(<BigRational as Zero>::zero(), |acc, (a, b)| acc + (a - b).magnitude())
}
