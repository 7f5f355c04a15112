use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::{binomial, Dyadic};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoeffdingTail {
    pub r: usize,
    pub epsilon: f64,
    /// `2^{-r} · #{kappa : kappa < eps·r or kappa > (1 - eps)·r}` weighted binomially.
    pub exact: Dyadic,
    pub exact_f64: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Exact two-sided binomial tail against `2·exp(-2(1/2 - eps)^2 r)`.
///
/// Boundaries are strict and compared in exact rational arithmetic against
/// the binary value of `epsilon`.
pub fn hoeffding_tail(r: usize, epsilon: f64) -> Result<HoeffdingTail> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    let eps = BigRational::from_f64(epsilon).expect("finite");
    let rr = BigRational::from_integer(BigInt::from(r));
    let lo = &eps * &rr;
    let hi = (BigRational::from_integer(1.into()) - &eps) * &rr;
    let mut count = BigInt::zero();
    for k in 0..=r {
        let kq = BigRational::from_integer(BigInt::from(k));
        if kq < lo || kq > hi {
            count += binomial(r as u64, k as u64);
        }
    }
    let exact = Dyadic::new(count, r as u64);
    let exact_f64 = exact.to_f64();
    let bound = 2.0 * (-2.0 * (0.5 - epsilon).powi(2) * r as f64).exp();
    Ok(HoeffdingTail {
        r,
        epsilon,
        holds: exact_f64 <= bound,
        exact,
        exact_f64,
        bound,
    })
}
