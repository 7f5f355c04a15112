use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Dyadic, TruncatedKernel};
use crate::error::{Error, Result};

/// Scalar type a probability vector can carry.
pub trait Mass: Clone + PartialOrd + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn magnitude(&self) -> Self;
    fn from_dyadic(d: &Dyadic) -> Self;
    fn to_f64(&self) -> f64;
}

impl Mass for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
    fn from_dyadic(d: &Dyadic) -> Self {
        d.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Mass for Dyadic {
    fn zero() -> Self {
        Dyadic::zero()
    }
    fn one() -> Self {
        Dyadic::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
    fn from_dyadic(d: &Dyadic) -> Self {
        d.clone()
    }
    fn to_f64(&self) -> f64 {
        Dyadic::to_f64(self)
    }
}

impl Mass for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
    fn from_dyadic(d: &Dyadic) -> Self {
        BigRational::new(
            d.numerator().clone(),
            BigInt::from(1) << d.exponent() as usize,
        )
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Converts without overflowing on huge numerators or denominators.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let (n, d) = (q.numer(), q.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    // Scale to roughly [1, 2) with 64 bits of headroom, then divide.
    let scaled = if shift >= 0 {
        (n << 64usize) / (d << shift as usize)
    } else {
        (n << (64 + (-shift) as usize)) / d
    };
    let m = scaled.to_f64().unwrap_or(f64::NAN);
    let e = shift - 64;
    let mut x = m;
    let mut e = e;
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return 0.0;
        }
    }
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Masses on states `0..=N`. Whatever is missing from total mass 1 is
/// the leaked mass of the untracked tail.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector<T> {
    p: Vec<T>,
}

impl<T: Mass> ProbVector<T> {
    pub fn new(p: Vec<T>) -> Self {
        assert!(!p.is_empty(), "a probability vector has at least one state");
        Self { p }
    }

    /// Point mass at `j` on states `0..=n`.
    pub fn delta(n: usize, j: usize) -> Self {
        let mut p = vec![T::zero(); n + 1];
        p[j] = T::one();
        Self { p }
    }

    pub fn bound(&self) -> usize {
        self.p.len() - 1
    }

    pub fn masses(&self) -> &[T] {
        &self.p
    }

    pub fn get(&self, j: usize) -> T {
        self.p.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.p.iter().fold(T::zero(), |acc, x| acc.plus(x))
    }

    /// `max(0, 1 - total)`.
    pub fn leaked(&self) -> T {
        let l = T::one().minus(&self.total());
        if l < T::zero() {
            T::zero()
        } else {
            l
        }
    }

    pub fn to_f64(&self) -> ProbVector<f64> {
        ProbVector {
            p: self.p.iter().map(Mass::to_f64).collect(),
        }
    }
}

/// `mu K^steps`.
pub fn propagate<T: Mass>(
    mu: &ProbVector<T>,
    kernel: &TruncatedKernel,
    steps: usize,
) -> Result<ProbVector<T>> {
    let n = kernel.bound();
    if mu.bound() != n {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: mu.p.len(),
        });
    }
    let (down, diag, up) = kernel.bands();
    let conv = |b: &[Dyadic]| b.iter().map(T::from_dyadic).collect::<Vec<_>>();
    let (down, diag, up) = (conv(down), conv(diag), conv(up));
    let mut cur = mu.p.clone();
    let mut next = vec![T::zero(); n + 1];
    for _ in 0..steps {
        for (j, slot) in next.iter_mut().enumerate() {
            let mut acc = cur[j].times(&diag[j]);
            if j > 0 {
                acc = acc.plus(&cur[j - 1].times(&up[j - 1]));
            }
            if j < n {
                acc = acc.plus(&cur[j + 1].times(&down[j + 1]));
            }
            *slot = acc;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(ProbVector { p: cur })
}

/// `sum_j |mu(j) - nu(j)|` over the padded common support, plus both leaked
/// masses.
pub fn l1_distance<T: Mass>(mu: &ProbVector<T>, nu: &ProbVector<T>) -> T {
    let len = mu.p.len().max(nu.p.len());
    let mut acc = T::zero();
    for j in 0..len {
        acc = acc.plus(&mu.get(j).minus(&nu.get(j)).magnitude());
    }
    acc.plus(&mu.leaked()).plus(&nu.leaked())
}
