use serde::Serialize;

use super::Dyadic;

/// `Q_CL(i, j)`: the tridiagonal Cohen–Lenstra transition probabilities.
pub fn qcl_entry(i: u64, j: u64) -> Dyadic {
    let i_ = i as i64;
    if j + 1 == i {
        // 1 + 2^{-2i} - 2^{1-i}
        &(&Dyadic::one() + &Dyadic::pow2(-2 * i_)) - &Dyadic::pow2(1 - i_)
    } else if j == i {
        // 2^{1-i} - 3 * 2^{-1-2i}
        &Dyadic::pow2(1 - i_) - &(&Dyadic::from(3) * &Dyadic::pow2(-1 - 2 * i_))
    } else if j == i + 1 {
        Dyadic::pow2(-1 - 2 * i_)
    } else {
        Dyadic::zero()
    }
}

/// `Q_CL` restricted to states `0..=N`, with the up-move out of state `N`
/// folded into the diagonal so every row stays stochastic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedKernel {
    n: usize,
    down: Vec<Dyadic>,
    diag: Vec<Dyadic>,
    up: Vec<Dyadic>,
    clipped: Dyadic,
}

impl TruncatedKernel {
    pub fn qcl(n: usize) -> Self {
        assert!(n >= 1, "truncation bound must be at least 1");
        let mut down = Vec::with_capacity(n + 1);
        let mut diag = Vec::with_capacity(n + 1);
        let mut up = Vec::with_capacity(n + 1);
        for i in 0..=n as u64 {
            down.push(if i == 0 { Dyadic::zero() } else { qcl_entry(i, i - 1) });
            diag.push(qcl_entry(i, i));
            up.push(qcl_entry(i, i + 1));
        }
        let clipped = std::mem::take(&mut up[n]);
        diag[n] = &diag[n] + &clipped;
        Self {
            n,
            down,
            diag,
            up,
            clipped,
        }
    }

    /// Largest state `N`.
    pub fn bound(&self) -> usize {
        self.n
    }

    /// Mass moved from `(N, N+1)` onto `(N, N)`.
    pub fn clipped_mass(&self) -> &Dyadic {
        &self.clipped
    }

    pub fn get(&self, i: usize, j: usize) -> Dyadic {
        if i > self.n || j > self.n {
            return Dyadic::zero();
        }
        if j + 1 == i {
            self.down[i].clone()
        } else if j == i {
            self.diag[i].clone()
        } else if j == i + 1 {
            self.up[i].clone()
        } else {
            Dyadic::zero()
        }
    }

    pub fn row_sum(&self, i: usize) -> Dyadic {
        &(&self.down[i] + &self.diag[i]) + &self.up[i]
    }

    /// The three bands `(down, diag, up)` indexed by source state.
    pub(crate) fn bands(&self) -> (&[Dyadic], &[Dyadic], &[Dyadic]) {
        (&self.down, &self.diag, &self.up)
    }
}

/// `(Q V)(x) / V(x)` for `V(x) = 2^x`. Equals `1/2 + 2^{-x}` for `x >= 1`;
/// at `x = 0` there is no down-move.
pub fn drift_ratio(x: u64) -> Dyadic {
    let xi = x as i64;
    let mut acc = &qcl_entry(x, x) + &(&qcl_entry(x, x + 1) * &Dyadic::from(2));
    if x >= 1 {
        acc = &acc + &(&qcl_entry(x, x - 1) * &Dyadic::pow2(-1));
    }
    debug_assert!(x == 0 || acc == &Dyadic::pow2(-1) + &Dyadic::pow2(-xi));
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DriftCertificate {
    /// Supremum of the ratio over `[max(x_min, 3), x_max]`.
    pub lambda: Dyadic,
    /// Supremum over the whole scanned range.
    pub sup_range: Dyadic,
    /// States in the range whose ratio exceeds `lambda`.
    pub exceptional: Vec<u64>,
    /// `lambda < 1`.
    pub contracting: bool,
}

/// Scans `x_min..=x_max`. The ratio is decreasing for `x >= 1`, so the
/// supremum over `x >= 3` is attained at the left end of that range.
pub fn drift_certificate(x_min: u64, x_max: u64) -> DriftCertificate {
    assert!(x_min <= x_max);
    let ratios: Vec<(u64, Dyadic)> = (x_min..=x_max).map(|x| (x, drift_ratio(x))).collect();
    let sup_range = ratios.iter().map(|(_, r)| r).max().cloned().unwrap_or_default();
    let lambda = ratios
        .iter()
        .filter(|(x, _)| *x >= 3)
        .map(|(_, r)| r)
        .max()
        .cloned()
        .unwrap_or_else(|| drift_ratio(3));
    let exceptional = ratios
        .iter()
        .filter(|(_, r)| *r > lambda)
        .map(|(x, _)| *x)
        .collect();
    DriftCertificate {
        contracting: lambda < Dyadic::one(),
        lambda,
        sup_range,
        exceptional,
    }
}
