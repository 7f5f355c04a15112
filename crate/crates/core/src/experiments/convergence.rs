use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::mc::{mc_target, splitmix64};
use super::mixture::Target;
use crate::error::{Error, Result};
use crate::markov::{rate_fit, RateFit};

/// How each `r` of a convergence report is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModePolicy {
    /// Exact when the enumeration fits the budget, sampled otherwise.
    Auto,
    Exact,
    Mc,
}

impl fmt::Display for ModePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModePolicy::Auto => "auto",
            ModePolicy::Exact => "exact",
            ModePolicy::Mc => "mc",
        })
    }
}

impl FromStr for ModePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ModePolicy::Auto),
            "exact" => Ok(ModePolicy::Exact),
            "mc" => Ok(ModePolicy::Mc),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowMode {
    Exact,
    Mc,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub r: usize,
    pub distance: f64,
    pub mode: RowMode,
    pub samples: Option<u64>,
    /// Seed actually used for this row (MC only).
    pub seed: Option<u64>,
    pub stderr: f64,
    /// `3 · stderr`; zero for exact rows.
    pub floor: f64,
    pub below_floor: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub target: Target,
    pub rows: Vec<ConvergenceRow>,
    pub fit: Option<RateFit>,
    /// Rows fed to the fit: those before the first row at the noise floor.
    pub fitted_points: usize,
}

impl ConvergenceReport {
    pub fn rho_hat(&self) -> Option<f64> {
        self.fit.map(|f| f.rho_hat)
    }

    /// Rows before the first one at the noise floor.
    pub fn pre_floor(&self) -> &[ConvergenceRow] {
        let end = self.rows.iter().position(|r| r.below_floor).unwrap_or(self.rows.len());
        &self.rows[..end]
    }

    /// Distances strictly decrease across the pre-floor rows, and the first
    /// floor row (if any) does not exceed the last pre-floor distance by more
    /// than its own floor.
    pub fn decreasing_until_floor(&self) -> bool {
        let pre = self.pre_floor();
        let strictly = pre.windows(2).all(|w| w[1].distance < w[0].distance);
        let handoff = match (pre.last(), self.rows.get(pre.len())) {
            (Some(last), Some(next)) => next.distance < last.distance + next.floor,
            _ => true,
        };
        strictly && handoff
    }
}

/// Seed used for the MC row at size `r`.
pub fn row_seed(seed: u64, r: usize) -> u64 {
    splitmix64(seed ^ splitmix64(r as u64))
}

/// `||mu_r - pi_CL||_1` for each `r`, then `rate_fit` over the pre-floor rows
/// when there are at least three.
pub fn convergence_report(
    target: Target,
    rs: &[usize],
    policy: ModePolicy,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<ConvergenceReport> {
    if rs.is_empty() {
        return Err(Error::InvalidArgument("r list is empty".into()));
    }
    if rs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("r list must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(rs.len());
    for &r in rs {
        let fits = target.exact_work_log2(r) < 64 && (1u64 << target.exact_work_log2(r)) <= budget;
        let exact = match policy {
            ModePolicy::Exact => true,
            ModePolicy::Mc => false,
            ModePolicy::Auto => fits,
        };
        let row = if exact {
            let e = target.exact(r, budget)?;
            ConvergenceRow {
                r,
                distance: e.distance_to_pi(),
                mode: RowMode::Exact,
                samples: None,
                seed: None,
                stderr: 0.0,
                floor: 0.0,
                below_floor: false,
            }
        } else {
            if samples == 0 {
                return Err(Error::InvalidArgument("MC rows need samples >= 1".into()));
            }
            let s = row_seed(seed, r);
            let e = mc_target(target, r, samples, s);
            let distance = e.distance_to_pi();
            let stderr = e.stderr();
            ConvergenceRow {
                r,
                distance,
                mode: RowMode::Mc,
                samples: Some(samples),
                seed: Some(s),
                stderr,
                floor: 3.0 * stderr,
                below_floor: distance < 3.0 * stderr,
            }
        };
        rows.push(row);
    }
    let mut report = ConvergenceReport {
        target,
        rows,
        fit: None,
        fitted_points: 0,
    };
    let pts: Vec<(f64, f64)> = report.pre_floor().iter().map(|r| (r.r as f64, r.distance)).collect();
    if pts.len() >= 3 {
        if let Ok(fit) = rate_fit(&pts) {
            report.fit = Some(fit);
            report.fitted_points = pts.len();
        }
    }
    Ok(report)
}
