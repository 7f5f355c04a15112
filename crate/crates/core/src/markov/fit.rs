use serde::Serialize;

use crate::error::{Error, Result};

/// Geometric model `distance ≈ C · rho^r` fitted on log scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub rho_hat: f64,
    pub c_hat: f64,
    /// RMS of the log-scale residuals.
    pub residual: f64,
}

/// Unweighted least squares of `ln distance` on `r`.
pub fn rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    if let Some(k) = points.iter().position(|&(_, d)| d.is_nan() || d <= 0.0) {
        return Err(Error::NonPositiveDistance(k));
    }
    let n = points.len() as f64;
    let ys: Vec<f64> = points.iter().map(|&(_, d)| d.ln()).collect();
    let mx = points.iter().map(|&(r, _)| r).sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|&(r, _)| (r - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all r values coincide".into()));
    }
    let sxy: f64 = points.iter().zip(&ys).map(|(&(r, _), y)| (r - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points
        .iter()
        .zip(&ys)
        .map(|(&(r, _), y)| (y - intercept - slope * r).powi(2))
        .sum();
    Ok(RateFit {
        rho_hat: slope.exp(),
        c_hat: intercept.exp(),
        residual: (sse / n).sqrt(),
    })
}
