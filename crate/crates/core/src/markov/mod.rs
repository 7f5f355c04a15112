//! The Cohen–Lenstra kernel `Q_CL`, its stationary law, truncated
//! propagation, drift checks and empirical rate fitting.

mod dyadic;
mod fit;
mod kernel;
mod prob;
mod stationary;

pub use dyadic::{binomial, Dyadic};
pub use fit::{rate_fit, RateFit};
pub use kernel::{drift_certificate, drift_ratio, qcl_entry, DriftCertificate, TruncatedKernel};
pub use prob::{l1_distance, propagate, Mass, ProbVector};
pub use stationary::{
    eta, eta_dyadic, eta_infinity, pi_cl, pi_cl_exact, pi_cl_log2, pi_cl_tail, pi_cl_vector,
    pi_cl_vector_exact, stationarity_residual, stationarity_residual_exact, Stationarity,
};


/// Default stopping precision for `eta_inf`.
pub const DEFAULT_PRECISION: f64 = 1e-15;
