//! Exact and sampled corank distributions, mixtures over `kappa`, audits of
//! the genericity decomposition, and convergence reports.

mod audit;
mod convergence;
mod exact;
mod hoeffding;
mod mc;
mod mixture;
mod pell;

pub use audit::{decomposition_check, transition_audit_exact, transition_audit_mc, AuditRecord, AuditReport, DecompositionReport};
pub use convergence::{convergence_report, row_seed, ConvergenceReport, ConvergenceRow, ModePolicy, RowMode};
pub use exact::{exact_distribution, exact_work_log2, ExactDistribution, DEFAULT_BUDGET, PI_BOUND};
pub use hoeffding::{hoeffding_tail, HoeffdingTail};
pub use mc::{mc_distribution, mc_target, mixture_mc, shard_seed, EmpiricalDistribution, SHARD_SIZE};
pub use mixture::{mixture_exact, MixtureFamily, Target};
pub use pell::{pell_space_crosscheck, PellCrosscheck};
