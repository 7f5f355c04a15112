//! Rédei matrices of quadratic fields: Kronecker symbols, factorisation,
//! the reciprocity pattern and placement in the Pell spaces.

mod factor;
mod kronecker;
mod pell;
mod redei;
mod scan;

pub use factor::{factor, is_prime, is_squarefree};
pub use kronecker::{euler_criterion, kronecker};
pub use pell::{classify_pell, Constraint, PellClassification, PellKind, RawPellSpace};
pub use redei::{discriminant, redei_matrix, redei_matrix_with, validate_reciprocity, RedeiContext};
pub use scan::{scan, scan_one, ScanRow, SCAN_COLUMNS};
