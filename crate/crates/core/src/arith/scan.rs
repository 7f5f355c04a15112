use rayon::prelude::*;
use serde::Serialize;

use super::factor::{factor, is_squarefree};
use super::pell::classify_pell;
use super::redei::{reciprocity_holds, redei_matrix};
use crate::error::Result;

/// One row of a bulk scan over squarefree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub d: i64,
    pub discriminant: i64,
    pub t: usize,
    pub kappa: usize,
    pub corank: usize,
    pub reciprocity_ok: bool,
    /// Pell space for the smallest `l` with `|l| = 3 mod 4` prime dividing
    /// `d`, taking `l` with the sign of `d`.
    pub pell_label: Option<String>,
    pub first_row_flag: Option<bool>,
}

pub const SCAN_COLUMNS: [&str; 8] = [
    "d",
    "discriminant",
    "t",
    "kappa",
    "corank",
    "reciprocity_ok",
    "pell_label",
    "first_row_flag",
];

pub fn scan_one(d: i64) -> Result<ScanRow> {
    let (a, ctx) = redei_matrix(d)?;
    let l = factor(d.unsigned_abs())
        .into_iter()
        .map(|(p, _)| p)
        .find(|p| p % 4 == 3)
        .map(|p| if d < 0 { -(p as i64) } else { p as i64 });
    let pell = l.map(|l| classify_pell(d, l)).transpose()?;
    Ok(ScanRow {
        d,
        discriminant: ctx.discriminant,
        t: ctx.t(),
        kappa: ctx.kappa,
        corank: a.corank(),
        reciprocity_ok: reciprocity_holds(&a, &ctx),
        pell_label: pell.as_ref().map(|p| p.kind.to_string()),
        first_row_flag: pell.map(|p| p.first_row_flag),
    })
}

/// Every squarefree `d` with `1 < |d| <= dmax`, in the order
/// `-dmax..=-2, -1, 2..=dmax` filtered to squarefree values.
pub fn scan(dmax: i64) -> Vec<ScanRow> {
    let ds: Vec<i64> = (-dmax..=dmax)
        .filter(|&d| d != 0 && d != 1 && is_squarefree(d))
        .collect();
    ds.par_iter()
        .map(|&d| scan_one(d).expect("squarefree d != 1"))
        .collect()
}
