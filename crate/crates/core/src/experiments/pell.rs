use serde::Serialize;

use super::exact::{exact_distribution, ExactDistribution};
use crate::arith::{PellKind, RawPellSpace};
use crate::error::{Error, Result};
use crate::markov::Dyadic;
use crate::rules::RuleId;

/// Raw-space and rule-side corank laws for one Pell space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellCrosscheck {
    pub j: u8,
    pub s: usize,
    pub kappa: usize,
    pub a: bool,
    pub b: bool,
    /// `None` when the raw space has no points.
    pub raw: Option<Vec<Dyadic>>,
    pub rule: RuleId,
    pub rule_r: usize,
    /// Rule law shifted by the one erased row/column pair.
    pub shifted_rule: Vec<Dyadic>,
    pub matches: bool,
}

/// Enumerates `Pell_j(s, kappa[, (a, b)])` from its defining conditions and
/// compares its corank law with the rule law shifted up by one.
///
/// The first two kinds compare against `omega_s` of the rule with the same
/// `kappa`; the third against `omega_{s+1}`.
pub fn pell_space_crosscheck(j: u8, s: usize, kappa: usize, a: bool, b: bool, budget: u64) -> Result<PellCrosscheck> {
    let (kind, rule, rule_r) = match j {
        1 => (PellKind::Pell1, RuleId::Pell1 { kappa }, s),
        2 => (PellKind::Pell2, RuleId::Pell2 { kappa }, s),
        3 => (PellKind::Pell3 { a, b }, RuleId::Pell3 { kappa, a, b }, s + 1),
        _ => return Err(Error::InvalidArgument(format!("j must be 1, 2 or 3, got {j}"))),
    };
    let space = RawPellSpace::new(kind, s, kappa)?;
    let raw = space.corank_counts(budget)?.map(|(counts, log2)| {
        let mut m: Vec<Dyadic> = counts.iter().map(|&c| Dyadic::ratio(c, log2)).collect();
        trim(&mut m);
        m
    });
    let shifted = exact_distribution(rule, rule_r, budget)?.shifted(1);
    let shifted_rule = ExactDistribution::trimmed(&shifted);
    let matches = raw.as_ref() == Some(&shifted_rule);
    Ok(PellCrosscheck {
        j,
        s,
        kappa,
        a,
        b,
        raw,
        rule,
        rule_r,
        shifted_rule,
        matches,
    })
}

fn trim(m: &mut Vec<Dyadic>) {
    while m.len() > 1 && m.last().is_some_and(Dyadic::is_zero) {
        m.pop();
    }
}
