use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::exact::{exact_distribution, exact_work_log2, ExactDistribution};
use crate::error::{Error, Result};
use crate::markov::{binomial, Dyadic};
use crate::rules::RuleId;

/// A family whose parameter `kappa` is averaged over binomially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MixtureFamily {
    Redei,
    Pell1,
    Pell2,
    Pell3 { a: bool, b: bool },
}

impl MixtureFamily {
    pub fn rule(self, kappa: usize) -> RuleId {
        match self {
            MixtureFamily::Redei => RuleId::Redei { kappa },
            MixtureFamily::Pell1 => RuleId::Pell1 { kappa },
            MixtureFamily::Pell2 => RuleId::Pell2 { kappa },
            MixtureFamily::Pell3 { a, b } => RuleId::Pell3 { kappa, a, b },
        }
    }

    /// Number of fair bits whose popcount is `kappa`: `r - 1` for the third
    /// Pell kind, `r` otherwise.
    pub fn trials(self, r: usize) -> usize {
        match self {
            MixtureFamily::Pell3 { .. } => r.saturating_sub(1),
            _ => r,
        }
    }

    /// `(kappa, Binom(n, kappa) / 2^n)` with `n = trials(r)`.
    pub fn weights(self, r: usize) -> Vec<(usize, Dyadic)> {
        let n = self.trials(r);
        (0..=n)
            .map(|k| (k, Dyadic::new(binomial(n as u64, k as u64), n as u64)))
            .collect()
    }
}

impl fmt::Display for MixtureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MixtureFamily::Redei => write!(f, "redei"),
            MixtureFamily::Pell1 => write!(f, "pell1"),
            MixtureFamily::Pell2 => write!(f, "pell2"),
            MixtureFamily::Pell3 { a, b } => write!(f, "pell3:{}:{}", a as u8, b as u8),
        }
    }
}

impl FromStr for MixtureFamily {
    type Err = Error;

    /// Accepts `redei | pell1 | pell2 | pell3:A:B`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRule(s.to_string());
        let bit = |x: &str| match x {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["redei"] => Ok(MixtureFamily::Redei),
            ["pell1"] => Ok(MixtureFamily::Pell1),
            ["pell2"] => Ok(MixtureFamily::Pell2),
            ["pell3", a, b] => Ok(MixtureFamily::Pell3 {
                a: bit(a)?,
                b: bit(b)?,
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for MixtureFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Either a single rule or a binomial mixture over `kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Rule(RuleId),
    Mixture(MixtureFamily),
}

impl Target {
    /// `log2` of the enumeration work of the costliest component at size `r`.
    pub fn exact_work_log2(self, r: usize) -> usize {
        match self {
            Target::Rule(rule) => exact_work_log2(rule, r),
            Target::Mixture(f) => f
                .weights(r)
                .iter()
                .map(|&(k, _)| exact_work_log2(f.rule(k), r))
                .max()
                .unwrap_or(0),
        }
    }

    pub fn exact(self, r: usize, budget: u64) -> Result<ExactDistribution> {
        match self {
            Target::Rule(rule) => exact_distribution(rule, r, budget),
            Target::Mixture(f) => mixture_exact(f, r, budget),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Rule(r) => write!(f, "{r}"),
            Target::Mixture(m) => write!(f, "mix:{m}"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    /// A mixture family name (`redei`, `pell3:A:B`, ...), optionally prefixed
    /// by `mix:`, or any rule name.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("mix:").unwrap_or(s);
        if let Ok(m) = body.parse::<MixtureFamily>() {
            return Ok(Target::Mixture(m));
        }
        if body.len() != s.len() {
            return Err(Error::InvalidRule(s.to_string()));
        }
        s.parse::<RuleId>().map(Target::Rule)
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `sum_kappa w(kappa) · mu_{X_r(kappa)}` with exact binomial weights.
pub fn mixture_exact(family: MixtureFamily, r: usize, budget: u64) -> Result<ExactDistribution> {
    if r == 0 {
        return Err(Error::InvalidArgument("mixtures need r >= 1".into()));
    }
    let mut mass = vec![Dyadic::zero(); r + 1];
    for (kappa, w) in family.weights(r) {
        let e = exact_distribution(family.rule(kappa), r, budget)?;
        for (m, p) in mass.iter_mut().zip(&e.mass) {
            *m = &*m + &(&w * p);
        }
    }
    Ok(ExactDistribution { r, mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::DEFAULT_BUDGET;

    #[test]
    fn weights_sum_to_one() {
        for r in 1..=64 {
            for f in [MixtureFamily::Redei, MixtureFamily::Pell3 { a: true, b: false }] {
                let total: Dyadic = f.weights(r).iter().map(|(_, w)| w.clone()).sum();
                assert_eq!(total, Dyadic::one(), "{f} r={r}");
            }
        }
        assert_eq!(MixtureFamily::Pell3 { a: false, b: false }.weights(3).len(), 3);
        assert_eq!(MixtureFamily::Pell1.weights(3).len(), 4);
    }

    #[test]
    fn redei_one() {
        let e = mixture_exact(MixtureFamily::Redei, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.mass, vec![Dyadic::new(1, 1), Dyadic::new(1, 1)]);
    }

    #[test]
    fn target_parsing() {
        assert_eq!("redei".parse::<Target>().unwrap(), Target::Mixture(MixtureFamily::Redei));
        assert_eq!(
            "pell3:1:0".parse::<Target>().unwrap(),
            Target::Mixture(MixtureFamily::Pell3 { a: true, b: false })
        );
        assert_eq!(
            "pell3:2:1:0".parse::<Target>().unwrap(),
            Target::Rule(RuleId::Pell3 { kappa: 2, a: true, b: false })
        );
        assert_eq!("mat".parse::<Target>().unwrap(), Target::Rule(RuleId::Mat));
        assert!("mix:mat".parse::<Target>().is_err());
        for t in ["redei", "pell3:0:1", "alt", "redei:4"] {
            let parsed: Target = t.parse().unwrap();
            assert_eq!(parsed.to_string().parse::<Target>().unwrap(), parsed);
        }
    }
}
