use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// One of the six growth rules.
///
/// The primed Pell space of the first kind reduces to `Pell1` and has no
/// rule of its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    Mat,
    Alt,
    Redei { kappa: usize },
    Pell1 { kappa: usize },
    Pell2 { kappa: usize },
    Pell3 { kappa: usize, a: bool, b: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Mat,
    Alt,
    Redei,
    Pell1,
    Pell2,
    Pell3,
}

impl RuleId {
    pub fn family(self) -> Family {
        match self {
            RuleId::Mat => Family::Mat,
            RuleId::Alt => Family::Alt,
            RuleId::Redei { .. } => Family::Redei,
            RuleId::Pell1 { .. } => Family::Pell1,
            RuleId::Pell2 { .. } => Family::Pell2,
            RuleId::Pell3 { .. } => Family::Pell3,
        }
    }

    /// `kappa`, or 0 for the parameter-free rules.
    pub fn kappa(self) -> usize {
        match self {
            RuleId::Mat | RuleId::Alt => 0,
            RuleId::Redei { kappa }
            | RuleId::Pell1 { kappa }
            | RuleId::Pell2 { kappa }
            | RuleId::Pell3 { kappa, .. } => kappa,
        }
    }

    /// Same family with a different `kappa`.
    pub fn with_kappa(self, kappa: usize) -> Self {
        match self {
            RuleId::Mat | RuleId::Alt => self,
            RuleId::Redei { .. } => RuleId::Redei { kappa },
            RuleId::Pell1 { .. } => RuleId::Pell1 { kappa },
            RuleId::Pell2 { .. } => RuleId::Pell2 { kappa },
            RuleId::Pell3 { a, b, .. } => RuleId::Pell3 { kappa, a, b },
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RuleId::Mat => write!(f, "mat"),
            RuleId::Alt => write!(f, "alt"),
            RuleId::Redei { kappa } => write!(f, "redei:{kappa}"),
            RuleId::Pell1 { kappa } => write!(f, "pell1:{kappa}"),
            RuleId::Pell2 { kappa } => write!(f, "pell2:{kappa}"),
            RuleId::Pell3 { kappa, a, b } => write!(f, "pell3:{kappa}:{}:{}", a as u8, b as u8),
        }
    }
}

impl FromStr for RuleId {
    type Err = Error;

    /// Accepts `mat | alt | redei:K | pell1:K | pell2:K | pell3:K:A:B`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidRule(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |k: usize| parts.get(k).ok_or_else(bad)?.parse::<usize>().map_err(|_| bad());
        let bit = |k: usize| match parts.get(k) {
            Some(&"0") => Ok(false),
            Some(&"1") => Ok(true),
            _ => Err(bad()),
        };
        let arity = |n: usize| if parts.len() == n { Ok(()) } else { Err(bad()) };
        match parts[0].to_ascii_lowercase().as_str() {
            "mat" => arity(1).map(|_| RuleId::Mat),
            "alt" => arity(1).map(|_| RuleId::Alt),
            "redei" => arity(2).and_then(|_| Ok(RuleId::Redei { kappa: num(1)? })),
            "pell1" => arity(2).and_then(|_| Ok(RuleId::Pell1 { kappa: num(1)? })),
            "pell2" => arity(2).and_then(|_| Ok(RuleId::Pell2 { kappa: num(1)? })),
            "pell3" => arity(4).and_then(|_| {
                Ok(RuleId::Pell3 {
                    kappa: num(1)?,
                    a: bit(2)?,
                    b: bit(3)?,
                })
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["mat", "alt", "redei:3", "pell1:0", "pell2:7", "pell3:2:1:0"] {
            let r: RuleId = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!(
            "pell3:4:0:1".parse::<RuleId>().unwrap(),
            RuleId::Pell3 { kappa: 4, a: false, b: true }
        );
    }

    #[test]
    fn parse_rejects() {
        for s in ["", "mat:1", "redei", "redei:x", "pell3:1:2:0", "pell3:1:0", "foo"] {
            assert!(s.parse::<RuleId>().is_err(), "{s}");
        }
    }
}
