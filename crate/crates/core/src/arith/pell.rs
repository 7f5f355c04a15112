use std::fmt;

use serde::{Serialize, Serializer};

use super::redei::{check_l, redei_matrix_with, RedeiContext};
use crate::error::{Error, Result};
use crate::f2linalg::{rref, solve, F2Matrix, F2Vector};

/// The constrained matrix spaces attached to `x^2 - d y^2 = l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PellKind {
    Pell1,
    Pell2,
    /// Positive `l`, even discriminant; reduces to the same rule as `Pell1`.
    Pell1Prime,
    Pell3 { a: bool, b: bool },
}

impl fmt::Display for PellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PellKind::Pell1 => write!(f, "pell1"),
            PellKind::Pell2 => write!(f, "pell2"),
            PellKind::Pell1Prime => write!(f, "pell1'"),
            PellKind::Pell3 { a, b } => write!(f, "pell3:{}:{}", a as u8, b as u8),
        }
    }
}

impl Serialize for PellKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One linear condition: the listed 1-based entries sum to `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub entries: Vec<(usize, usize)>,
    pub rhs: bool,
    /// Part of the first-row condition.
    pub first_row: bool,
}

/// A raw Pell space `Pell_j(s, kappa[, (a, b)])` given by its defining
/// linear conditions on the entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawPellSpace {
    pub kind: PellKind,
    pub s: usize,
    pub kappa: usize,
}

impl RawPellSpace {
    pub fn new(kind: PellKind, s: usize, kappa: usize) -> Result<Self> {
        if kappa > s {
            return Err(Error::InvalidArgument(format!("kappa = {kappa} exceeds s = {s}")));
        }
        Ok(Self { kind, s, kappa })
    }

    /// Matrix size: `s + 1` for the first two kinds, `s + 2` otherwise.
    pub fn n(&self) -> usize {
        match self.kind {
            PellKind::Pell1 | PellKind::Pell2 => self.s + 1,
            PellKind::Pell1Prime | PellKind::Pell3 { .. } => self.s + 2,
        }
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let n = self.n();
        let k = self.kappa;
        let mut out = Vec::new();
        let mut push = |entries: Vec<(usize, usize)>, rhs: bool| {
            out.push(Constraint {
                entries,
                rhs,
                first_row: false,
            })
        };
        // Every row sums to zero.
        for i in 1..=n {
            push((1..=n).map(|j| (i, j)).collect(), false);
        }
        // Width of the antisymmetric block and whether index 2 sits outside it.
        let (block, skip_two) = match self.kind {
            PellKind::Pell1 | PellKind::Pell2 => (k + 1, false),
            PellKind::Pell1Prime | PellKind::Pell3 { .. } => (k + 2, true),
        };
        let in_block = |x: usize| x <= block && !(skip_two && x == 2);
        for i in 1..=block {
            for j in i + 1..=block {
                if in_block(i) && in_block(j) {
                    push(vec![(i, j), (j, i)], true);
                }
            }
        }
        for j in block + 1..=n {
            for i in 1..=n {
                if i != j && (i < j || i <= block) {
                    push(vec![(i, j), (j, i)], false);
                }
            }
        }
        match self.kind {
            PellKind::Pell1Prime => {
                for i in (1..=block).filter(|&i| i != 2) {
                    push(vec![(i, 2), (2, i)], (k + 1) % 2 == 1);
                }
            }
            PellKind::Pell3 { a, b } => {
                push(vec![(2, 1)], a);
                push(vec![(2, 2)], b);
                for t in 0..self.s {
                    push(vec![(3 + t, 2)], t < k);
                }
            }
            _ => {}
        }
        let first: Vec<bool> = match self.kind {
            PellKind::Pell1 | PellKind::Pell1Prime => vec![false; n],
            PellKind::Pell2 => (0..n).map(|t| t < k + 1).collect(),
            PellKind::Pell3 { .. } => (0..n).map(|t| t < k + 2).collect(),
        };
        for (t, bit) in first.into_iter().enumerate() {
            out.push(Constraint {
                entries: vec![(1, t + 1)],
                rhs: bit,
                first_row: true,
            });
        }
        out
    }

    fn holds(c: &Constraint, a: &F2Matrix) -> bool {
        c.entries.iter().fold(false, |acc, &(i, j)| acc ^ a.get(i, j)) == c.rhs
    }

    pub fn contains(&self, a: &F2Matrix) -> bool {
        a.n() == self.n() && self.constraints().iter().all(|c| Self::holds(c, a))
    }

    /// `(all non-first-row conditions hold, first-row condition holds)`.
    pub fn membership(&self, a: &F2Matrix) -> (bool, bool) {
        if a.n() != self.n() {
            return (false, false);
        }
        let cs = self.constraints();
        let body = cs.iter().filter(|c| !c.first_row).all(|c| Self::holds(c, a));
        let first = cs.iter().filter(|c| c.first_row).all(|c| Self::holds(c, a));
        (body, first)
    }

    /// Affine solution set as a particular point plus a basis of directions,
    /// both as row-major bit strings of length `n^2`. `None` if empty.
    fn solution_space(&self) -> Option<(F2Vector, Vec<F2Vector>)> {
        let n = self.n();
        let width = n * n;
        let cs = self.constraints();
        let rows: Vec<F2Vector> = cs
            .iter()
            .map(|c| {
                let mut r = F2Vector::zeros(width);
                for &(i, j) in &c.entries {
                    let k = (i - 1) * n + (j - 1);
                    // Repeated entries cancel.
                    r.flip0(k);
                }
                r
            })
            .collect();
        let rhs = F2Vector::from_bits(&cs.iter().map(|c| c.rhs as u8).collect::<Vec<_>>());
        let x0 = solve(&rows, width, &rhs)?;
        let basis = rref(rows, width).null_space();
        Some((x0, basis))
    }

    /// `log2 |space|`, or `None` for an empty space.
    pub fn dim(&self) -> Option<usize> {
        self.solution_space().map(|(_, b)| b.len())
    }

    /// Corank counts over the whole space (`counts[j]`, `j = 0..=n`) and
    /// `log2` of its size; `None` for an empty space.
    pub fn corank_counts(&self, budget: u64) -> Result<Option<(Vec<u128>, u64)>> {
        let n = self.n();
        let Some((x0, basis)) = self.solution_space() else {
            return Ok(None);
        };
        let dim = basis.len();
        if dim >= 64 || (1u64 << dim) > budget {
            return Err(Error::BudgetExceeded {
                needed_log2: dim as u32,
                budget,
                feasible_max_r: 0,
            });
        }
        let to_matrix = |x: &F2Vector| F2Matrix::from_fn(n, |i, j| x.get((i - 1) * n + j));
        let mut counts = vec![0u128; n + 1];
        // Gray-code walk: one basis vector toggled per step.
        let mut x = x0;
        counts[to_matrix(&x).corank()] += 1;
        for g in 1u64..(1u64 << dim) {
            x ^= &basis[g.trailing_zeros() as usize];
            counts[to_matrix(&x).corank()] += 1;
        }
        Ok(Some((counts, dim as u64)))
    }
}

/// Outcome of placing a Rédei matrix in its Pell space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellClassification {
    pub kind: PellKind,
    pub s: usize,
    pub kappa: usize,
    /// Every condition other than the first-row one holds.
    pub constraints_ok: bool,
    /// The first-row condition (0, or the prescribed `H` vector) holds. No
    /// claim is made about actual solubility.
    pub first_row_flag: bool,
    pub context: RedeiContext,
}

/// Picks the Pell space for `(d, l)` by the sign of `l`, the parity of the
/// discriminant and `d mod 4`, and checks the Rédei matrix against it.
pub fn classify_pell(d: i64, l: i64) -> Result<PellClassification> {
    check_l(d, l)?;
    let (a, ctx) = redei_matrix_with(d, Some(l))?;
    let even = ctx.discriminant % 2 == 0;
    let t = ctx.t();
    let kind = match (l > 0, even) {
        (true, false) => PellKind::Pell1,
        (false, false) => PellKind::Pell2,
        (true, true) => PellKind::Pell1Prime,
        (false, true) if d % 2 == 0 => PellKind::Pell2,
        (false, true) => PellKind::Pell3 {
            a: (l - 1).div_euclid(4).rem_euclid(2) == 1,
            b: (d + 1).div_euclid(4).rem_euclid(2) == 1,
        },
    };
    let s = match kind {
        PellKind::Pell1 | PellKind::Pell2 => t - 1,
        PellKind::Pell1Prime | PellKind::Pell3 { .. } => t.saturating_sub(2),
    };
    let kappa = ctx.kappa.min(s);
    let space = RawPellSpace::new(kind, s, kappa)?;
    let (constraints_ok, first_row_flag) = space.membership(&a);
    Ok(PellClassification {
        kind,
        s,
        kappa,
        constraints_ok,
        first_row_flag,
        context: ctx,
    })
}
