use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;
use crate::markov::{l1_distance, pi_cl_vector, Dyadic, ProbVector, DEFAULT_PRECISION};
use crate::rules::{genericity, transition_counts, RuleId, Step, StepSpace};

/// Default cap on the number of explicitly enumerated step sequences.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Truncation bound used when comparing against the stationary law.
pub const PI_BOUND: usize = 64;

/// Exact corank law of `omega_r` under a rule (or a mixture of rules).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactDistribution {
    pub r: usize,
    /// `mass[j] = P(corank = j)` for `j = 0..=r`.
    pub mass: Vec<Dyadic>,
}

impl ExactDistribution {
    pub fn get(&self, j: usize) -> Dyadic {
        self.mass.get(j).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Dyadic {
        self.mass.iter().sum()
    }

    pub fn to_prob_vector(&self) -> ProbVector<Dyadic> {
        ProbVector::new(self.mass.clone())
    }

    /// `||mu - pi_CL||_1` in floating point, `pi_CL` truncated at 64.
    pub fn distance_to_pi(&self) -> f64 {
        l1_distance(&self.to_prob_vector().to_f64(), &pi_cl_vector(PI_BOUND, DEFAULT_PRECISION))
    }

    /// Shifts every mass up by `k` coranks.
    pub fn shifted(&self, k: usize) -> Self {
        let mut mass = vec![Dyadic::zero(); k];
        mass.extend(self.mass.iter().cloned());
        Self { r: self.r + k, mass }
    }

    /// Drops trailing zero masses (for comparisons up to padding).
    pub fn trimmed(&self) -> Vec<Dyadic> {
        let mut m = self.mass.clone();
        while m.len() > 1 && m.last().is_some_and(Dyadic::is_zero) {
            m.pop();
        }
        m
    }

    pub(crate) fn from_counts(r: usize, counts: &[u128], log2_total: u64) -> Self {
        let mut mass: Vec<Dyadic> = counts.iter().map(|&c| Dyadic::ratio(c, log2_total)).collect();
        mass.resize(r + 1, Dyadic::zero());
        Self { r, mass }
    }
}

pub(crate) fn spaces(rule: RuleId, r: usize) -> Vec<StepSpace> {
    (0..r).map(|i| StepSpace::new(rule, i)).collect()
}

/// `log2` of the number of step sequences of length `depth`.
pub(crate) fn prefix_log2(spaces: &[StepSpace], depth: usize) -> usize {
    spaces[..depth].iter().map(StepSpace::dim).sum()
}

/// `log2` of the work `exact_distribution(rule, r)` enumerates explicitly:
/// every step but the last, which is summed in closed form.
pub fn exact_work_log2(rule: RuleId, r: usize) -> usize {
    if r == 0 {
        return 0;
    }
    (0..r - 1).map(|i| StepSpace::new(rule, i).dim()).sum()
}

fn within(log2: usize, budget: u64) -> bool {
    log2 < 64 && (1u64 << log2) <= budget
}

/// Largest `r` whose explicit work fits in `budget`, given work grows with `r`.
pub(crate) fn feasible_max_r(work_log2: impl Fn(usize) -> usize, budget: u64) -> usize {
    let mut r = 0;
    while r < 4096 && within(work_log2(r + 1), budget) {
        r += 1;
    }
    r
}

pub(crate) fn check_budget(
    needed_log2: usize,
    budget: u64,
    work_log2: impl Fn(usize) -> usize,
) -> Result<()> {
    if within(needed_log2, budget) {
        Ok(())
    } else {
        Err(Error::BudgetExceeded {
            needed_log2: needed_log2 as u32,
            budget,
            feasible_max_r: feasible_max_r(work_log2, budget),
        })
    }
}

/// Every matrix at `depth` reachable from `a`, with multiplicity.
pub(crate) fn visit(
    members: &[Vec<Step>],
    a: &F2Matrix,
    depth: usize,
    f: &mut impl FnMut(&F2Matrix),
) {
    let i = a.n();
    if i == depth {
        f(a);
        return;
    }
    for s in &members[i] {
        let b = a.extend(&s.v, &s.w, s.c).expect("member lengths match");
        visit(members, &b, depth, f);
    }
}

/// Matrices at a shallow depth used to split an enumeration into
/// independent subtrees.
fn split_roots(members: &[Vec<Step>], spaces: &[StepSpace], max_depth: usize) -> (usize, Vec<F2Matrix>) {
    let mut depth = 0;
    while depth < max_depth && prefix_log2(spaces, depth) < 6 {
        depth += 1;
    }
    let mut roots = Vec::new();
    visit(members, &F2Matrix::empty(), depth, &mut |a| roots.push(a.clone()));
    (depth, roots)
}

/// Exhaustive corank distribution of `omega_r`.
///
/// The first `r - 1` steps are enumerated; the last step is aggregated by
/// [`transition_counts`], which is exact.
pub fn exact_distribution(rule: RuleId, r: usize, budget: u64) -> Result<ExactDistribution> {
    if r == 0 {
        return Ok(ExactDistribution {
            r: 0,
            mass: vec![Dyadic::one()],
        });
    }
    check_budget(exact_work_log2(rule, r), budget, |k| exact_work_log2(rule, k))?;
    let spaces = spaces(rule, r);
    let total_log2 = prefix_log2(&spaces, r);
    if total_log2 > 126 {
        return Err(Error::InvalidArgument(format!("2^{total_log2} sequences overflow counters")));
    }
    let members: Vec<Vec<Step>> = spaces[..r - 1].iter().map(StepSpace::enumerate).collect();
    let last = &spaces[r - 1];
    let (_, roots) = split_roots(&members, &spaces, r - 1);
    let counts = roots
        .par_iter()
        .map(|root| {
            let mut counts = vec![0u128; r + 1];
            visit(&members, root, r - 1, &mut |a| {
                let s = a.corank();
                let [down, same, up] = transition_counts(a, last);
                if s > 0 {
                    counts[s - 1] += down;
                } else {
                    debug_assert_eq!(down, 0);
                }
                counts[s] += same;
                counts[s + 1] += up;
            });
            counts
        })
        .reduce(
            || vec![0u128; r + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ExactDistribution::from_counts(r, &counts, total_log2 as u64))
}

/// Per-depth tallies of a full enumeration to depth `r`, all in units of
/// `2^{-total_log2}`.
pub(crate) struct DepthStats {
    pub total_log2: u64,
    /// `mu[i][s]`: mass of `corank(omega_i) = s`.
    pub mu: Vec<Vec<u128>>,
    /// `exceptional[i][s]`: mass of `corank(omega_i) = s` and `Z_i = 1`.
    pub exceptional: Vec<Vec<u128>>,
    /// `after_exceptional[i][j]`: mass of `corank(omega_{i+1}) = j` and `Z_i = 1`.
    pub after_exceptional: Vec<Vec<u128>>,
    /// `generic_moves[i][s]`: `(down, same, up)` mass over generic prefixes.
    pub generic_moves: Vec<Vec<[u128; 3]>>,
}

/// Full enumeration to depth `r` with the detector evaluated at every node.
/// `Mat` has no detector and is treated as always generic.
pub(crate) fn depth_stats(rule: RuleId, r: usize, budget: u64) -> Result<DepthStats> {
    let spaces = spaces(rule, r);
    let total_log2 = prefix_log2(&spaces, r);
    let work = |k: usize| (0..k).map(|i| StepSpace::new(rule, i).dim()).sum::<usize>();
    check_budget(total_log2, budget, work)?;
    if total_log2 > 126 {
        return Err(Error::InvalidArgument(format!("2^{total_log2} sequences overflow counters")));
    }
    let members: Vec<Vec<Step>> = spaces.iter().map(StepSpace::enumerate).collect();
    let weight: Vec<u128> = (0..=r)
        .map(|i| 1u128 << (total_log2 - prefix_log2(&spaces, i)))
        .collect();
    let mut st = DepthStats {
        total_log2: total_log2 as u64,
        mu: (0..=r).map(|i| vec![0; i + 2]).collect(),
        exceptional: (0..r).map(|i| vec![0; i + 2]).collect(),
        after_exceptional: (0..r).map(|i| vec![0; i + 3]).collect(),
        generic_moves: (0..r).map(|i| vec![[0; 3]; i + 2]).collect(),
    };

    fn walk(
        rule: RuleId,
        members: &[Vec<Step>],
        weight: &[u128],
        a: &F2Matrix,
        s: usize,
        r: usize,
        st: &mut DepthStats,
    ) {
        let i = a.n();
        st.mu[i][s] += weight[i];
        if i == r {
            return;
        }
        let z = match rule {
            RuleId::Mat => false,
            _ => genericity(rule, i, a).expect("sizes match"),
        };
        if z {
            st.exceptional[i][s] += weight[i];
        }
        for m in &members[i] {
            let b = a.extend(&m.v, &m.w, m.c).expect("member lengths match");
            let t = b.corank();
            if z {
                st.after_exceptional[i][t] += weight[i + 1];
            } else {
                st.generic_moves[i][s][(t as i64 - s as i64 + 1) as usize] += weight[i + 1];
            }
            walk(rule, members, weight, &b, t, r, st);
        }
    }

    walk(rule, &members, &weight, &F2Matrix::empty(), 0, r, &mut st);
    Ok(st)
}
