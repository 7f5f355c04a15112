use serde::Serialize;

use super::StepSpace;
use crate::f2linalg::{solution_dim, F2Matrix, F2Vector, TransitionClass};
use crate::markov::{qcl_entry, Dyadic};
use crate::rules::RuleId;

/// Distribution of the corank change when extending a fixed matrix by a
/// uniform member of a step space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionLaw {
    pub down: Dyadic,
    pub same: Dyadic,
    pub up: Dyadic,
}

impl TransitionLaw {
    pub fn get(&self, class: TransitionClass) -> &Dyadic {
        match class {
            TransitionClass::Down => &self.down,
            TransitionClass::Same => &self.same,
            TransitionClass::Up => &self.up,
        }
    }

    /// The `Q_CL` row of state `s`.
    pub fn qcl_row(s: usize) -> Self {
        let s = s as u64;
        Self {
            down: if s == 0 { Dyadic::zero() } else { qcl_entry(s, s - 1) },
            same: qcl_entry(s, s),
            up: qcl_entry(s, s + 1),
        }
    }

    /// Largest absolute difference to another law.
    pub fn max_deviation(&self, other: &Self) -> Dyadic {
        [
            (&self.down - &other.down).abs(),
            (&self.same - &other.same).abs(),
            (&self.up - &other.up).abs(),
        ]
        .into_iter()
        .max()
        .unwrap()
    }
}

/// Number of coefficient vectors `alpha` with `sum_d alpha_d <dir_d, k_j> =
/// <base, k_j>` for every `j`, as a power of two (or `None` if zero).
fn count_log2(
    dirs: &[(&F2Vector, &F2Vector)],
    base: (&F2Vector, &F2Vector),
    k: &[F2Vector],
    l: &[F2Vector],
) -> Option<usize> {
    let width = dirs.len();
    let mut rows = Vec::with_capacity(k.len() + l.len());
    let mut rhs = Vec::with_capacity(k.len() + l.len());
    for kj in k {
        let mut row = F2Vector::zeros(width);
        for (d, (dv, _)) in dirs.iter().enumerate() {
            if dv.inner(kj) {
                row.set0(d);
            }
        }
        rows.push(row);
        rhs.push(base.0.inner(kj) as u8);
    }
    for lj in l {
        let mut row = F2Vector::zeros(width);
        for (d, (_, dw)) in dirs.iter().enumerate() {
            if dw.inner(lj) {
                row.set0(d);
            }
        }
        rows.push(row);
        rhs.push(base.1.inner(lj) as u8);
    }
    if width == 0 {
        return rhs.iter().all(|&b| b == 0).then_some(0);
    }
    solution_dim(&rows, width, &F2Vector::from_bits(&rhs))
}

/// Solution-set sizes (as powers of two) behind a law with free corner:
/// `vw_dim` free `(v, w)` coordinates, and how many of those choices put `v`
/// in the row space, `w` in the column space, or both.
struct Exponents {
    vw_dim: usize,
    v_in: Option<usize>,
    w_in: Option<usize>,
    both_in: Option<usize>,
}

fn exponents(a: &F2Matrix, space: &StepSpace) -> Exponents {
    if space.vw_unconstrained() {
        // v and w independent and uniform: each lands in its space with
        // probability 2^{-corank}.
        let vw_dim = 2 * a.n();
        let s = a.corank();
        return Exponents {
            vw_dim,
            v_in: Some(vw_dim - s),
            w_in: Some(vw_dim - s),
            both_in: Some(vw_dim - 2 * s),
        };
    }
    let k = a.kernel_basis();
    let l = a.left_kernel_basis();
    let dirs = space.vw_directions();
    let dir_refs: Vec<(&F2Vector, &F2Vector)> = dirs.iter().map(|d| (&d.v, &d.w)).collect();
    let base = space.base();
    let base = (&base.v, &base.w);
    Exponents {
        vw_dim: dirs.len(),
        v_in: count_log2(&dir_refs, base, &k, &[]),
        w_in: count_log2(&dir_refs, base, &[], &l),
        both_in: count_log2(&dir_refs, base, &k, &l),
    }
}

fn enumerated_counts(a: &F2Matrix, space: &StepSpace) -> [u128; 3] {
    let mut counts = [0u128; 3];
    for s in &space.enumerate() {
        counts[(a.classify_transition(&s.v, &s.w, s.c).delta() + 1) as usize] += 1;
    }
    counts
}

/// `(down, same, up)` member counts of `space` out of `2^dim`. Needs `dim <= 126`.
pub(crate) fn transition_counts(a: &F2Matrix, space: &StepSpace) -> [u128; 3] {
    assert_eq!(a.n(), space.index());
    assert!(space.dim() <= 126, "counts overflow");
    if !space.c_free() {
        return enumerated_counts(a, space);
    }
    let e = exponents(a, space);
    let pow = |x: Option<usize>| x.map_or(0u128, |k| 1u128 << k);
    let total_vw = 1u128 << e.vw_dim;
    // Neither v nor w in its space; the corner is irrelevant there, giving
    // a factor 2. Exactly one corner value raises the corank.
    let neither = total_vw + pow(e.both_in) - pow(e.v_in) - pow(e.w_in);
    let down = 2 * neither;
    let up = pow(e.both_in);
    [down, 2 * total_vw - down - up, up]
}

/// Exact law of `corank(A(v,w,c)) - corank(A)` for `(v,w,c)` uniform in `space`.
///
/// With `k_j` spanning `ker A` and `l_j` spanning `ker A^T`, the row `v` is in
/// the row space iff `<v, k_j> = 0` for all `j`, and the column `w` is in the
/// column space iff `<w, l_j> = 0`. Each count is the size of an affine
/// solution set in the direction coefficients. A fixed corner is handled by
/// classifying the single members directly.
pub fn transition_law(a: &F2Matrix, space: &StepSpace) -> TransitionLaw {
    assert_eq!(a.n(), space.index());
    if !space.c_free() {
        let counts = enumerated_counts(a, space);
        let log2 = space.dim() as u64;
        return TransitionLaw {
            down: Dyadic::ratio(counts[0], log2),
            same: Dyadic::ratio(counts[1], log2),
            up: Dyadic::ratio(counts[2], log2),
        };
    }
    let e = exponents(a, space);
    let frac = |log2: Option<usize>| match log2 {
        Some(k) => Dyadic::pow2(k as i64 - e.vw_dim as i64),
        None => Dyadic::zero(),
    };
    let (p_v, p_w, p_vw) = (frac(e.v_in), frac(e.w_in), frac(e.both_in));
    let neither = &(&(&Dyadic::one() - &p_v) - &p_w) + &p_vw;
    let up = &p_vw * &Dyadic::pow2(-1);
    let same = &(&Dyadic::one() - &neither) - &up;
    TransitionLaw {
        down: neither,
        same,
        up,
    }
}

/// `transition_law` for the rule's space at index `a.n()`.
pub fn rule_transition_law(rule: RuleId, a: &F2Matrix) -> TransitionLaw {
    transition_law(a, &StepSpace::new(rule, a.n()))
}

/// Whether extending `a` by a uniform member of `S_i` moves the corank by
/// the `Q_CL` row of `corank(a)`, decided by enumerating `S_i` and
/// recomputing every corank from scratch.
pub fn transition_is_markov(rule: RuleId, i: usize, a: &F2Matrix) -> bool {
    assert_eq!(a.n(), i);
    let space = StepSpace::new(rule, i);
    let members = space.enumerate();
    let s = a.corank();
    let log2 = members.len().trailing_zeros() as u64;
    let mut counts = [0u128; 3];
    for m in &members {
        let after = a.extend(&m.v, &m.w, m.c).expect("lengths match").corank();
        counts[(after as i64 - s as i64 + 1) as usize] += 1;
    }
    let law = TransitionLaw {
        down: Dyadic::ratio(counts[0], log2),
        same: Dyadic::ratio(counts[1], log2),
        up: Dyadic::ratio(counts[2], log2),
    };
    law == TransitionLaw::qcl_row(s)
}

/// Whether the exact law from `a` is the `Q_CL` row of its corank.
pub fn law_is_markov(a: &F2Matrix, space: &StepSpace) -> bool {
    transition_law(a, space) == TransitionLaw::qcl_row(a.corank())
}
