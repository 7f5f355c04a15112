use super::{law_is_markov, RuleId, StepSpace};
use crate::error::{Error, Result};
use crate::f2linalg::{solution_dim, F2Matrix, F2Vector};

/// Whether some `x` with `x[..prefix.len()] = prefix` solves `A x = 0`,
/// i.e. whether `A·(prefix, 0)` is in the span of the remaining columns.
fn affine_kernel_hit(a: &F2Matrix, prefix: &F2Vector) -> bool {
    let n = a.n();
    let m = prefix.len();
    let mut head = prefix.clone();
    for _ in m..n {
        head.push(false);
    }
    let target = a.matvec(&head).expect("padded to n");
    if m == n {
        return target.is_zero();
    }
    let rows: Vec<F2Vector> = a.rows().iter().map(|r| r.slice0(m..n)).collect();
    solution_dim(&rows, n - m, &target).is_some()
}

/// Whether columns `from..n` (0-based) are linearly dependent when restricted
/// to rows `row_from..n`, i.e. the block rank is below `min(rows, cols)`.
fn block_deficient(a: &F2Matrix, row_from: usize, from: usize) -> bool {
    let n = a.n();
    let rows = n.saturating_sub(row_from);
    let cols = n - from;
    a.block_rank(row_from..n, from..n) < rows.min(cols)
}

/// The genericity detector `Z_i` (`true` = exceptional).
///
/// When it returns `false`, extending `a` by a uniform member of `S_i` is
/// guaranteed to move the corank by the `Q_CL` row of `corank(a)`.
pub fn genericity(rule: RuleId, i: usize, a: &F2Matrix) -> Result<bool> {
    if a.n() != i {
        return Err(Error::LengthMismatch {
            expected: i,
            got: a.n(),
        });
    }
    let kappa = rule.kappa();
    let h_null = || a.matvec(&F2Vector::ones(i)).expect("length i").is_zero();
    let column_test = |row_from: usize| {
        block_deficient(a, row_from, kappa) || affine_kernel_hit(a, &F2Vector::ones(kappa))
    };
    // Transpose-kernel exclusion for the second and third Pell kinds.
    let transpose_test = || {
        let m = i.min(kappa);
        if m < 2 || m % 2 == 1 {
            return false;
        }
        let mut prefix = F2Vector::ones(m);
        prefix.set(1, false);
        affine_kernel_hit(&a.transpose(), &prefix)
    };
    let z = match rule {
        RuleId::Mat => return Err(Error::NoDetector(rule.to_string())),
        RuleId::Alt => h_null(),
        RuleId::Redei { .. } => {
            if i <= kappa {
                h_null()
            } else {
                column_test(0)
            }
        }
        RuleId::Pell1 { .. } | RuleId::Pell2 { .. } | RuleId::Pell3 { .. } => {
            let base = if i <= kappa { h_null() } else { column_test(1) };
            match rule {
                RuleId::Pell1 { .. } => base,
                RuleId::Pell2 { .. } => base || transpose_test(),
                // The literal conditions alone miss some non-generic states
                // (e.g. i = 1, A = [[1]]), so the exact law is consulted too.
                _ => base || transpose_test() || !law_is_markov(a, &StepSpace::new(rule, i)),
            }
        }
    };
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> F2Matrix {
        F2Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn alt_identity_is_generic() {
        assert!(!genericity(RuleId::Alt, 2, &F2Matrix::identity(2)).unwrap());
        assert!(genericity(RuleId::Alt, 2, &m(&[&[1, 1], &[1, 1]])).unwrap());
        assert!(genericity(RuleId::Alt, 0, &F2Matrix::empty()).unwrap());
    }

    #[test]
    fn redei_example() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert!(!genericity(RuleId::Redei { kappa: 1 }, 2, &a).unwrap());
    }

    #[test]
    fn redei_kappa_zero_always_exceptional() {
        assert!(genericity(RuleId::Redei { kappa: 0 }, 2, &F2Matrix::identity(2)).unwrap());
    }

    #[test]
    fn mat_has_no_detector() {
        assert!(matches!(
            genericity(RuleId::Mat, 1, &F2Matrix::zero(1)),
            Err(Error::NoDetector(_))
        ));
    }

    #[test]
    fn pell3_literal_gap_is_closed() {
        let rule = RuleId::Pell3 { kappa: 2, a: false, b: false };
        let a = m(&[&[1]]);
        assert!(!crate::rules::transition_is_markov(rule, 1, &a));
        assert!(genericity(rule, 1, &a).unwrap());
    }

    #[test]
    fn wrong_size_rejected() {
        assert!(genericity(RuleId::Alt, 3, &F2Matrix::zero(2)).is_err());
    }
}
