use serde::Serialize;

use super::exact::{depth_stats, spaces};
use super::mc::run_sharded;
use crate::error::Result;
use crate::f2linalg::{F2Matrix, RankTracker};
use crate::markov::{qcl_entry, Dyadic};
use crate::rules::{genericity, RuleId, TransitionLaw};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    /// `||(mu_i - v_i) Q + w_i - mu_{i+1}||_1` for `i = 0..r_max`.
    pub residuals: Vec<Dyadic>,
    pub max_residual: Dyadic,
}

/// Checks `(mu_i - v_i) Q + w_i = mu_{i+1}` exactly, where `v_i(j) = P(X_i = j,
/// Z_i = 1)` and `w_i(j) = P(X_{i+1} = j, Z_i = 1)`. `Mat` counts as always
/// generic.
pub fn decomposition_check(rule: RuleId, r_max: usize, budget: u64) -> Result<DecompositionReport> {
    let st = depth_stats(rule, r_max, budget)?;
    let e = st.total_log2;
    let mass = |c: u128| Dyadic::ratio(c, e);
    let mut residuals = Vec::with_capacity(r_max);
    for i in 0..r_max {
        let states = i + 2;
        let mut lhs = vec![Dyadic::zero(); states + 1];
        for s in 0..states {
            let generic = mass(st.mu[i][s] - st.exceptional[i][s]);
            if generic.is_zero() {
                continue;
            }
            let lo = s.saturating_sub(1);
            for (j, slot) in lhs.iter_mut().enumerate().take(s + 2).skip(lo) {
                *slot = &*slot + &(&generic * &qcl_entry(s as u64, j as u64));
            }
        }
        for (j, &w) in st.after_exceptional[i].iter().enumerate() {
            lhs[j] = &lhs[j] + &mass(w);
        }
        let next = &st.mu[i + 1];
        let res: Dyadic = (0..lhs.len().max(next.len()))
            .map(|j| {
                let rhs = next.get(j).map_or_else(Dyadic::zero, |&c| mass(c));
                (&lhs.get(j).cloned().unwrap_or_default() - &rhs).abs()
            })
            .sum();
        residuals.push(res);
    }
    let max_residual = residuals.iter().max().cloned().unwrap_or_default();
    Ok(DecompositionReport {
        residuals,
        max_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub i: usize,
    pub p_exceptional: f64,
    /// Present in exact mode.
    pub p_exceptional_exact: Option<Dyadic>,
    /// Largest `|P(move | corank = s, Z_i = 0) - Q(s, ·)|` over observed `s`.
    pub max_deviation: f64,
    pub max_deviation_exact: Option<Dyadic>,
    /// Number of generic draws behind the deviation (MC) or `None` (exact).
    pub generic_samples: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub rule: RuleId,
    pub r: usize,
    pub mode: &'static str,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub records: Vec<AuditRecord>,
}

/// Exhaustive audit of `Z_0..Z_{r-1}`.
pub fn transition_audit_exact(rule: RuleId, r: usize, budget: u64) -> Result<AuditReport> {
    let st = depth_stats(rule, r, budget)?;
    let e = st.total_log2;
    let mut records = Vec::with_capacity(r);
    for i in 0..r {
        let p = Dyadic::ratio(st.exceptional[i].iter().sum(), e);
        let mut dev = Dyadic::zero();
        for (s, moves) in st.generic_moves[i].iter().enumerate() {
            let total: u128 = moves.iter().sum();
            if total == 0 {
                continue;
            }
            // Conditional frequencies: counts / total, made dyadic by scaling
            // with the (power-of-two-free) common factor cancelled out.
            let q = TransitionLaw::qcl_row(s);
            let law = TransitionLaw {
                down: Dyadic::ratio(moves[0], 0),
                same: Dyadic::ratio(moves[1], 0),
                up: Dyadic::ratio(moves[2], 0),
            };
            let scaled_q = TransitionLaw {
                down: &q.down * &Dyadic::ratio(total, 0),
                same: &q.same * &Dyadic::ratio(total, 0),
                up: &q.up * &Dyadic::ratio(total, 0),
            };
            // |count - total·Q| / total; exact only when total is a power of two.
            let raw = law.max_deviation(&scaled_q);
            let d = if total.is_power_of_two() {
                &raw * &Dyadic::pow2(-(total.trailing_zeros() as i64))
            } else {
                let f = raw.to_f64() / total as f64;
                if f == 0.0 {
                    Dyadic::zero()
                } else {
                    // Rounded upward to a dyadic with 60 fractional bits.
                    Dyadic::new((f * 2f64.powi(60)).ceil() as i64, 60)
                }
            };
            dev = dev.max(d);
        }
        records.push(AuditRecord {
            i,
            p_exceptional: p.to_f64(),
            p_exceptional_exact: Some(p),
            max_deviation: dev.to_f64(),
            max_deviation_exact: Some(dev),
            generic_samples: None,
        });
    }
    Ok(AuditReport {
        rule,
        r,
        mode: "exact",
        samples: None,
        seed: None,
        records,
    })
}

/// Sampled audit: per `i`, the frequency of `Z_i = 1` and the deviation of
/// generic moves from the `Q_CL` rows.
pub fn transition_audit_mc(rule: RuleId, r: usize, samples: u64, seed: u64) -> AuditReport {
    let spaces = spaces(rule, r);
    // Per i: exceptional count and [s][class] generic counts.
    type Tally = (Vec<u64>, Vec<Vec<[u64; 3]>>);
    let shards: Vec<Tally> = run_sharded(samples, seed, |rng, count| {
        let mut z = vec![0u64; r];
        let mut moves: Vec<Vec<[u64; 3]>> = (0..r).map(|i| vec![[0; 3]; i + 2]).collect();
        for _ in 0..count {
            let mut a = F2Matrix::empty();
            let mut t = RankTracker::with_capacity(r);
            for (i, space) in spaces.iter().enumerate() {
                let exceptional = match rule {
                    RuleId::Mat => false,
                    _ => genericity(rule, i, &a).expect("sizes match"),
                };
                let s = t.corank();
                let step = space.sample(rng);
                let class = t.extend(&step.v, &step.w, step.c).expect("lengths match");
                a.extend_in_place(&step.v, &step.w, step.c).expect("lengths match");
                if exceptional {
                    z[i] += 1;
                } else {
                    moves[i][s][(class.delta() + 1) as usize] += 1;
                }
            }
        }
        (z, moves)
    });
    let mut z = vec![0u64; r];
    let mut moves: Vec<Vec<[u64; 3]>> = (0..r).map(|i| vec![[0; 3]; i + 2]).collect();
    for (sz, sm) in shards {
        for i in 0..r {
            z[i] += sz[i];
            for (s, m) in sm[i].iter().enumerate() {
                for c in 0..3 {
                    moves[i][s][c] += m[c];
                }
            }
        }
    }
    let records = (0..r)
        .map(|i| {
            let mut dev = 0.0f64;
            let mut generic = 0;
            for (s, m) in moves[i].iter().enumerate() {
                let total: u64 = m.iter().sum();
                generic += total;
                if total == 0 {
                    continue;
                }
                let q = TransitionLaw::qcl_row(s);
                let q = [q.down.to_f64(), q.same.to_f64(), q.up.to_f64()];
                for c in 0..3 {
                    dev = dev.max((m[c] as f64 / total as f64 - q[c]).abs());
                }
            }
            AuditRecord {
                i,
                p_exceptional: z[i] as f64 / samples as f64,
                p_exceptional_exact: None,
                max_deviation: dev,
                max_deviation_exact: None,
                generic_samples: Some(generic),
            }
        })
        .collect();
    AuditReport {
        rule,
        r,
        mode: "mc",
        samples: Some(samples),
        seed: Some(seed),
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::DEFAULT_BUDGET;

    #[test]
    fn mat_decomposes_trivially() {
        let rep = decomposition_check(RuleId::Mat, 3, DEFAULT_BUDGET).unwrap();
        assert!(rep.max_residual.is_zero());
    }

    #[test]
    fn alt_and_redei_decompose() {
        for rule in [RuleId::Alt, RuleId::Redei { kappa: 2 }] {
            let rep = decomposition_check(rule, 4, DEFAULT_BUDGET).unwrap();
            assert!(rep.max_residual.is_zero(), "{rule}: {:?}", rep.residuals);
        }
    }

    #[test]
    fn alt_exceptional_probabilities() {
        let rep = transition_audit_exact(RuleId::Alt, 4, DEFAULT_BUDGET).unwrap();
        for rec in &rep.records {
            assert_eq!(rec.p_exceptional_exact, Some(Dyadic::pow2(-(rec.i as i64))));
            assert_eq!(rec.max_deviation_exact, Some(Dyadic::zero()));
        }
    }

    #[test]
    fn mat_exact_deviation_zero() {
        let rep = transition_audit_exact(RuleId::Mat, 4, DEFAULT_BUDGET).unwrap();
        assert!(rep.records.iter().all(|r| r.max_deviation_exact == Some(Dyadic::zero())));
        assert!(rep.records.iter().all(|r| r.p_exceptional == 0.0));
    }

    #[test]
    fn mc_audit_runs_and_is_reproducible() {
        let a = transition_audit_mc(RuleId::Alt, 8, 3000, 5);
        let b = transition_audit_mc(RuleId::Alt, 8, 3000, 5);
        assert_eq!(a, b);
        assert_eq!(a.records[0].p_exceptional, 1.0);
        assert!((a.records[1].p_exceptional - 0.5).abs() < 0.05);
    }
}
