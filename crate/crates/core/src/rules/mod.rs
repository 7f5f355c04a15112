//! The six growth rules: step spaces, samplers, enumerators, matrix
//! construction and the genericity detectors.

mod detector;
mod law;
mod rule;
mod space;

pub use detector::genericity;
pub(crate) use law::transition_counts;
pub use law::{law_is_markov, rule_transition_law, transition_is_markov, transition_law, TransitionLaw};
pub use rule::{Family, RuleId};
pub use space::{contains, enumerate_step, sample_step, step_space_size, Direction, Step, StepSpace};

use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;

/// A rule together with its first `r` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulePrefix {
    pub rule: RuleId,
    pub steps: Vec<Step>,
}

impl RulePrefix {
    pub fn new(rule: RuleId, steps: Vec<Step>) -> Self {
        Self { rule, steps }
    }

    pub fn build(&self) -> Result<F2Matrix> {
        build_matrix(self.rule, &self.steps)
    }
}

/// `omega_r`: grows the 0x0 matrix by each step in turn, checking that step
/// `i` belongs to `S_i`.
pub fn build_matrix(rule: RuleId, steps: &[Step]) -> Result<F2Matrix> {
    let mut a = F2Matrix::empty();
    for (i, s) in steps.iter().enumerate() {
        if s.i != i || !contains(rule, s) {
            return Err(Error::InvalidStep {
                rule: rule.to_string(),
                index: i,
            });
        }
        a.extend_in_place(&s.v, &s.w, s.c)?;
    }
    Ok(a)
}
