use super::{F2Vector, TransitionClass};
use crate::error::{Error, Result};

/// Incremental corank of a matrix grown one row and column at a time.
///
/// Maintains an invertible `T` and an echelon `R` with `T·A = R`: each nonzero
/// row of `R` has a distinct pivot at its lowest set bit, and the zero rows of
/// `R` correspond to rows of `T` spanning `ker(A^T)`. An extension appends
/// `T·w` as the new column of `R` and reduces the new row `(v, c)` against the
/// pivots, so one growth step costs `O(n^2 / 64)`.
#[derive(Clone, Debug, Default)]
pub struct RankTracker {
    n: usize,
    reduced: Vec<F2Vector>,
    transform: Vec<F2Vector>,
    pivot_of_row: Vec<Option<usize>>,
    row_of_pivot: Vec<Option<usize>>,
    corank: usize,
}

impl RankTracker {
    /// Tracker for the 0x0 matrix.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            n: 0,
            reduced: Vec::with_capacity(n),
            transform: Vec::with_capacity(n),
            pivot_of_row: Vec::with_capacity(n),
            row_of_pivot: Vec::with_capacity(n),
            corank: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn corank(&self) -> usize {
        self.corank
    }

    pub fn rank(&self) -> usize {
        self.n - self.corank
    }

    /// Applies `A -> A(v, w, c)` and reports the corank change.
    pub fn extend(&mut self, v: &F2Vector, w: &F2Vector, c: bool) -> Result<TransitionClass> {
        let n = self.n;
        for len in [v.len(), w.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: len,
                });
            }
        }

        let mut hits_kernel = Vec::new();
        for k in 0..n {
            let y = self.transform[k].inner(w);
            self.reduced[k].push(y);
            self.transform[k].push(false);
            if y && self.pivot_of_row[k].is_none() {
                hits_kernel.push(k);
            }
        }

        let mut row = v.clone();
        row.push(c);
        let mut combo = F2Vector::zeros(n + 1);
        combo.set0(n);
        let mut start = 0;
        let mut lead = None;
        while let Some(b) = row.lowest_one_from(start) {
            if b == n {
                lead = Some(n);
                break;
            }
            match self.row_of_pivot[b] {
                Some(k) => {
                    row ^= &self.reduced[k];
                    combo ^= &self.transform[k];
                    start = b + 1;
                }
                None => {
                    lead = Some(b);
                    break;
                }
            }
        }

        self.row_of_pivot.push(None);
        let mut kernel_lost = false;
        if let Some((&p, rest)) = hits_kernel.split_first() {
            kernel_lost = true;
            self.pivot_of_row[p] = Some(n);
            self.row_of_pivot[n] = Some(p);
            for &k in rest {
                let (r, t) = (self.reduced[p].clone(), self.transform[p].clone());
                self.reduced[k] ^= &r;
                self.transform[k] ^= &t;
            }
            if lead == Some(n) {
                row ^= &self.reduced[p];
                combo ^= &self.transform[p];
                lead = None;
            }
        }

        if let Some(b) = lead {
            self.row_of_pivot[b] = Some(n);
        }
        let kernel_gained = lead.is_none();
        debug_assert_eq!(kernel_gained, row.is_zero());
        self.reduced.push(row);
        self.transform.push(combo);
        self.pivot_of_row.push(lead);
        self.n += 1;

        let class = match (kernel_gained, kernel_lost) {
            (true, false) => TransitionClass::Up,
            (false, true) => TransitionClass::Down,
            _ => TransitionClass::Same,
        };
        self.corank = (self.corank as i64 + class.delta()) as usize;
        Ok(class)
    }
}
