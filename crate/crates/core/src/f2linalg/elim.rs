//! Word-parallel Gaussian elimination on rectangular systems of bit rows.

use super::F2Vector;

/// Reduced row echelon form of a list of rows of common width.
pub(crate) struct Rref {
    /// Nonzero rows, fully reduced; row `k` has its leading one at `pivots[k]`.
    pub rows: Vec<F2Vector>,
    pub pivots: Vec<usize>,
    pub width: usize,
}

pub(crate) fn rank(mut rows: Vec<F2Vector>) -> usize {
    let Some(width) = rows.first().map(F2Vector::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&k| rows[k].bit0(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row.bit0(col) {
                *row ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub(crate) fn rref(mut rows: Vec<F2Vector>, width: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&k| rows[k].bit0(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != rank && row.bit0(col) {
                *row ^= &pivot;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Rref {
        rows,
        pivots,
        width,
    }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : row . x = 0 for every row}`.
    pub fn null_space(&self) -> Vec<F2Vector> {
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.width)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = F2Vector::zeros(self.width);
                x.set0(f);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.bit0(f) {
                        x.set0(p);
                    }
                }
                x
            })
            .collect()
    }

    /// Reduces `v` against the echelon rows; zero iff `v` lies in their span.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.bit0(p) {
                v ^= row;
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }
}

/// One solution of `M x = b`, `M` given by its rows, or `None` if inconsistent.
pub(crate) fn solve(rows: &[F2Vector], width: usize, b: &F2Vector) -> Option<F2Vector> {
    assert_eq!(rows.len(), b.len());
    let augmented: Vec<F2Vector> = rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut r = r.clone();
            r.push(b.bit0(k));
            r
        })
        .collect();
    let reduced = rref(augmented, width + 1);
    if reduced.pivots.last() == Some(&width) {
        return None;
    }
    let mut x = F2Vector::zeros(width);
    for (row, &p) in reduced.rows.iter().zip(&reduced.pivots) {
        if row.bit0(width) {
            x.set0(p);
        }
    }
    Some(x)
}

/// Number of solutions of the affine system `M x = b` is `2^(width - rank)` when
/// consistent. Returns the exponent, or `None` when there is no solution.
pub(crate) fn solution_dim(rows: &[F2Vector], width: usize, b: &F2Vector) -> Option<usize> {
    assert_eq!(rows.len(), b.len());
    let augmented: Vec<F2Vector> = rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut r = r.clone();
            r.push(b.bit0(k));
            r
        })
        .collect();
    let reduced = rref(augmented, width + 1);
    if reduced.pivots.last() == Some(&width) {
        None
    } else {
        Some(width - reduced.rank())
    }
}
