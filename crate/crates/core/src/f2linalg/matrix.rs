use std::fmt;

use serde::{Deserialize, Serialize};

use super::elim::{self, Rref};
use super::F2Vector;
use crate::error::{Error, Result};

/// Effect of a row-column extension on the corank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransitionClass {
    Down,
    Same,
    Up,
}

impl TransitionClass {
    pub fn delta(self) -> i64 {
        match self {
            TransitionClass::Down => -1,
            TransitionClass::Same => 0,
            TransitionClass::Up => 1,
        }
    }

    pub fn from_delta(delta: i64) -> Option<Self> {
        match delta {
            -1 => Some(TransitionClass::Down),
            0 => Some(TransitionClass::Same),
            1 => Some(TransitionClass::Up),
            _ => None,
        }
    }
}

/// Square matrix over F2 stored as packed rows. Entry `(i, j)` is bit `j` of
/// row `i`, both 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Matrix {
    n: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            rows: vec![F2Vector::zeros(n); n],
        }
    }

    /// The 0x0 matrix every rule grows from.
    pub fn empty() -> Self {
        Self::zero(0)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i].set0(i);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let rows = rows
            .iter()
            .map(|r| {
                if r.len() != n {
                    Err(Error::LengthMismatch {
                        expected: n,
                        got: r.len(),
                    })
                } else {
                    Ok(F2Vector::from_bits(r))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, rows })
    }

    /// Builds the matrix whose `(i, j)` entry (1-based) is `f(i, j)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                if f(i + 1, j + 1) {
                    m.rows[i].set0(j);
                }
            }
        }
        m
    }

    /// Decodes the low `n*n` bits of `code`, row-major.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n * n <= 64);
        Self::from_fn(n, |i, j| (code >> ((i - 1) * n + (j - 1))) & 1 == 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i - 1].set(j, bit)
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> &F2Vector {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (w, &word) in row.words().iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let j = w * 64 + word.trailing_zeros() as usize;
                    t.rows[j].set0(i);
                    word &= word - 1;
                }
            }
        }
        t
    }

    /// Column `j` (1-based) as a vector.
    pub fn column(&self, j: usize) -> F2Vector {
        let mut c = F2Vector::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            if row.bit0(j - 1) {
                c.set0(i);
            }
        }
        c
    }

    pub fn matvec(&self, x: &F2Vector) -> Result<F2Vector> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut out = F2Vector::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            if row.inner(x) {
                out.set0(i);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        elim::rank(self.rows.clone())
    }

    pub fn corank(&self) -> usize {
        self.n - self.rank()
    }

    pub(crate) fn rref(&self) -> Rref {
        elim::rref(self.rows.clone(), self.n)
    }

    /// Basis of `ker(A) = {x : Ax = 0}`.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        self.rref().null_space()
    }

    /// Basis of `ker(A^T)`.
    pub fn left_kernel_basis(&self) -> Vec<F2Vector> {
        self.transpose().kernel_basis()
    }

    /// One solution of `Ax = b`.
    pub fn solve(&self, b: &F2Vector) -> Option<F2Vector> {
        assert_eq!(b.len(), self.n, "right-hand side length");
        elim::solve(&self.rows, self.n, b)
    }

    /// Whether `Ax = v` is solvable, i.e. `v` lies in the column space.
    pub fn in_image(&self, v: &F2Vector) -> bool {
        self.solve(v).is_some()
    }

    /// `<A^{-1} v, w>`: the inner product of any solution of `Ax = v` with `w`.
    ///
    /// Well defined exactly when `v ∈ Im(A)` and `w ∈ Im(A^T) = ker(A)^⊥`.
    pub fn pairing(&self, v: &F2Vector, w: &F2Vector) -> Result<bool> {
        if v.len() != self.n || w.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: v.len().max(w.len()),
            });
        }
        let x = self
            .solve(v)
            .ok_or(Error::PairingUndefined("v is not in Im(A)"))?;
        if !self.rref().contains(w) {
            return Err(Error::PairingUndefined("w is not in Im(A^T)"));
        }
        Ok(x.inner(w))
    }

    /// `A(v, w, c)`: `v` becomes the new last row, `w` the new last column and
    /// `c` the corner.
    pub fn extend(&self, v: &F2Vector, w: &F2Vector, c: bool) -> Result<Self> {
        let mut out = self.clone();
        out.extend_in_place(v, w, c)?;
        Ok(out)
    }

    pub fn extend_in_place(&mut self, v: &F2Vector, w: &F2Vector, c: bool) -> Result<()> {
        for len in [v.len(), w.len()] {
            if len != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    got: len,
                });
            }
        }
        for (k, row) in self.rows.iter_mut().enumerate() {
            row.push(w.bit0(k));
        }
        let mut last = v.clone();
        last.push(c);
        self.rows.push(last);
        self.n += 1;
        Ok(())
    }

    /// Predicts `corank(A(v,w,c)) - corank(A)` from the spaces of `A` alone.
    ///
    /// Since `v` is appended as a row and `w` as a column, `v` is tested
    /// against the row space `Im(A^T)` and `w` against the column space
    /// `Im(A)`. The corank rises iff both lie in their spaces and `c` equals
    /// the pairing `<(A^T)^{-1} v, w>`; it drops iff neither does.
    pub fn classify_transition(&self, v: &F2Vector, w: &F2Vector, c: bool) -> TransitionClass {
        assert_eq!(v.len(), self.n);
        assert_eq!(w.len(), self.n);
        let row_space = self.rref();
        let v_in = row_space.contains(v);
        let w_in = self.in_image(w);
        match (v_in, w_in) {
            (false, false) => TransitionClass::Down,
            (true, true) => {
                let pairing = self
                    .transpose()
                    .pairing(v, w)
                    .expect("membership established above");
                if pairing == c {
                    TransitionClass::Up
                } else {
                    TransitionClass::Same
                }
            }
            _ => TransitionClass::Same,
        }
    }

    /// `ker(A) ∩ ker(A^T) = {0}`, computed from the two kernels.
    pub fn kernel_intersection_trivial(&self) -> bool {
        let k = self.kernel_basis();
        let l = self.left_kernel_basis();
        let total = k.len() + l.len();
        let stacked: Vec<F2Vector> = k.into_iter().chain(l).collect();
        elim::rank(stacked) == total
    }

    /// `Im(A) + Im(A^T) = F2^n`, computed from the two images.
    pub fn images_span_full(&self) -> bool {
        let stacked: Vec<F2Vector> = self
            .rows
            .iter()
            .cloned()
            .chain(self.transpose().rows)
            .collect();
        elim::rank(stacked) == self.n
    }

    /// Rank of the block with 0-based row range `rows` and column range `cols`.
    pub(crate) fn block_rank(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> usize {
        if rows.is_empty() || cols.is_empty() {
            return 0;
        }
        let block: Vec<F2Vector> = self.rows[rows].iter().map(|r| r.slice0(cols.clone())).collect();
        elim::rank(block)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
