use std::fmt;
use std::ops::{BitAndAssign, BitXor, BitXorAssign};

use smallvec::SmallVec;

pub(crate) type Words = SmallVec<[u64; 4]>;

#[inline]
pub(crate) fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// A vector over F2, packed 64 entries per word.
///
/// Positions are 1-based in the public accessors (`get`, `set`, `unit`), so
/// `v.get(1)` is the first coordinate. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Vector {
    len: usize,
    words: Words,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: smallvec::smallvec![0; word_count(len)],
        }
    }

    /// The all-ones vector `H_len`.
    pub fn ones(len: usize) -> Self {
        Self::prefix_ones(len, len)
    }

    /// `H_len(k)`: the first `k` entries are one, the rest zero.
    pub fn prefix_ones(len: usize, k: usize) -> Self {
        assert!(k <= len, "prefix {k} longer than vector {len}");
        let mut v = Self::zeros(len);
        for (w, word) in v.words.iter_mut().enumerate() {
            let lo = w * 64;
            if k >= lo + 64 {
                *word = u64::MAX;
            } else if k > lo {
                *word = (1u64 << (k - lo)) - 1;
            }
        }
        v
    }

    /// Standard basis vector `e_j` (1-based).
    pub fn unit(len: usize, j: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(j, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set0(i);
            }
        }
        v
    }

    /// Builds a vector from the low `len` bits of `value`, bit 0 being position 1.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.bit0(i) as u8).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Entry at 1-based position `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "position {i} out of 1..={}", self.len);
        self.bit0(i - 1)
    }

    /// Sets the entry at 1-based position `i`.
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i >= 1 && i <= self.len, "position {i} out of 1..={}", self.len);
        if bit {
            self.set0(i - 1);
        } else {
            self.words[(i - 1) / 64] &= !(1u64 << ((i - 1) % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Standard inner product: parity of the AND.
    pub fn inner(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "inner product of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..other.len {
            out.push(other.bit0(i));
        }
        out
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.set0(self.len - 1);
        }
    }

    /// Lexicographic comparison of the entry sequences, position 1 first.
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        let n = self.len.min(other.len);
        for i in 0..n {
            match (self.bit0(i), other.bit0(i)) {
                (false, true) => return std::cmp::Ordering::Less,
                (true, false) => return std::cmp::Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }

    #[inline]
    pub(crate) fn bit0(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set0(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub(crate) fn flip0(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    #[inline]
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Index (0-based) of the lowest set bit at or after `start`.
    pub(crate) fn lowest_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / 64;
        let mut word = self.words[w] & (u64::MAX << (start % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    /// Restriction to the 0-based coordinate range `range`.
    pub(crate) fn slice0(&self, range: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(range.len());
        for (k, i) in range.enumerate() {
            if self.bit0(i) {
                out.set0(k);
            }
        }
        out
    }
}

impl BitXorAssign<&F2Vector> for F2Vector {
    fn bitxor_assign(&mut self, rhs: &F2Vector) {
        assert_eq!(self.len, rhs.len, "xor of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&F2Vector> for &F2Vector {
    type Output = F2Vector;
    fn bitxor(self, rhs: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAndAssign<&F2Vector> for F2Vector {
    fn bitand_assign(&mut self, rhs: &F2Vector) {
        assert_eq!(self.len, rhs.len, "and of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a &= b;
        }
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit0(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}
