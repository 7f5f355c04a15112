use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rand::RngCore;

use super::RuleId;
use crate::f2linalg::F2Vector;

/// One extension datum: `v` is the appended row, `w` the appended column,
/// `c` the new corner. `v` and `w` have length `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub i: usize,
    pub v: F2Vector,
    pub w: F2Vector,
    pub c: bool,
}

impl Step {
    pub fn new(v: F2Vector, w: F2Vector, c: bool) -> Self {
        assert_eq!(v.len(), w.len());
        Self { i: v.len(), v, w, c }
    }

    /// Order on the packed `(v, w, c)`.
    pub fn cmp_packed(&self, other: &Self) -> Ordering {
        self.v
            .cmp_lex(&other.v)
            .then_with(|| self.w.cmp_lex(&other.w))
            .then_with(|| self.c.cmp(&other.c))
    }
}

/// A basis direction of a step space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub v: F2Vector,
    pub w: F2Vector,
    pub c: bool,
}

/// `S_i` as an affine subspace of `F2^i x F2^i x F2`: a base point plus
/// independent directions of four kinds, each given by a coordinate mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSpace {
    i: usize,
    base_v: F2Vector,
    base_w: F2Vector,
    base_c: bool,
    /// `(e_j, 0)` for `j` in the mask.
    free_v: F2Vector,
    /// `(0, e_j)` for `j` in the mask.
    free_w: F2Vector,
    /// `(e_j, e_j)` for `j` in the mask.
    tied: F2Vector,
    c_free: bool,
}

/// Mask of the 1-based coordinates `from..=i`.
fn from_coord(i: usize, from: usize) -> F2Vector {
    let mut m = F2Vector::ones(i);
    for j in 1..from.min(i + 1) {
        m.set(j, false);
    }
    m
}

impl StepSpace {
    fn fixed(v: F2Vector, w: F2Vector, c: bool) -> Self {
        let i = v.len();
        Self {
            i,
            base_v: v,
            base_w: w,
            base_c: c,
            free_v: F2Vector::zeros(i),
            free_w: F2Vector::zeros(i),
            tied: F2Vector::zeros(i),
            c_free: false,
        }
    }

    /// Base `(v, w)`, tied coordinates `from..=i`, `c` free.
    fn tied_from(v: F2Vector, w: F2Vector, from: usize) -> Self {
        let i = v.len();
        let tied = from_coord(i, from);
        Self {
            i,
            base_v: v,
            base_w: w,
            base_c: false,
            free_v: F2Vector::zeros(i),
            free_w: F2Vector::zeros(i),
            tied,
            c_free: true,
        }
    }

    pub fn new(rule: RuleId, i: usize) -> Self {
        let zero = || F2Vector::zeros(i);
        let h = || F2Vector::ones(i);
        match rule {
            RuleId::Mat => Self {
                i,
                base_v: zero(),
                base_w: zero(),
                base_c: false,
                free_v: h(),
                free_w: h(),
                tied: zero(),
                c_free: true,
            },
            RuleId::Alt => Self::tied_from(zero(), h(), 1),
            RuleId::Redei { kappa } => {
                if i < kappa {
                    Self::tied_from(zero(), h(), 1)
                } else {
                    Self::tied_from(zero(), zero(), 1)
                }
            }
            RuleId::Pell1 { kappa } => {
                if i == 0 {
                    Self::fixed(zero(), zero(), true)
                } else if i < kappa {
                    Self::tied_from(F2Vector::unit(i, 1), h(), 2)
                } else {
                    Self::tied_from(zero(), zero(), 2)
                }
            }
            RuleId::Pell2 { kappa } => {
                if i == 0 {
                    Self::fixed(zero(), zero(), true)
                } else if i <= kappa {
                    Self::tied_from(zero(), h(), 2)
                } else {
                    Self::tied_from(zero(), zero(), 2)
                }
            }
            RuleId::Pell3 { kappa, a, b } => match i {
                0 => Self::fixed(zero(), zero(), true),
                1 => Self::fixed(F2Vector::ones(1), F2Vector::from_bits(&[a as u8]), b),
                _ => {
                    let (v, w) = if i <= kappa {
                        let mut w = h();
                        w.set(2, false);
                        (F2Vector::unit(i, 2), w)
                    } else {
                        (zero(), F2Vector::unit(i, 1))
                    };
                    let mut s = Self::tied_from(v, w, 3);
                    s.free_w.set(2, true);
                    s
                }
            },
        }
    }

    pub fn index(&self) -> usize {
        self.i
    }

    pub fn c_free(&self) -> bool {
        self.c_free
    }

    /// Every coordinate of `v` and of `w` is independently free.
    pub(crate) fn vw_unconstrained(&self) -> bool {
        self.free_v.count_ones() == self.i && self.free_w.count_ones() == self.i
    }

    /// `log2 |S_i|`.
    pub fn dim(&self) -> usize {
        self.free_v.count_ones()
            + self.free_w.count_ones()
            + self.tied.count_ones()
            + self.c_free as usize
    }

    pub fn size(&self) -> BigUint {
        BigUint::one() << self.dim()
    }

    pub fn base(&self) -> Step {
        Step {
            i: self.i,
            v: self.base_v.clone(),
            w: self.base_w.clone(),
            c: self.base_c,
        }
    }

    /// Directions spanning the `(v, w)` part, excluding the pure-corner one.
    pub fn vw_directions(&self) -> Vec<Direction> {
        let i = self.i;
        let mut out = Vec::new();
        for j in 1..=i {
            let e = F2Vector::unit(i, j);
            if self.free_v.get(j) {
                out.push(Direction {
                    v: e.clone(),
                    w: F2Vector::zeros(i),
                    c: false,
                });
            }
            if self.free_w.get(j) {
                out.push(Direction {
                    v: F2Vector::zeros(i),
                    w: e.clone(),
                    c: false,
                });
            }
            if self.tied.get(j) {
                out.push(Direction {
                    v: e.clone(),
                    w: e,
                    c: false,
                });
            }
        }
        out
    }

    /// All directions, with the corner last when it is free.
    pub fn directions(&self) -> Vec<Direction> {
        let mut out = self.vw_directions();
        if self.c_free {
            out.push(Direction {
                v: F2Vector::zeros(self.i),
                w: F2Vector::zeros(self.i),
                c: true,
            });
        }
        out
    }

    /// Every member, sorted by packed `(v, w, c)`.
    pub fn enumerate(&self) -> Vec<Step> {
        let dirs = self.directions();
        assert!(dirs.len() < 40, "step space too large to enumerate");
        let mut out = Vec::with_capacity(1 << dirs.len());
        for code in 0u64..(1u64 << dirs.len()) {
            let mut s = self.base();
            for (k, d) in dirs.iter().enumerate() {
                if code >> k & 1 == 1 {
                    s.v ^= &d.v;
                    s.w ^= &d.w;
                    s.c ^= d.c;
                }
            }
            out.push(s);
        }
        out.sort_by(Step::cmp_packed);
        out
    }

    /// Uniform draw: one random word per 64 coordinates for each nonempty
    /// mask, then one word for the corner.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Step {
        let draw = |mask: &F2Vector, rng: &mut R| {
            let mut x = F2Vector::zeros(self.i);
            for w in x.words_mut() {
                *w = rng.next_u64();
            }
            x &= mask;
            x
        };
        let mut v = self.base_v.clone();
        let mut w = self.base_w.clone();
        if !self.free_v.is_zero() {
            v ^= &draw(&self.free_v, rng);
        }
        if !self.free_w.is_zero() {
            w ^= &draw(&self.free_w, rng);
        }
        if !self.tied.is_zero() {
            let t = draw(&self.tied, rng);
            v ^= &t;
            w ^= &t;
        }
        let mut c = self.base_c;
        if self.c_free {
            c ^= rng.next_u64() & 1 == 1;
        }
        Step { i: self.i, v, w, c }
    }
}

/// `|S_i|` for the rule.
pub fn step_space_size(rule: RuleId, i: usize) -> BigUint {
    StepSpace::new(rule, i).size()
}

pub fn enumerate_step(rule: RuleId, i: usize) -> Vec<Step> {
    StepSpace::new(rule, i).enumerate()
}

pub fn sample_step<R: RngCore + ?Sized>(rule: RuleId, i: usize, rng: &mut R) -> Step {
    StepSpace::new(rule, i).sample(rng)
}

/// Membership in `S_i`, read off the defining conditions coordinate by
/// coordinate (independently of [`StepSpace`]).
pub fn contains(rule: RuleId, step: &Step) -> bool {
    let i = step.i;
    if step.v.len() != i || step.w.len() != i {
        return false;
    }
    let (v, w) = (&step.v, &step.w);
    let sum_is = |j: usize, bit: bool| (v.get(j) ^ w.get(j)) == bit;
    let all_from = |from: usize, bit: bool| (from..=i).all(|j| sum_is(j, bit));
    match rule {
        RuleId::Mat => true,
        RuleId::Alt => all_from(1, true),
        RuleId::Redei { kappa } => all_from(1, i < kappa),
        RuleId::Pell1 { kappa } => {
            if i == 0 {
                step.c
            } else if i < kappa {
                // v + w = (0, H_{i-1}) with the first entry of w equal to 1.
                w.get(1) && sum_is(1, false) && all_from(2, true)
            } else {
                !v.get(1) && all_from(1, false)
            }
        }
        RuleId::Pell2 { kappa } => {
            if i == 0 {
                step.c
            } else if i <= kappa {
                w.get(1) && all_from(1, true)
            } else {
                !v.get(1) && all_from(1, false)
            }
        }
        RuleId::Pell3 { kappa, a, b } => match i {
            0 => step.c,
            1 => v.get(1) && w.get(1) == a && step.c == b,
            _ => {
                let head = !v.get(1) && w.get(1);
                if i <= kappa {
                    head && v.get(2) && all_from(3, true)
                } else {
                    head && !v.get(2) && all_from(3, false)
                }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_rules() -> Vec<RuleId> {
        let mut out = vec![RuleId::Mat, RuleId::Alt];
        for kappa in 0..=4 {
            out.push(RuleId::Redei { kappa });
            out.push(RuleId::Pell1 { kappa });
            out.push(RuleId::Pell2 { kappa });
            for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
                out.push(RuleId::Pell3 { kappa, a, b });
            }
        }
        out
    }

    fn step(v: &[u8], w: &[u8], c: u8) -> Step {
        Step::new(F2Vector::from_bits(v), F2Vector::from_bits(w), c == 1)
    }

    #[test]
    fn sizes() {
        assert_eq!(step_space_size(RuleId::Mat, 3), BigUint::from(128u32));
        assert_eq!(step_space_size(RuleId::Alt, 2), BigUint::from(8u32));
        assert_eq!(step_space_size(RuleId::Pell1 { kappa: 2 }, 0), BigUint::one());
        assert_eq!(step_space_size(RuleId::Redei { kappa: 2 }, 3), BigUint::from(16u32));
        for i in 0..=8 {
            assert_eq!(step_space_size(RuleId::Mat, i), BigUint::one() << (2 * i + 1));
        }
    }

    #[test]
    fn alt_step_one() {
        let got = enumerate_step(RuleId::Alt, 1);
        let want = vec![
            step(&[0], &[1], 0),
            step(&[0], &[1], 1),
            step(&[1], &[0], 0),
            step(&[1], &[0], 1),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn pell3_step_one_is_fixed() {
        for (a, b) in [(false, false), (true, false), (false, true), (true, true)] {
            let rule = RuleId::Pell3 { kappa: 2, a, b };
            assert_eq!(enumerate_step(rule, 1), vec![step(&[1], &[a as u8], b as u8)]);
        }
    }

    #[test]
    fn redei_symmetric_above_kappa() {
        let s = enumerate_step(RuleId::Redei { kappa: 2 }, 3);
        assert_eq!(s.len(), 16);
        assert!(s.iter().all(|x| x.v == x.w));
    }

    #[test]
    fn enumeration_matches_predicate() {
        for rule in all_rules() {
            for i in 0..=4 {
                let listed = enumerate_step(rule, i);
                assert_eq!(BigUint::from(listed.len()), step_space_size(rule, i));
                assert!(listed.windows(2).all(|p| p[0].cmp_packed(&p[1]).is_lt()), "{rule} {i}");
                // Brute force over the whole ambient space.
                let mut count = 0;
                for code in 0u64..(1 << (2 * i + 1)) {
                    let v = F2Vector::from_u64(i, code);
                    let w = F2Vector::from_u64(i, code >> i);
                    let s = Step::new(v, w, code >> (2 * i) & 1 == 1);
                    if contains(rule, &s) {
                        count += 1;
                        assert!(listed.binary_search_by(|x| x.cmp_packed(&s)).is_ok());
                    }
                }
                assert_eq!(count, listed.len(), "{rule} {i}");
            }
        }
    }

    #[test]
    fn fixed_first_steps_are_returned() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kappa in 0..4 {
            let rule = RuleId::Pell1 { kappa };
            for _ in 0..10 {
                assert_eq!(sample_step(rule, 0, &mut rng), step(&[], &[], 1));
            }
        }
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for rule in all_rules() {
            for i in [0, 1, 2, 5, 63, 64, 65, 130] {
                let s = sample_step(rule, i, &mut rng);
                assert!(contains(rule, &s), "{rule} {i}");
            }
        }
    }
}
