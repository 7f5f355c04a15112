use serde::Serialize;

use super::factor::{factor, is_prime, is_squarefree};
use super::kronecker::kronecker;
use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;

/// Discriminant of `Q(sqrt d)` for squarefree `d != 1`.
pub fn discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Prime data behind a Rédei matrix; row and column `k` belong to `primes[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedeiContext {
    pub d: i64,
    pub discriminant: i64,
    pub primes: Vec<u64>,
    /// Fundamental discriminant of the character attached to each prime:
    /// `q*` (`±q`, `= 1 mod 4`) for odd `q`, and one of `-4, 8, -8` for 2.
    pub characters: Vec<i64>,
    pub l_position: Option<usize>,
    pub two_position: Option<usize>,
    /// Odd primes `= 3 mod 4` other than `|l|`.
    pub kappa: usize,
}

impl RedeiContext {
    pub fn t(&self) -> usize {
        self.primes.len()
    }
}

fn star(q: u64) -> i64 {
    if q % 4 == 1 {
        q as i64
    } else {
        -(q as i64)
    }
}

/// Rédei matrix of `d` with primes ordered 2, then odd `q = 3 mod 4`, then
/// odd `q = 1 mod 4`, each group ascending.
pub fn redei_matrix(d: i64) -> Result<(F2Matrix, RedeiContext)> {
    redei_matrix_with(d, None)
}

/// As [`redei_matrix`], with `|l|` (when given) moved to the first row and
/// column and 2 to the second.
pub fn redei_matrix_with(d: i64, l: Option<i64>) -> Result<(F2Matrix, RedeiContext)> {
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    if d == 1 {
        return Err(Error::InvalidArgument("d = 1 has no Rédei matrix".into()));
    }
    let disc = discriminant(d);
    let odd: Vec<u64> = factor(d.unsigned_abs())
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| p != 2)
        .collect();
    let l_abs = match l {
        Some(l) => {
            let a = l.unsigned_abs();
            if !odd.contains(&a) {
                return Err(Error::InvalidArgument(format!("|l| = {a} does not divide {d}")));
            }
            Some(a)
        }
        None => None,
    };
    let mut primes = Vec::new();
    primes.extend(l_abs);
    let has_two = disc % 2 == 0;
    if has_two {
        primes.push(2);
    }
    let rest = odd.iter().copied().filter(|&q| Some(q) != l_abs);
    let (three, one): (Vec<u64>, Vec<u64>) = rest.partition(|q| q % 4 == 3);
    let kappa = three.len();
    primes.extend(three);
    primes.extend(one);

    let odd_product: i64 = odd.iter().map(|&q| star(q)).product();
    let characters: Vec<i64> = primes
        .iter()
        .map(|&p| {
            if p == 2 {
                // The 2-part of the discriminant: disc / prod q*. This is -4
                // for d = 3 mod 4, and 8 or -8 for even d (sign forced by the
                // product). The three cases are Q(sqrt -1), Q(sqrt 2) and
                // Q(sqrt -2).
                disc / odd_product
            } else {
                star(p)
            }
        })
        .collect();
    debug_assert_eq!(characters.iter().product::<i64>(), disc);

    let t = primes.len();
    let mut a = F2Matrix::from_fn(t, |i, j| {
        i != j && kronecker(characters[j - 1], primes[i - 1] as i64) == -1
    });
    for i in 1..=t {
        let off = (1..=t).filter(|&j| j != i && a.get(i, j)).count();
        a.set(i, i, off % 2 == 1);
    }
    let ctx = RedeiContext {
        d,
        discriminant: disc,
        two_position: primes.iter().position(|&p| p == 2),
        l_position: l_abs.map(|_| 0),
        primes,
        characters,
        kappa,
    };
    Ok((a, ctx))
}

/// Checks the reciprocity pattern of the Rédei matrix of `d`: for distinct
/// odd primes `p, q`, `A(p,q) + A(q,p) = 1` iff `p = q = 3 mod 4`.
pub fn validate_reciprocity(d: i64) -> Result<bool> {
    let (a, ctx) = redei_matrix(d)?;
    Ok(reciprocity_holds(&a, &ctx))
}

pub(crate) fn reciprocity_holds(a: &F2Matrix, ctx: &RedeiContext) -> bool {
    let t = ctx.t();
    (0..t).all(|i| {
        (0..t).all(|j| {
            let (p, q) = (ctx.primes[i], ctx.primes[j]);
            if i == j || p == 2 || q == 2 {
                return true;
            }
            let both = p % 4 == 3 && q % 4 == 3;
            (a.get(i + 1, j + 1) ^ a.get(j + 1, i + 1)) == both
        })
    })
}

/// Validates `|l|` as a prime `= 3 mod 4` dividing squarefree `d`.
pub(crate) fn check_l(d: i64, l: i64) -> Result<()> {
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let a = l.unsigned_abs();
    if !is_prime(a) {
        return Err(Error::InvalidArgument(format!("|l| = {a} is not prime")));
    }
    if a % 4 != 3 {
        return Err(Error::InvalidArgument(format!("|l| = {a} is not 3 mod 4")));
    }
    if d % (a as i64) != 0 {
        return Err(Error::InvalidArgument(format!("l = {l} does not divide d = {d}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d21() {
        let (a, ctx) = redei_matrix(21).unwrap();
        assert_eq!(ctx.primes, vec![3, 7]);
        assert_eq!(ctx.characters, vec![-3, -7]);
        // (-7 / 3) = (2 / 3) = -1 and (-3 / 7) = (4 / 7) = 1.
        assert_eq!(a, F2Matrix::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap());
        assert_eq!(a.corank(), 1);
        assert!(reciprocity_holds(&a, &ctx));
    }

    #[test]
    fn prime_discriminant_is_zero() {
        for d in [5i64, -3, -7, 13, -1, 2, -2] {
            let (a, _) = redei_matrix(d).unwrap();
            assert_eq!(a, F2Matrix::zero(1), "d={d}");
        }
    }

    #[test]
    fn two_adic_characters() {
        assert_eq!(redei_matrix(3).unwrap().1.characters, vec![-4, -3]);
        assert_eq!(redei_matrix(2).unwrap().1.characters, vec![8]);
        assert_eq!(redei_matrix(-2).unwrap().1.characters, vec![-8]);
        assert_eq!(redei_matrix(6).unwrap().1.characters, vec![-8, -3]);
        assert_eq!(redei_matrix(10).unwrap().1.characters, vec![8, 5]);
        assert_eq!(redei_matrix(-1).unwrap().1.characters, vec![-4]);
    }

    #[test]
    fn symmetric_pair_for_one_mod_four() {
        let (a, ctx) = redei_matrix(65).unwrap();
        assert_eq!(ctx.primes, vec![5, 13]);
        assert_eq!(a.get(1, 2), a.get(2, 1));
    }

    #[test]
    fn ordering_with_l() {
        let (_, ctx) = redei_matrix_with(-2 * 3 * 7 * 5, Some(-7)).unwrap();
        assert_eq!(ctx.primes, vec![7, 2, 3, 5]);
        assert_eq!(ctx.kappa, 1);
        assert_eq!(ctx.l_position, Some(0));
        assert_eq!(ctx.two_position, Some(1));
    }

    #[test]
    fn errors() {
        assert_eq!(redei_matrix(12), Err(Error::NotSquarefree(12)));
        assert!(redei_matrix(1).is_err());
        assert!(redei_matrix_with(21, Some(11)).is_err());
        assert!(check_l(21, 5).is_err());
        assert!(check_l(21, 7).is_ok());
        assert!(check_l(21, -3).is_ok());
    }
}
