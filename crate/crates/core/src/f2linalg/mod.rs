//! Exact linear algebra over F2: ranks, images, kernels and the row-column
//! extension `A(v, w, c)` together with its corank-transition classification.

mod elim;
mod matrix;
mod tracker;
mod vector;

pub use matrix::{F2Matrix, TransitionClass};
pub use tracker::RankTracker;
pub use vector::F2Vector;

pub(crate) use elim::{rref, solution_dim, solve};

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> F2Matrix {
        F2Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn v(bits: &[u8]) -> F2Vector {
        F2Vector::from_bits(bits)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(F2Matrix::zero(3).rank(), 0);
        assert_eq!(F2Matrix::zero(3).corank(), 3);
        assert_eq!(F2Matrix::identity(4).rank(), 4);
        assert_eq!(F2Matrix::identity(4).corank(), 0);
        let ones = m(&[&[1, 1], &[1, 1]]);
        assert_eq!((ones.rank(), ones.corank()), (1, 1));
        assert_eq!(F2Matrix::empty().rank(), 0);
        assert_eq!(F2Matrix::empty().corank(), 0);
    }

    #[test]
    fn matvec_examples() {
        let x = v(&[1, 0, 1, 1]);
        assert_eq!(F2Matrix::identity(4).matvec(&x).unwrap(), x);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.matvec(&v(&[1, 0])).unwrap(), v(&[0, 1]));
        assert!(swap.matvec(&v(&[1])).is_err());
    }

    #[test]
    fn image_examples() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(a.in_image(&F2Vector::zeros(2)));
        assert!(!F2Matrix::zero(2).in_image(&v(&[1, 0])));
        assert!(a.in_image(&v(&[1, 1])));
        assert!(!a.in_image(&v(&[1, 0])));
    }

    #[test]
    fn pairing_examples() {
        let id = F2Matrix::identity(3);
        let (x, y) = (v(&[1, 1, 0]), v(&[0, 1, 1]));
        assert_eq!(id.pairing(&x, &y).unwrap(), x.inner(&y));
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(a.pairing(&v(&[1, 1]), &v(&[1, 1])).unwrap());
        assert!(F2Matrix::identity(1).pairing(&v(&[1]), &v(&[1])).unwrap());
        assert!(matches!(
            a.pairing(&v(&[1, 0]), &v(&[1, 1])),
            Err(crate::Error::PairingUndefined(_))
        ));
        assert!(matches!(
            a.pairing(&v(&[1, 1]), &v(&[0, 1])),
            Err(crate::Error::PairingUndefined(_))
        ));
    }

    #[test]
    fn extend_examples() {
        let one = F2Matrix::empty().extend(&v(&[]), &v(&[]), true).unwrap();
        assert_eq!(one, m(&[&[1]]));
        let e = F2Matrix::identity(2)
            .extend(&v(&[0, 0]), &v(&[0, 0]), false)
            .unwrap();
        assert_eq!(e.n(), 3);
        assert_eq!(e.corank(), 1);
        let e = m(&[&[0]]).extend(&v(&[1]), &v(&[1]), false).unwrap();
        assert_eq!(e, m(&[&[0, 1], &[1, 0]]));
        assert_eq!(e.corank(), 0);
        assert!(F2Matrix::identity(2)
            .extend(&v(&[0]), &v(&[0, 0]), false)
            .is_err());
    }

    #[test]
    fn extend_places_row_and_column() {
        let a = m(&[&[0, 0], &[0, 0]]);
        let e = a.extend(&v(&[1, 0]), &v(&[0, 1]), true).unwrap();
        // v is the last row, w the last column.
        assert!(e.get(3, 1) && !e.get(3, 2));
        assert!(!e.get(1, 3) && e.get(2, 3));
        assert!(e.get(3, 3));
    }

    #[test]
    fn classify_examples() {
        use TransitionClass::*;
        assert_eq!(m(&[&[0]]).classify_transition(&v(&[1]), &v(&[1]), false), Down);
        assert_eq!(m(&[&[1]]).classify_transition(&v(&[1]), &v(&[1]), true), Up);
        assert_eq!(m(&[&[1]]).classify_transition(&v(&[1]), &v(&[1]), false), Same);
        // Off-diagonal case where the row/column roles matter.
        let a = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(a.classify_transition(&v(&[0, 1]), &v(&[0, 0]), false), Up);
        assert_eq!(a.classify_transition(&v(&[1, 0]), &v(&[0, 0]), false), Same);
    }

    #[test]
    fn kernel_intersection_examples() {
        assert!(F2Matrix::identity(3).kernel_intersection_trivial());
        assert!(!F2Matrix::zero(2).kernel_intersection_trivial());
        // ker = span{e1}, ker^T = span{e2}: intersection trivial.
        let nil = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(nil.kernel_basis(), vec![v(&[1, 0])]);
        assert_eq!(nil.left_kernel_basis(), vec![v(&[0, 1])]);
        assert!(nil.kernel_intersection_trivial());
        assert!(nil.images_span_full());
        assert!(F2Matrix::empty().kernel_intersection_trivial());
    }

    #[test]
    fn transpose_round_trip() {
        let a = F2Matrix::from_fn(70, |i, j| (i * 7 + j * 3) % 5 == 0);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().get(3, 9), a.get(9, 3));
    }
}
