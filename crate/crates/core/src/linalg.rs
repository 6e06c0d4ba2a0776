//! Gaussian elimination over an exact field, shared by the ℚ and K code paths.

use num_traits::{One, Zero};

use crate::rational::Rat;

/// Minimal exact-field interface needed by row reduction.
pub trait Scalar: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Only called with a nonzero divisor.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
}

impl Scalar for Rat {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: Scalar>(rows: &mut [Vec<T>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv_lead = rows[r][c].one_like().div(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv_lead);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&f.mul(p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : M x = 0}`; `zero` supplies the scalar type's zero
/// when the matrix has no rows.
pub fn kernel<T: Scalar>(rows: &[Vec<T>], ncols: usize, zero: &T) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.zero_like(); ncols];
            v[f] = zero.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m[r][f].neg();
            }
            v
        })
        .collect()
}

/// The unique solution of `M x = b`; `None` when there is none or many.
/// `M` may have more rows than columns.
pub fn solve<T: Scalar>(rows: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<T>> = rows
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().take(n).map(|r| r[n].clone()).collect())
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<T: Scalar>(rows: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = rows.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let one = rows[0][0].one_like();
    let zero = rows[0][0].zero_like();
    let mut aug: Vec<Vec<T>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3, &Rat::zero());
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let dot: Rat = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(Zero::is_zero(&dot));
            }
        }
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        let x = solve(&a, &[rat(3, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
