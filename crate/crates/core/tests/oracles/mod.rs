//! Independent test oracles. Nothing here calls into the library's hull,
//! lattice or field code.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Cofactor-expansion determinant of a small integer matrix.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i128(&minor)
        })
        .sum()
}

/// Whether `p` is a convex combination of `others`, decided by phase-one
/// simplex with fraction-free integer pivoting and Bland's rule.
pub fn in_convex_hull(p: &[i64; 4], others: &[[i64; 4]]) -> bool {
    let m = others.len();
    if m == 0 {
        return false;
    }
    let rows = 5;
    let cols = m + rows + 1;
    let rhs = cols - 1;
    let mut t = vec![vec![0i128; cols]; rows + 1];
    for r in 0..rows {
        let b = if r < 4 { p[r] as i128 } else { 1 };
        let sign = if b < 0 { -1 } else { 1 };
        for (j, q) in others.iter().enumerate() {
            let a = if r < 4 { q[r] as i128 } else { 1 };
            t[r][j] = sign * a;
        }
        t[r][m + r] = 1;
        t[r][rhs] = sign * b;
    }
    // Phase-one objective: minimise the sum of artificials.
    for j in 0..cols {
        if (m..m + rows).contains(&j) {
            continue;
        }
        t[rows][j] = -(0..rows).map(|r| t[r][j]).sum::<i128>();
    }
    let mut basis: Vec<usize> = (m..m + rows).collect();
    let mut d: i128 = 1;
    loop {
        let Some(enter) = (0..rhs).find(|&j| t[rows][j] < 0) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for r in 0..rows {
            if t[r][enter] <= 0 {
                continue;
            }
            leave = Some(match leave {
                None => r,
                Some(l) => {
                    let lhs = t[r][rhs] * t[l][enter];
                    let rhs_ = t[l][rhs] * t[r][enter];
                    if lhs < rhs_ || (lhs == rhs_ && basis[r] < basis[l]) {
                        r
                    } else {
                        l
                    }
                }
            });
        }
        let Some(pr) = leave else {
            unreachable!("phase one is bounded below by zero");
        };
        let piv = t[pr][enter];
        for r in 0..=rows {
            if r == pr {
                continue;
            }
            let factor = t[r][enter];
            for j in 0..cols {
                let v = piv * t[r][j] - factor * t[pr][j];
                debug_assert_eq!(v % d, 0);
                t[r][j] = v / d;
            }
        }
        d = piv;
        basis[pr] = enter;
    }
    t[rows][rhs] == 0
}

/// Extreme points of a finite point set, in input order.
pub fn extreme_points(points: &[[i64; 4]]) -> Vec<[i64; 4]> {
    (0..points.len())
        .filter(|&i| {
            let others: Vec<[i64; 4]> =
                points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| *q).collect();
            !in_convex_hull(&points[i], &others)
        })
        .map(|i| points[i])
        .collect()
}

/// Rank of an integer point set's differences from the first point.
pub fn affine_rank(points: &[[i64; 4]]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|q| (0..4).map(|k| BigRational::from_integer((q[k] - points[0][k]).into())).collect())
        .collect();
    let mut rank = 0;
    for c in 0..4 {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                for k in 0..4 {
                    let v = &rows[rank][k] * &f;
                    rows[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Linear forms over the formal symbols `(1, a, a', b)` with rational
/// coefficients, used to check matrix identities for a class instance
/// without choosing a field.
pub type Form = [BigRational; 4];

pub fn form(c: [BigRational; 4]) -> Form {
    c
}

pub fn form_add(x: &Form, y: &Form) -> Form {
    std::array::from_fn(|k| &x[k] + &y[k])
}

pub fn form_scale(x: &Form, s: &BigRational) -> Form {
    std::array::from_fn(|k| &x[k] * s)
}

pub fn form_is_zero(x: &Form) -> bool {
    x.iter().all(|c| c.is_zero())
}

pub fn abs_max(xs: &[BigRational]) -> BigRational {
    xs.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}
