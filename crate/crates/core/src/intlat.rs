//! Exact integer and rational matrices: Bareiss determinants, column-style
//! Hermite normal form, integer kernels and ℤⁿ-basis tests.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::rational::{is_integral, Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntLatError {
    #[error("source vectors are linearly dependent")]
    SingularSources,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// Fraction-free Gaussian elimination determinant of a square integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Integer matrix stored by rows. Vectors are columns: `M·v` acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix {
    #[serde(with = "crate::json::int_mat")]
    rows: Vec<Vec<Int>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<Int>>) -> Result<Self, IntLatError> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(IntLatError::Shape("ragged rows".into()));
        }
        Ok(IntMatrix { rows })
    }

    /// Panics on ragged input; intended for literals.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::new(rows.iter().map(|r| r.as_ref().iter().map(|&x| Int::from(x)).collect()).collect())
            .expect("ragged matrix literal")
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
                .collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<Int>]) -> Self {
        let n = cols.first().map_or(0, |c| c.len());
        IntMatrix { rows: (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect() }
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.ncols()).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.rows)
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols(), o.nrows(), "dimension mismatch");
        IntMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| {
                    (0..o.ncols())
                        .map(|j| r.iter().zip(&o.rows).map(|(a, orow)| a * &orow[j]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    pub fn det(&self) -> Int {
        assert_eq!(self.nrows(), self.ncols(), "determinant of non-square matrix");
        bareiss_det(self.rows.clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.nrows() == self.ncols() && self.det().abs().is_one()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect(),
        }
    }

    /// Inverse over ℤ, present exactly when the matrix is unimodular.
    pub fn inverse(&self) -> Option<IntMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        self.to_rational().inverse()?.to_integer()
    }

    /// Largest absolute entry.
    pub fn height(&self) -> Int {
        self.rows.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.nrows())
    }
}

/// Rational matrix stored by rows; columns are vectors.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalMatrix {
    #[serde(with = "crate::json::rat_mat")]
    rows: Vec<Vec<Rat>>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Result<Self, IntLatError> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(IntLatError::Shape("ragged rows".into()));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> Self {
        let n = cols.first().map_or(0, |c| c.len());
        RationalMatrix { rows: (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect() }
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.ncols(), o.nrows(), "dimension mismatch");
        RationalMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| {
                    (0..o.ncols())
                        .map(|j| r.iter().zip(&o.rows).map(|(a, orow)| a * &orow[j]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.nrows(), self.ncols(), "determinant of non-square matrix");
        // Clear denominators row by row and use the integer determinant.
        let mut scale = Rat::one();
        let rows: Vec<Vec<Int>> = self
            .rows
            .iter()
            .map(|r| {
                let l = crate::rational::lcm_of_denominators(r);
                scale *= Rat::from_integer(l.clone());
                r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        Rat::from_integer(bareiss_det(rows)) / scale
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        linalg::inverse(&self.rows).map(|rows| RationalMatrix { rows })
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(is_integral)
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| IntMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect(),
        })
    }

    /// True iff all entries are integers and the determinant is ±1.
    pub fn is_unimodular(&self) -> bool {
        self.nrows() == self.ncols() && self.to_integer().is_some_and(|m| m.is_unimodular())
    }
}

/// Column-style Hermite normal form: returns `(H, U)` with `H = M·U`, `U`
/// unimodular, `H` lower echelon with positive pivots and every entry left of
/// a pivot reduced into `[0, pivot)`. Zero columns of `H` come last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut h = m.columns();
    let mut u = IntMatrix::identity(nc).columns();
    let mut c = 0;
    for i in 0..nr {
        if c == nc {
            break;
        }
        // Euclid on row i across columns c.. until only column c is nonzero.
        loop {
            let nz: Vec<usize> = (c..nc).filter(|&j| !h[j][i].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| h[j][i].abs()).unwrap();
            swap_cols(&mut h, &mut u, c, p);
            if nz.len() == 1 {
                break;
            }
            for j in c + 1..nc {
                if h[j][i].is_zero() {
                    continue;
                }
                let q = h[j][i].div_floor(&h[c][i]);
                axpy_col(&mut h, &mut u, j, c, &q);
            }
        }
        if h[c][i].is_zero() {
            continue;
        }
        if h[c][i].is_negative() {
            for x in h[c].iter_mut().chain(u[c].iter_mut()) {
                *x = -&*x;
            }
        }
        for j in 0..c {
            let q = h[j][i].div_floor(&h[c][i]);
            if !q.is_zero() {
                axpy_col(&mut h, &mut u, j, c, &q);
            }
        }
        c += 1;
    }
    (IntMatrix::from_columns(&h), IntMatrix::from_columns(&u))
}

fn swap_cols(h: &mut [Vec<Int>], u: &mut [Vec<Int>], a: usize, b: usize) {
    h.swap(a, b);
    u.swap(a, b);
}

/// col_dst -= q · col_src in both H and U.
fn axpy_col(h: &mut [Vec<Int>], u: &mut [Vec<Int>], dst: usize, src: usize, q: &Int) {
    for mat in [h, u] {
        let s = mat[src].clone();
        for (x, y) in mat[dst].iter_mut().zip(&s) {
            *x -= q * y;
        }
    }
}

/// ℤ-basis of the integer kernel `{x ∈ ℤⁿ : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let (h, u) = hnf(m);
    (0..h.ncols())
        .filter(|&j| h.col(j).iter().all(Zero::is_zero))
        .map(|j| u.col(j))
        .collect()
}

/// Greedy pairwise size reduction of a lattice basis, shortest vectors first.
pub fn size_reduce(basis: &mut [Vec<Int>]) {
    let norm = |v: &[Int]| -> Int { v.iter().map(|x| x * x).sum() };
    loop {
        basis.sort_by_key(|v| norm(v));
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = norm(&basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let dot: Int = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                let q = Rat::new(dot, nj).round().to_integer();
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<Int> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - &q * b).collect();
                if norm(&cand) < norm(&basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// True iff the vectors are integral and form a basis of ℤⁿ.
pub fn is_z4_basis(vs: &[Vec<Rat>]) -> bool {
    let n = vs.len();
    if vs.iter().any(|v| v.len() != n) {
        return false;
    }
    RationalMatrix::from_columns(vs).is_unimodular()
}

/// The unimodular `X` with `X·sources[i] = targets[i]`, if it exists.
pub fn solve_unimodular_map(sources: &[Vec<Rat>], targets: &[Vec<Rat>]) -> Result<Option<IntMatrix>, IntLatError> {
    if sources.len() != targets.len() {
        return Err(IntLatError::Shape("sources and targets differ in count".into()));
    }
    let s = RationalMatrix::from_columns(sources);
    let t = RationalMatrix::from_columns(targets);
    if s.nrows() != s.ncols() {
        return Err(IntLatError::Shape("sources must be square".into()));
    }
    let s_inv = s.inverse().ok_or(IntLatError::SingularSources)?;
    let x = t.mul(&s_inv);
    Ok(x.to_integer().filter(IntMatrix::is_unimodular))
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn determinants() {
        let m = IntMatrix::from_i64(&[[2, 0, 1], [1, 3, 2], [1, 1, 2]]);
        assert_eq!(m.det(), Int::from(6));
        assert_eq!(IntMatrix::from_i64(&[[0, 1], [1, 0]]).det(), Int::from(-1));
        assert_eq!(IntMatrix::from_i64(&[[1, 2], [2, 4]]).det(), Int::from(0));
    }

    #[test]
    fn hnf_of_canonical_inputs() {
        let id = IntMatrix::identity(4);
        assert_eq!(hnf(&id), (id.clone(), id.clone()));
        let d = IntMatrix::from_i64(&[[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(hnf(&d), (d.clone(), id));
    }

    #[test]
    fn hnf_reduces_and_is_idempotent() {
        let m = IntMatrix::from_i64(&[[4, 6, 2], [3, -1, 5], [0, 2, 8]]);
        let (h, u) = hnf(&m);
        assert_eq!(m.mul(&u), h);
        assert!(u.is_unimodular());
        for i in 0..3 {
            assert!(h.get(i, i).is_positive());
            for j in i + 1..3 {
                assert!(h.get(i, j).is_zero());
            }
            for j in 0..i {
                assert!(!h.get(i, j).is_negative() && h.get(i, j) < h.get(i, i));
            }
        }
        let (h2, u2) = hnf(&h);
        assert_eq!(h2, h);
        assert!(u2.is_identity());
    }

    #[test]
    fn kernel_basis() {
        let m = IntMatrix::from_i64(&[[2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // The kernel is saturated: (1, 1, -1) must be an integer combination.
        let b = IntMatrix::from_columns(&k);
        let probe = int_vec(&[1, 1, -1]);
        let aug = IntMatrix::from_columns(&[k[0].clone(), k[1].clone(), probe]);
        assert!(aug.det().is_zero());
        assert_eq!(b.ncols(), 2);
    }

    #[test]
    fn basis_tests() {
        let e: Vec<Vec<Rat>> = (0..4).map(|i| rv(&[(i == 0) as i64, (i == 1) as i64, (i == 2) as i64, (i == 3) as i64])).collect();
        assert!(is_z4_basis(&e));
        let mut half = e.clone();
        half[1] = vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)];
        assert!(!is_z4_basis(&half));
        let x1 = vec![rv(&[1, -1, 0, 0]), rv(&[1, 0, 0, 1]), rv(&[1, 0, 1, -1]), rv(&[1, 0, 0, 0])];
        assert!(is_z4_basis(&x1));
    }

    #[test]
    fn unimodular_maps() {
        let e: Vec<Vec<Rat>> = IntMatrix::identity(4).columns().iter().map(|c| rat_vec(c)).collect();
        assert!(solve_unimodular_map(&e, &e).unwrap().unwrap().is_identity());
        let mut t = e.clone();
        t[0] = rv(&[2, 0, 0, 0]);
        assert_eq!(solve_unimodular_map(&e, &t), Ok(None));
        let mut sing = e.clone();
        sing[3] = sing[2].clone();
        assert_eq!(solve_unimodular_map(&sing, &e), Err(IntLatError::SingularSources));
    }
}
