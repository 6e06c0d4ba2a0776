//! Hyperbolic matrices, eigen-directions over K and the cone decomposition
//! of ℝ⁴ cut out by the four eigen-directions.
//!
//! A continued fraction is stored through one K-vector `v = (1, α, β, γ)`;
//! the real direction l_i is the image of `v` under the embedding
//! `labeling[i]`. The eigen-coordinates of an integer point `p` are
//! `σ_{labeling[i]}(c(p))` for the single element `c(p) = Σ p_m b*_m`, where
//! `b*` is the trace-dual basis of `v`, so every sign decision is the sign of
//! one field element under one embedding.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exec::{box_point, box_size, Execution};
use crate::intlat::{IntMatrix, RationalMatrix};
use crate::linalg;
use crate::numfield::{make_field, FieldElement, FieldError, IntPolynomial, Labeling, NumberField};
use crate::rational::{ceil, floor, Int, Rat};

/// Scale of the fixed-point bounds used by the fast cone test.
const FIXED_BITS: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperbolicError {
    #[error("expected a 4x4 integer matrix")]
    NotSquare4,
    #[error("determinant is {0}, not ±1")]
    NotUnimodular(Int),
    #[error("characteristic polynomial is reducible: {0}")]
    Reducible(String),
    #[error("characteristic polynomial has {0} real roots, expected 4")]
    NotTotallyReal(usize),
    #[error("characteristic polynomial has a repeated root")]
    RepeatedEigenvalue,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfError {
    #[error(transparent)]
    NotHyperbolic(#[from] HyperbolicError),
    #[error("every kernel generator of A - θI has first coordinate 0")]
    NormalizationFailure,
    #[error("1, alpha, beta, gamma are linearly dependent over Q")]
    NotABasis,
    #[error("continued fractions need a quartic field")]
    NotQuartic,
    #[error("labeling must be a permutation of the 4 roots")]
    BadLabeling,
    #[error("elements belong to a different field")]
    FieldMismatch,
    #[error("the zero vector lies in no cone")]
    ZeroVector,
    #[error("point lies on a wall of the cone decomposition")]
    WallHit,
    #[error("transformed first direction has first coordinate 0")]
    RenormalizationFailure,
}

/// Characteristic polynomial det(xI − M) by Faddeev–LeVerrier.
pub fn charpoly(m: &IntMatrix) -> IntPolynomial {
    let n = m.nrows();
    let a = m.to_rational();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let ident = IntMatrix::identity(n).to_rational();
    let mut mk = RationalMatrix::new(vec![vec![Rat::zero(); n]; n]).unwrap();
    for k in 1..=n {
        let shifted: Vec<Vec<Rat>> = a
            .mul(&mk)
            .rows()
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, x)| x + &coeffs[n - k + 1] * &ident.rows()[i][j]).collect())
            .collect();
        mk = RationalMatrix::new(shifted).unwrap();
        let am = a.mul(&mk);
        let tr: Rat = (0..n).map(|i| am.rows()[i][i].clone()).sum();
        coeffs[n - k] = -tr / Rat::from_integer(Int::from(k));
    }
    IntPolynomial::new(coeffs.into_iter().map(|c| c.to_integer()).collect())
}

/// Companion matrix with rows `e2, e3, e4, (−a0, −a1, −a2, −a3)`, so that
/// `(1, θ, θ², θ³)` is an eigenvector for each root θ.
pub fn companion(p: &IntPolynomial) -> IntMatrix {
    let n = p.degree().expect("nonzero polynomial");
    let c = p.coeffs();
    let mut rows = vec![vec![Int::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate().take(n - 1) {
        row[i + 1] = Int::one();
    }
    for j in 0..n {
        rows[n - 1][j] = -&c[j];
    }
    IntMatrix::new(rows).unwrap()
}

/// A matrix certified hyperbolic, with its eigenvalue field.
#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicMatrix {
    pub matrix: IntMatrix,
    pub charpoly: IntPolynomial,
    pub irreducible: bool,
    pub totally_real: bool,
    pub squarefree: bool,
    #[serde(skip)]
    pub field: NumberField,
}

pub fn is_hyperbolic(a: &IntMatrix) -> Result<HyperbolicMatrix, HyperbolicError> {
    if a.nrows() != 4 || a.ncols() != 4 {
        return Err(HyperbolicError::NotSquare4);
    }
    let det = a.det();
    if !det.abs().is_one() {
        return Err(HyperbolicError::NotUnimodular(det));
    }
    let chi = charpoly(a);
    let field = match make_field(&chi) {
        Ok(f) => f,
        Err(FieldError::NotIrreducible(why)) => return Err(HyperbolicError::Reducible(why)),
        Err(FieldError::NotTotallyReal { real, .. }) => return Err(HyperbolicError::NotTotallyReal(real)),
        Err(e) => unreachable!("characteristic polynomial of a 4x4 matrix is monic quartic: {e}"),
    };
    let q = chi.to_rational();
    if q.gcd(&q.derivative()).degree() != Some(0) {
        return Err(HyperbolicError::RepeatedEigenvalue);
    }
    Ok(HyperbolicMatrix { matrix: a.clone(), charpoly: chi, irreducible: true, totally_real: true, squarefree: true, field })
}

/// Where a continued fraction came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CfSource {
    Matrix { matrix: IntMatrix },
    Coordinates { associated_matrix: Option<IntMatrix> },
}

/// Orthant of eigen-coordinates; `signs[i]` is the sign along l_{i+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(pub [i8; 4]);

impl Cone {
    /// Bit i set when the i-th sign is negative.
    pub fn index(&self) -> usize {
        (0..4).filter(|&i| self.0[i] < 0).map(|i| 1 << i).sum()
    }

    pub fn from_index(k: usize) -> Cone {
        let mut s = [1i8; 4];
        for (i, x) in s.iter_mut().enumerate() {
            if k >> i & 1 == 1 {
                *x = -1;
            }
        }
        Cone(s)
    }

    pub fn all() -> impl Iterator<Item = Cone> {
        (0..16).map(Cone::from_index)
    }

    pub fn neg(&self) -> Cone {
        Cone(self.0.map(|s| -s))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Cone {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let signs: Vec<i8> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(format!("bad cone sign {c:?}")),
            })
            .collect::<Result<_, _>>()?;
        let arr: [i8; 4] = signs.try_into().map_err(|_| format!("cone {s:?} needs 4 signs"))?;
        Ok(Cone(arr))
    }
}

impl Serialize for Cone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A 3-dimensional algebraic continued fraction in ℝ⁴.
#[derive(Clone, Debug)]
pub struct AlgebraicCF {
    field: NumberField,
    labeling: Labeling,
    basis: Vec<FieldElement>,
    source: CfSource,
    dual: Vec<FieldElement>,
    /// `dual_fixed[i][m]` brackets σ_{labeling[i]}(b*_m)·2^FIXED_BITS.
    dual_fixed: Vec<Vec<Option<(i128, i128)>>>,
}

impl PartialEq for AlgebraicCF {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.labeling == o.labeling && self.basis == o.basis
    }
}

impl AlgebraicCF {
    fn build(field: NumberField, labeling: Labeling, basis: Vec<FieldElement>, source: CfSource) -> Result<Self, CfError> {
        if field.degree() != 4 {
            return Err(CfError::NotQuartic);
        }
        if labeling.0.len() != 4 || Labeling::from_one_based(&labeling.one_based()).is_none() {
            return Err(CfError::BadLabeling);
        }
        if basis.iter().any(|b| *b.field() != field) {
            return Err(CfError::FieldMismatch);
        }
        let coords: Vec<Vec<Rat>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        if RationalMatrix::new(coords).unwrap().det().is_zero() {
            return Err(CfError::NotABasis);
        }
        let trace: Vec<Vec<Rat>> =
            (0..4).map(|k| (0..4).map(|m| (&basis[k] * &basis[m]).trace()).collect()).collect();
        let tinv = linalg::inverse(&trace).expect("trace form of a basis is nondegenerate");
        let dual: Vec<FieldElement> = (0..4)
            .map(|m| {
                (0..4).fold(field.zero(), |acc, k| &acc + &basis[k].scale(&tinv[k][m]))
            })
            .collect();
        let eps = Rat::new(Int::one(), Int::one() << (FIXED_BITS + 4));
        let scale = Rat::from_integer(Int::one() << FIXED_BITS);
        let dual_fixed = labeling
            .0
            .iter()
            .map(|&pos| {
                dual.iter()
                    .map(|b| {
                        let iv = b.embed_eval(pos, &eps);
                        let lo = floor(&(&iv.lo * &scale)).to_i128()?;
                        let hi = ceil(&(&iv.hi * &scale)).to_i128()?;
                        Some((lo, hi))
                    })
                    .collect()
            })
            .collect();
        Ok(AlgebraicCF { field, labeling, basis, source, dual, dual_fixed })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    /// `(1, α, β, γ)`.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.basis[1]
    }

    pub fn beta(&self) -> &FieldElement {
        &self.basis[2]
    }

    pub fn gamma(&self) -> &FieldElement {
        &self.basis[3]
    }

    pub fn source(&self) -> &CfSource {
        &self.source
    }

    pub fn matrix(&self) -> Option<&IntMatrix> {
        match &self.source {
            CfSource::Matrix { matrix } => Some(matrix),
            CfSource::Coordinates { associated_matrix } => associated_matrix.as_ref(),
        }
    }

    /// Root position of the embedding σ_{label+1}.
    pub fn embedding(&self, label: usize) -> usize {
        self.labeling.0[label]
    }

    /// Floating-point view of l_{label+1}, for reports only.
    pub fn direction_approx(&self, label: usize) -> [f64; 4] {
        let pos = self.embedding(label);
        std::array::from_fn(|k| self.basis[k].embed_approx(pos))
    }

    /// Same data with another labeling of the embeddings.
    pub fn relabeled(&self, labeling: Labeling) -> Result<AlgebraicCF, CfError> {
        AlgebraicCF::build(self.field.clone(), labeling, self.basis.clone(), self.source.clone())
    }

    /// `c(p)`: σ_{labeling[i]}(c(p)) is the coefficient of l_{i+1} in p.
    pub fn eigen_coordinate(&self, p: &[Int]) -> FieldElement {
        p.iter()
            .zip(&self.dual)
            .fold(self.field.zero(), |acc, (x, b)| &acc + &b.scale(&Rat::from_integer(x.clone())))
    }

    fn fast_sign(&self, label: usize, p: &[Int]) -> Option<i8> {
        let mut lo: i128 = 0;
        let mut hi: i128 = 0;
        for (x, b) in p.iter().zip(&self.dual_fixed[label]) {
            let (blo, bhi) = (*b)?;
            let x = x.to_i128()?;
            let (a, c) = (x.checked_mul(blo)?, x.checked_mul(bhi)?);
            lo = lo.checked_add(a.min(c))?;
            hi = hi.checked_add(a.max(c))?;
        }
        if lo > 0 {
            Some(1)
        } else if hi < 0 {
            Some(-1)
        } else {
            None
        }
    }

    /// Exact sign of the l_{label+1} eigen-coordinate of `p`.
    pub fn coordinate_sign(&self, label: usize, p: &[Int]) -> i8 {
        if let Some(s) = self.fast_sign(label, p) {
            return s;
        }
        match self.eigen_coordinate(p).embed_sign(self.embedding(label)) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn cone_locate(&self, p: &[Int]) -> Result<Cone, CfError> {
        if p.iter().all(Zero::is_zero) {
            return Err(CfError::ZeroVector);
        }
        let mut signs = [0i8; 4];
        for (i, s) in signs.iter_mut().enumerate() {
            *s = self.coordinate_sign(i, p);
            if *s == 0 {
                return Err(CfError::WallHit);
            }
        }
        Ok(Cone(signs))
    }

    pub fn cone_locate_i64(&self, p: &[i64]) -> Result<Cone, CfError> {
        let v: Vec<Int> = p.iter().map(|&x| Int::from(x)).collect();
        self.cone_locate(&v)
    }

    /// Sign of ⟨n, l_{label+1}⟩ for an integer covector `n`.
    pub fn covector_sign(&self, label: usize, n: &[Int]) -> i8 {
        let e = n
            .iter()
            .zip(&self.basis)
            .fold(self.field.zero(), |acc, (x, b)| &acc + &b.scale(&Rat::from_integer(x.clone())));
        match e.embed_sign(self.embedding(label)) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// The continued fraction of the directions `X·l_i`, renormalised to first coordinate 1.
    pub fn transformed(&self, x: &IntMatrix) -> Result<AlgebraicCF, CfError> {
        let w = apply_int_matrix(x, &self.basis);
        if w[0].is_zero() {
            return Err(CfError::RenormalizationFailure);
        }
        let inv = w[0].inv().expect("nonzero");
        let basis: Vec<FieldElement> = w.iter().map(|c| c * &inv).collect();
        let source = match (&self.source, x.inverse()) {
            (CfSource::Matrix { matrix }, Some(xi)) => CfSource::Matrix { matrix: x.mul(matrix).mul(&xi) },
            (CfSource::Coordinates { associated_matrix: Some(a) }, Some(xi)) => {
                CfSource::Coordinates { associated_matrix: Some(x.mul(a).mul(&xi)) }
            }
            _ => CfSource::Coordinates { associated_matrix: None },
        };
        AlgebraicCF::build(self.field.clone(), self.labeling.clone(), basis, source)
    }

    /// Multiplication-by-`v_k` matrices in the basis `v`, `mult[k][j][i]` is
    /// the `v_i`-coefficient of `v_k·v_j`.
    fn mult_tables(&self) -> Vec<Vec<Vec<Rat>>> {
        let b: Vec<Vec<Rat>> = (0..4).map(|i| self.basis[i].coords().to_vec()).collect();
        // Coordinates of x in basis v solve Bᵀ c = x.
        let bt: Vec<Vec<Rat>> = (0..4).map(|i| (0..4).map(|j| b[j][i].clone()).collect()).collect();
        (0..4)
            .map(|k| {
                (0..4)
                    .map(|j| {
                        let prod = &self.basis[k] * &self.basis[j];
                        linalg::solve(&bt, prod.coords()).expect("basis")
                    })
                    .collect()
            })
            .collect()
    }

    /// Bounded search for a hyperbolic `A` with `A·v = u·v`, over
    /// `u = Σ c_k v_k` with integer `c` of height at most `height`, by
    /// increasing height and then lexicographically.
    pub fn find_associated_matrix(&self, height: i64, exec: Execution) -> Option<IntMatrix> {
        let mult = self.mult_tables();
        let zero = Rat::zero();
        for h in 1..=height {
            let found = exec.find_map_first(box_size(4, h), |idx| {
                let c = box_point(idx, 4, h);
                if c.iter().map(|x| x.abs()).max() != Some(h) {
                    return None;
                }
                // A_{jk}: v_k-coefficient of u·v_j.
                let mut rows = vec![vec![zero.clone(); 4]; 4];
                for (k, ck) in c.iter().enumerate() {
                    if *ck == 0 {
                        continue;
                    }
                    let ck = Rat::from_integer(Int::from(*ck));
                    for (j, row) in rows.iter_mut().enumerate() {
                        for (i, x) in row.iter_mut().enumerate() {
                            *x += &ck * &mult[k][j][i];
                        }
                    }
                }
                let a = RationalMatrix::new(rows).unwrap().to_integer()?;
                is_hyperbolic(&a).ok().map(|h| h.matrix)
            });
            if found.is_some() {
                return found;
            }
        }
        None
    }

    pub fn with_associated_matrix(mut self, a: Option<IntMatrix>) -> Self {
        if let CfSource::Coordinates { associated_matrix } = &mut self.source {
            *associated_matrix = a;
        }
        self
    }
}

/// `X·w` for a K-vector `w`.
pub fn apply_int_matrix(x: &IntMatrix, w: &[FieldElement]) -> Vec<FieldElement> {
    let field = w[0].field().clone();
    x.rows()
        .iter()
        .map(|r| {
            r.iter().zip(w).fold(field.zero(), |acc, (a, b)| {
                if a.is_zero() {
                    acc
                } else {
                    &acc + &b.scale(&Rat::from_integer(a.clone()))
                }
            })
        })
        .collect()
}

/// Default labeling for a fresh continued fraction: σ₁ at the largest root,
/// adopting the embedding-package witness when one exists.
pub fn default_labeling(field: &NumberField) -> Labeling {
    let fallback = Labeling(vec![3, 2, 1, 0]);
    field.embedding_structure(&fallback).witness.unwrap_or(fallback)
}

/// Eigen-directions of a hyperbolic matrix over its eigenvalue field.
pub fn eigen_data(hm: &HyperbolicMatrix, labeling: Option<Labeling>) -> Result<AlgebraicCF, CfError> {
    let k = &hm.field;
    let theta = k.theta();
    let rows: Vec<Vec<FieldElement>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let a = k.from_rat(Rat::from_integer(hm.matrix.get(i, j).clone()));
                    if i == j {
                        &a - &theta
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();
    let ker = linalg::kernel(&rows, 4, &k.zero());
    let v = ker.into_iter().find(|v| !v[0].is_zero()).ok_or(CfError::NormalizationFailure)?;
    let inv = v[0].inv().expect("nonzero");
    let basis: Vec<FieldElement> = v.iter().map(|c| c * &inv).collect();
    let labeling = labeling.unwrap_or_else(|| default_labeling(k));
    AlgebraicCF::build(k.clone(), labeling, basis, CfSource::Matrix { matrix: hm.matrix.clone() })
}

/// Continued fraction with `l_1 = (1, α, β, γ)`.
pub fn cf_from_coords(
    field: &NumberField,
    labeling: Labeling,
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
) -> Result<AlgebraicCF, CfError> {
    let basis = vec![field.one(), alpha, beta, gamma];
    AlgebraicCF::build(field.clone(), labeling, basis, CfSource::Coordinates { associated_matrix: None })
}

/// Searches monic quartics `x⁴ + a3 x³ + a2 x² + a1 x + a0`, `a0 ∈ {1, −1}`,
/// by increasing height of `(a3, a2, a1)` then lexicographically (a0 = 1
/// first), returning the first that is irreducible and totally real.
pub fn first_unit_quartic(max_height: i64) -> Option<IntPolynomial> {
    for h in 1..=max_height {
        for idx in 0..box_size(3, h) {
            let c = box_point(idx, 3, h);
            if c.iter().map(|x| x.abs()).max() != Some(h) {
                continue;
            }
            for a0 in [1, -1] {
                let p = IntPolynomial::from_i64(&[a0, c[2], c[1], c[0], 1]);
                if make_field(&p).is_ok() {
                    return Some(p);
                }
            }
        }
    }
    None
}

/// Fixed unimodular conjugator used to build the canonical test matrix.
pub fn canonical_conjugator() -> IntMatrix {
    IntMatrix::from_i64(&[[2, 1, 0, 1], [1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 1]])
}

/// The repository's canonical hyperbolic test matrix `U·C(p)·U⁻¹`, with `p`
/// the first hit of [`first_unit_quartic`].
pub fn canonical_test_matrix() -> IntMatrix {
    let p = IntPolynomial::from_i64(&[1, 3, -3, -3, 1]);
    let u = canonical_conjugator();
    u.mul(&companion(&p)).mul(&u.inverse().expect("unimodular conjugator"))
}

/// Polynomial evaluation `p(A)` for a square integer matrix.
pub fn poly_of_matrix(coeffs: &[Int], a: &IntMatrix) -> IntMatrix {
    let n = a.nrows();
    let mut acc = IntMatrix::new(vec![vec![Int::zero(); n]; n]).unwrap();
    for c in coeffs.iter().rev() {
        let scaled: Vec<Vec<Int>> = acc
            .mul(a)
            .rows()
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { x + c } else { x.clone() }).collect())
            .collect();
        acc = IntMatrix::new(scaled).unwrap();
    }
    acc
}
