//! Totally real number fields ℚ(θ) of degree 2 to 4 with certified real embeddings.
//!
//! Real roots of the minimal polynomial are stored in ascending order; an
//! embedding is addressed by its 0-based position in that list. Code that
//! needs the σ₁…σ₄ numbering of a continued fraction carries a [`Labeling`].

pub mod poly;
pub mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use poly::{discriminant, rational_roots, resultant, sturm_count, IntPolynomial, QPoly};
pub use roots::{isolate_roots, refine_bits, RealRoot, RootError};

use crate::linalg;
use crate::rational::{fmt_rat, is_integral, rat_int, to_f64, Int, Interval, Rat};

/// Bits of precision the stored root intervals are refined to at construction.
const STORED_ROOT_BITS: u32 = 80;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("field degree must be 2, 3 or 4, got {0}")]
    BadDegree(usize),
    #[error("polynomial is reducible over Q: {0}")]
    NotIrreducible(String),
    #[error("polynomial has {real} real roots but degree {degree}")]
    NotTotallyReal { real: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
}

struct Inner {
    minpoly: IntPolynomial,
    modulus: QPoly,
    degree: usize,
    roots: Vec<RealRoot>,
    disc: Int,
    /// Coordinates of θ^k for k < 2·degree − 1.
    powers: Vec<Vec<Rat>>,
    automorphisms: OnceLock<Vec<Automorphism>>,
}

/// Cheap-to-clone handle on an immutable totally real field.
#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.minpoly == other.0.minpoly
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.0.minpoly)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldLiteral {
    minpoly: IntPolynomial,
}

impl Serialize for NumberField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldLiteral { minpoly: self.0.minpoly.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumberField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let lit = FieldLiteral::deserialize(d)?;
        make_field(&lit.minpoly).map_err(serde::de::Error::custom)
    }
}

/// Validates `minpoly` and builds the field with isolated, ordered real roots.
pub fn make_field(minpoly: &IntPolynomial) -> Result<NumberField, FieldError> {
    let degree = minpoly.degree().unwrap_or(0);
    if !minpoly.is_monic() {
        return Err(FieldError::NotMonic);
    }
    if !(2..=4).contains(&degree) {
        return Err(FieldError::BadDegree(degree));
    }
    if let Some(r) = rational_roots(minpoly).first() {
        return Err(FieldError::NotIrreducible(format!("rational root {r}")));
    }
    if degree == 4 {
        if let Some((a, b)) = poly::quartic_quadratic_split(minpoly) {
            let q = |c: &[Int; 2]| IntPolynomial::new(vec![c[0].clone(), c[1].clone(), Int::one()]);
            return Err(FieldError::NotIrreducible(format!("({}) * ({})", q(&a), q(&b))));
        }
    }
    let real = sturm_count(minpoly);
    if real != degree {
        return Err(FieldError::NotTotallyReal { real, degree });
    }
    let roots: Vec<RealRoot> = isolate_roots(minpoly)
        .expect("nonzero polynomial")
        .iter()
        .map(|r| refine_bits(r, STORED_ROOT_BITS))
        .collect();
    debug_assert_eq!(roots.len(), degree);
    let modulus = minpoly.to_rational();
    let mut powers = Vec::with_capacity(2 * degree - 1);
    let mut cur = QPoly::constant(Rat::one());
    for _ in 0..(2 * degree - 1) {
        powers.push(pad(cur.coeffs(), degree));
        cur = cur.mul(&QPoly::x()).rem(&modulus);
    }
    Ok(NumberField(Arc::new(Inner {
        minpoly: minpoly.clone(),
        modulus,
        degree,
        roots,
        disc: discriminant(minpoly).abs(),
        powers,
        automorphisms: OnceLock::new(),
    })))
}

fn pad(c: &[Rat], n: usize) -> Vec<Rat> {
    let mut v = c.to_vec();
    v.resize(n, Rat::zero());
    v
}

impl NumberField {
    pub fn minpoly(&self) -> &IntPolynomial {
        &self.0.minpoly
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Absolute discriminant of the minimal polynomial.
    pub fn poly_discriminant(&self) -> &Int {
        &self.0.disc
    }

    /// Isolating intervals of the real roots, ascending.
    pub fn roots(&self) -> &[RealRoot] {
        &self.0.roots
    }

    /// Root intervals refined to width at most 2^-bits.
    pub fn root_intervals(&self, bits: u32) -> Vec<Interval> {
        self.0
            .roots
            .iter()
            .map(|r| if bits <= STORED_ROOT_BITS { r.interval.clone() } else { refine_bits(r, bits).interval })
            .collect()
    }

    pub fn root_approx(&self, pos: usize) -> f64 {
        to_f64(&self.0.roots[pos].interval.midpoint())
    }

    pub fn zero(&self) -> FieldElement {
        self.from_rat(Rat::zero())
    }

    pub fn one(&self) -> FieldElement {
        self.from_rat(Rat::one())
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rat(rat_int(n))
    }

    pub fn from_rat(&self, r: Rat) -> FieldElement {
        let mut coords = vec![Rat::zero(); self.degree()];
        coords[0] = r;
        FieldElement { field: self.clone(), coords }
    }

    /// The generator θ.
    pub fn theta(&self) -> FieldElement {
        self.element(self.0.powers[1].clone()).unwrap()
    }

    pub fn element(&self, coords: Vec<Rat>) -> Result<FieldElement, ArithError> {
        if coords.len() != self.degree() {
            return Err(ArithError::WrongLength { expected: self.degree(), got: coords.len() });
        }
        Ok(FieldElement { field: self.clone(), coords })
    }

    pub fn element_from_literal(&self, lit: &ElementLiteral) -> Result<FieldElement, ArithError> {
        self.element(lit.coords.clone())
    }

    fn reduce_product(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = self.degree();
        let mut full = vec![Rat::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] += x * y;
                }
            }
        }
        let mut out = full[..n].to_vec();
        for (k, c) in full.iter().enumerate().skip(n) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.0.powers[k]) {
                *o += c * p;
            }
        }
        out
    }

    /// All automorphisms of the field, identity first.
    pub fn automorphisms(&self) -> &[Automorphism] {
        self.0.automorphisms.get_or_init(|| {
            (0..self.degree()).filter_map(|t| conjugate_from_base(self, t)).collect()
        })
    }

    /// The element `u` with `σ_base(u) = σ_target(θ)`, when that root lies in
    /// `σ_base(K)`. The returned automorphism θ ↦ u extends the embedding map.
    pub fn find_conjugate(&self, base: usize, target: usize) -> Option<Automorphism> {
        self.automorphisms().iter().find(|a| a.root_map[base] == target).cloned()
    }

    /// Checks the embedding package σ₃(K)=K, σ₃²=id, σ₄=σ₂σ₃, σ₄(K)=σ₂(K)
    /// for `labeling` and sweeps the three pairings that keep σ₁ fixed, taking σ₂
    /// at the larger of the two remaining roots.
    pub fn embedding_structure(&self, labeling: &Labeling) -> EmbeddingStructure {
        assert_eq!(self.degree(), 4, "embedding structure needs a quartic field");
        let checks = self.structure_checks(labeling);
        let base = labeling.0[0];
        let witness = (0..4)
            .filter(|&p| p != base)
            .map(|partner| {
                let rest: Vec<usize> = (0..4).filter(|&q| q != base && q != partner).collect();
                Labeling(vec![base, rest[1], partner, rest[0]])
            })
            .find(|l| self.structure_checks(l).holds());
        EmbeddingStructure { labeling: labeling.clone(), checks, witness }
    }

    pub fn structure_checks(&self, l: &Labeling) -> StructureChecks {
        let l = &l.0;
        let tau = self.find_conjugate(l[0], l[2]);
        let sigma3_preserves_field = tau.is_some();
        let sigma3_is_involution = tau.as_ref().is_some_and(|t| t.is_involution());
        let sigma4_is_sigma2_sigma3 = tau.as_ref().is_some_and(|t| t.root_map[l[1]] == l[3]);
        let sigma4_field_is_sigma2_field = self.find_conjugate(l[1], l[3]).is_some();
        StructureChecks {
            sigma3_preserves_field,
            sigma3_is_involution,
            sigma4_is_sigma2_sigma3,
            sigma4_field_is_sigma2_field,
            tau: tau.map(|t| t.image),
        }
    }
}

/// Certified search for a root of the minimal polynomial inside K whose
/// value at the base embedding (position 0) is the root at `target`.
///
/// The coordinates of an algebraic integer of K in the power basis lie in
/// `(1/D)ℤ` with `D = |disc(f)|`, so interval Lagrange interpolation of the
/// conjugate values followed by rounding gives finitely many candidates,
/// each checked exactly.
fn conjugate_from_base(field: &NumberField, target: usize) -> Option<Automorphism> {
    let n = field.degree();
    if target == 0 {
        return Some(Automorphism::identity(field));
    }
    let d = rat_int(field.0.disc.clone());
    let others: Vec<usize> = (0..n).filter(|&p| p != target).collect();
    for perm in permutations(&others) {
        // pi[i] = image position of embedding i; pi[0] = target.
        let mut pi = vec![target];
        pi.extend(perm);
        let mut bits = 64;
        loop {
            let r = field.root_intervals(bits);
            let Some(coeffs) = lagrange(&r, &pi, 2 * bits) else {
                bits *= 2;
                continue;
            };
            let scaled: Vec<Interval> = coeffs.iter().map(|c| c.scale(&d)).collect();
            if scaled.iter().any(|iv| iv.integers(2).is_some_and(|v| v.is_empty())) {
                break;
            }
            if scaled.iter().all(|iv| iv.width() < Rat::one()) {
                let coords: Vec<Rat> = scaled
                    .iter()
                    .map(|iv| Rat::new(iv.integers(1).unwrap()[0].clone(), d.to_integer()))
                    .collect();
                let u = field.element(coords).unwrap();
                if field.0.minpoly_eval(&u).is_zero() {
                    let root_map = root_map_of(field, &u);
                    if root_map[0] == target {
                        return Some(Automorphism { image: u, root_map });
                    }
                }
                break;
            }
            bits *= 2;
        }
    }
    None
}

impl Inner {
    fn minpoly_eval(&self, u: &FieldElement) -> FieldElement {
        let mut acc = u.field.zero();
        for c in self.minpoly.coeffs().iter().rev() {
            acc = &(&acc * u) + &u.field.from_rat(rat_int(c.clone()));
        }
        acc
    }
}

/// Position of σ_i(u) among the roots, for each i; `u` must be a root of the minimal polynomial.
fn root_map_of(field: &NumberField, u: &FieldElement) -> Vec<usize> {
    (0..field.degree())
        .map(|i| {
            let mut bits = STORED_ROOT_BITS;
            loop {
                let roots = field.root_intervals(bits);
                let v = u.eval_on(&roots[i]);
                let hits: Vec<usize> = (0..field.degree()).filter(|&j| v.overlaps(&roots[j])).collect();
                if hits.len() == 1 {
                    return hits[0];
                }
                bits *= 2;
            }
        })
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Interval coefficients of the interpolating polynomial through
/// `(r_i, r_{pi(i)})`; `None` if some node difference is not yet separated from 0.
fn lagrange(r: &[Interval], pi: &[usize], bits: u32) -> Option<Vec<Interval>> {
    let n = r.len();
    let mut out = vec![Interval::zero(); n];
    for i in 0..n {
        let mut num = vec![Interval::point(Rat::one())];
        let mut den = Interval::point(Rat::one());
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![Interval::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(&r[j])).round_out(bits);
            }
            num = next;
            den = den.mul(&r[i].sub(&r[j])).round_out(bits);
        }
        let w = r[pi[i]].div(&den)?.round_out(bits);
        for (o, c) in out.iter_mut().zip(&num) {
            *o = o.add(&c.mul(&w)).round_out(bits);
        }
    }
    Some(out)
}

/// Field automorphism θ ↦ `image`. `root_map[i]` is the root position of
/// σ_i(image), so σ_i ∘ ρ is the embedding at `root_map[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub image: FieldElement,
    pub root_map: Vec<usize>,
}

impl Automorphism {
    pub fn identity(field: &NumberField) -> Self {
        Automorphism { image: field.theta(), root_map: (0..field.degree()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.root_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.root_map.iter().enumerate().all(|(i, &j)| self.root_map[j] == i)
    }

    /// ρ(a) = a(image).
    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        let f = &a.field;
        let mut acc = f.zero();
        for c in a.coords.iter().rev() {
            acc = &(&acc * &self.image) + &f.from_rat(c.clone());
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            image: self.apply(&other.image),
            root_map: (0..self.root_map.len()).map(|i| other.root_map[self.root_map[i]]).collect(),
        }
    }
}

/// Permutation assigning σ_{k+1} to a root position; JSON uses 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling(pub Vec<usize>);

impl Labeling {
    pub fn identity(n: usize) -> Self {
        Labeling((0..n).collect())
    }

    pub fn from_one_based(v: &[usize]) -> Option<Self> {
        let n = v.len();
        let mut seen = vec![false; n];
        for &x in v {
            if x == 0 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
        }
        Some(Labeling(v.iter().map(|x| x - 1).collect()))
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// Label index k with `self.0[k] == pos`.
    pub fn label_of(&self, pos: usize) -> usize {
        self.0.iter().position(|&p| p == pos).expect("position outside labeling")
    }
}

impl Serialize for Labeling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Labeling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Labeling::from_one_based(&v).ok_or_else(|| serde::de::Error::custom("labeling is not a 1-based permutation"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureChecks {
    pub sigma3_preserves_field: bool,
    pub sigma3_is_involution: bool,
    pub sigma4_is_sigma2_sigma3: bool,
    pub sigma4_field_is_sigma2_field: bool,
    /// The automorphism σ₁⁻¹σ₃ as θ ↦ tau, when σ₃(K) = K.
    pub tau: Option<FieldElement>,
}

impl StructureChecks {
    pub fn holds(&self) -> bool {
        self.sigma3_preserves_field
            && self.sigma3_is_involution
            && self.sigma4_is_sigma2_sigma3
            && self.sigma4_field_is_sigma2_field
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingStructure {
    pub labeling: Labeling,
    #[serde(flatten)]
    pub checks: StructureChecks,
    /// A labeling with the same σ₁ satisfying all four conditions.
    pub witness: Option<Labeling>,
}

/// JSON literal `{"coords": ["p/q", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementLiteral {
    #[serde(with = "crate::json::rat_vec")]
    pub coords: Vec<Rat>,
}

/// Element of ℚ(θ) in the power basis 1, θ, …, θ^{n−1}.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<Rat>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        write!(f, "[{}]", terms.join(", "))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementLiteral { coords: self.coords.clone() }.serialize(s)
    }
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rat> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| self.coords[0].clone())
    }

    pub fn is_integral_coords(&self) -> bool {
        self.coords.iter().all(is_integral)
    }

    fn check_same(&self, o: &FieldElement) -> Result<(), ArithError> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(ArithError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, o: &FieldElement) -> Result<FieldElement, ArithError> {
        self.check_same(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_sub(&self, o: &FieldElement) -> Result<FieldElement, ArithError> {
        self.check_same(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, o: &FieldElement) -> Result<FieldElement, ArithError> {
        self.check_same(o)?;
        let coords = self.field.reduce_product(&self.coords, &o.coords);
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_div(&self, o: &FieldElement) -> Result<FieldElement, ArithError> {
        self.check_same(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn scale(&self, c: &Rat) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn inv(&self) -> Result<FieldElement, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let inv = QPoly::new(self.coords.clone())
            .inverse_mod(&self.field.0.modulus)
            .expect("nonzero element of a field is invertible");
        Ok(FieldElement { field: self.field.clone(), coords: pad(inv.coeffs(), self.field.degree()) })
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `self`; column j holds the coordinates of `self·θ^j`.
    pub fn mult_matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.field.degree();
        let cols: Vec<Vec<Rat>> = (0..n).map(|j| self.field.reduce_product(&self.coords, &self.field.0.powers[j])).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Trace K/ℚ, the sum of all conjugates.
    pub fn trace(&self) -> Rat {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Minimal polynomial over ℚ, as the primitive integer polynomial with positive leading coefficient.
    pub fn min_poly(&self) -> IntPolynomial {
        let n = self.field.degree();
        let mut powers = vec![self.field.one()];
        for k in 1..=n {
            powers.push(&powers[k - 1] * self);
            let rows: Vec<Vec<Rat>> =
                (0..n).map(|i| powers.iter().map(|p| p.coords[i].clone()).collect()).collect();
            let ker = linalg::kernel(&rows, k + 1, &Rat::zero());
            if let Some(v) = ker.first() {
                return QPoly::new(v.clone()).primitive_part();
            }
        }
        unreachable!("an element of a degree-n field satisfies a polynomial of degree ≤ n")
    }

    pub fn degree_of(&self) -> usize {
        self.min_poly().degree().unwrap()
    }

    /// Interval Horner evaluation at a root interval.
    pub(crate) fn eval_on(&self, root: &Interval) -> Interval {
        let mut acc = Interval::zero();
        for c in self.coords.iter().rev() {
            acc = acc.mul(root).add_scalar(c);
        }
        acc
    }

    /// Certified interval of width ≤ `eps` containing the value at root position `pos`.
    pub fn embed_eval(&self, pos: usize, eps: &Rat) -> Interval {
        if let Some(r) = self.as_rational() {
            return Interval::point(r);
        }
        let mut root = self.field.0.roots[pos].clone();
        loop {
            let v = self.eval_on(&root.interval);
            if v.width() <= *eps {
                return v;
            }
            root = root.bisect();
        }
    }

    /// Exact sign of the value at root position `pos`.
    pub fn embed_sign(&self, pos: usize) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(&Rat::zero());
        }
        let mut root = self.field.0.roots[pos].clone();
        loop {
            if let Some(s) = self.eval_on(&root.interval).strict_sign() {
                return s;
            }
            root = root.bisect();
        }
    }

    pub fn embed_approx(&self, pos: usize) -> f64 {
        to_f64(&self.eval_on(&self.field.0.roots[pos].interval).midpoint())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.checked_add(o).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.checked_sub(o).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.checked_mul(o).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|x| -x).collect() }
    }
}

impl linalg::Scalar for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
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
        self.checked_div(o).expect("division by nonzero pivot")
    }
    fn neg(&self) -> Self {
        -self
    }
}
