//! Lattice symmetries of a continued fraction: the induced permutation of
//! eigen-directions, Dirichlet versus palindromic, properness, the ten
//! canonical classes and the class criterion.
//!
//! Every symmetry `G` satisfies `G·v = λ·ρ(v)` for one `λ ∈ K` and one field
//! automorphism `ρ`, because `v = (1, α, β, γ)` is a basis of `K`. Applying
//! σ_{L[i]} to this identity gives `G·l_i = σ_{L[i]}(λ)·l_{σ(i)}` with
//! `σ(i) = label_of(ρ.root_map[L[i]])`. A report keeps one K-element `λ_i`
//! per label; the real factor is `σ_{L[i]}(λ_i)`.

mod classes;
mod criterion;

use std::fmt;

use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::cf_core::{apply_int_matrix, charpoly, AlgebraicCF, CfError};
use crate::intlat::{integer_kernel, IntMatrix};
use crate::numfield::{Automorphism, FieldElement, IntPolynomial};
use crate::rational::Int;
use crate::sail::{fixed_point_in_cone, FixedPoint, SailError};

pub use classes::{
    admissible_labelings, canonical_class, canonical_matrix, class_membership, class_membership_any,
    relation_holds, verify_lemma6, CanonicalClass, Lemma6Check, Relation, CLASS_COUNT,
};
pub use criterion::{
    criterion_check, dirichlet_search, twisted_lattice, DirichletHit, NotInClassReason, SearchConfig, SearchStats,
    Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("expected a 4x4 integer matrix")]
    NotSquare4,
    #[error("determinant is {0}, not ±1")]
    NotUnimodular(Int),
    #[error("lemma violated: {0}")]
    LemmaViolation(String),
    #[error("algebraic and geometric properness tests disagree (algebraic: {algebraic}, fixed point: {geometric})")]
    InconsistentProperness { algebraic: bool, geometric: bool },
    #[error("properness is defined for palindromic symmetries only")]
    NotPalindromic,
    #[error("characteristic polynomial is {0}, expected x^4 - 2x^2 + 1")]
    WrongCharPoly(String),
    #[error("G is not diagonalisable over Q (eigenspace dimensions {0} and {1})")]
    NotSemisimple(usize, usize),
    #[error("the labeling does not satisfy the sigma_3 embedding package")]
    NoSigma3,
    #[error("class index {0} is outside 1..10")]
    BadClass(usize),
    #[error("G is not a symmetry of the continued fraction")]
    NotASymmetry,
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// Permutation of labels, stored 0-based; JSON and display are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 1-based images, e.g. `[3, 4, 1, 2]` for (1 3)(2 4).
    pub fn from_one_based(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
            out.push(x - 1);
        }
        Some(Permutation(out))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    /// Nontrivial cycles in order of their smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut j = self.0[start];
            while j != start {
                seen[j] = true;
                c.push(j);
                j = self.0[j];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Lengths of all cycles, fixed points included, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.extend(std::iter::repeat(1).take(self.0.len() - moved));
        t.sort_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, num_integer::lcm)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let items: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.iter().map(|x| x + 1).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).ok_or_else(|| serde::de::Error::custom("not a 1-based permutation"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Dirichlet,
    Palindromic,
}

/// Integer bases of ker(G − I) and ker(G + I).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantPlanes {
    #[serde(with = "crate::json::int_mat")]
    pub plus: Vec<Vec<Int>>,
    #[serde(with = "crate::json::int_mat")]
    pub minus: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub g: IntMatrix,
    pub sigma: Permutation,
    /// The automorphism with `G·v = λ_i·ρ(v)`.
    pub rho: Automorphism,
    pub lambdas: Vec<FieldElement>,
    pub kind: SymmetryKind,
    pub proper: Option<bool>,
    pub fixed_point: Option<FixedPoint>,
    pub invariant_planes: Option<InvariantPlanes>,
}

impl Serialize for SymmetryReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SymmetryReport", 10)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("sigma", &self.sigma)?;
        st.serialize_field("sigma_cycles", &self.sigma.to_string())?;
        st.serialize_field("order", &self.sigma.order())?;
        st.serialize_field("rho_image", &self.rho.image)?;
        st.serialize_field("lambdas", &self.lambdas)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("proper", &self.proper)?;
        st.serialize_field("fixed_point", &self.fixed_point)?;
        st.serialize_field("invariant_planes", &self.invariant_planes)?;
        st.end()
    }
}

impl SymmetryReport {
    pub fn order(&self) -> usize {
        self.sigma.order()
    }

    pub fn charpoly(&self) -> IntPolynomial {
        charpoly(&self.g)
    }
}

fn check_unimodular(g: &IntMatrix) -> Result<(), SymmetryError> {
    if g.nrows() != 4 || g.ncols() != 4 {
        return Err(SymmetryError::NotSquare4);
    }
    let d = g.det();
    if d.clone() * &d != Int::one() {
        return Err(SymmetryError::NotUnimodular(d));
    }
    Ok(())
}

/// The permutation and factors of `G`, or `None` when `G` is not a symmetry.
pub fn sigma_of(cf: &AlgebraicCF, g: &IntMatrix) -> Result<Option<SymmetryReport>, SymmetryError> {
    check_unimodular(g)?;
    let v = cf.basis();
    let w = apply_int_matrix(g, v);
    if w[0].is_zero() {
        return Ok(None);
    }
    let lambda = w[0].clone();
    let inv = lambda.inv().expect("nonzero");
    let target: Vec<FieldElement> = w.iter().map(|x| x * &inv).collect();
    let Some(rho) = cf.field().automorphisms().iter().find(|r| (1..4).all(|k| r.apply(&v[k]) == target[k])) else {
        return Ok(None);
    };
    let l = cf.labeling();
    let sigma = Permutation((0..4).map(|i| l.label_of(rho.root_map[l.0[i]])).collect());
    let kind = if sigma.is_identity() { SymmetryKind::Dirichlet } else { SymmetryKind::Palindromic };
    Ok(Some(SymmetryReport {
        g: g.clone(),
        sigma,
        rho: rho.clone(),
        lambdas: vec![lambda; 4],
        kind,
        proper: None,
        fixed_point: None,
        invariant_planes: None,
    }))
}

/// Whether `G·v = λ_i·ρ(v)` holds in K for every label.
pub fn verify_identity(cf: &AlgebraicCF, r: &SymmetryReport) -> bool {
    let v = cf.basis();
    let w = apply_int_matrix(&r.g, v);
    let rv: Vec<FieldElement> = v.iter().map(|x| r.rho.apply(x)).collect();
    let l = cf.labeling();
    let sigma_ok = (0..4).all(|i| l.label_of(r.rho.root_map[l.0[i]]) == r.sigma.0[i]);
    sigma_ok && r.lambdas.iter().all(|lam| w.iter().zip(&rv).all(|(a, b)| *a == lam * b))
}

/// Dirichlet for the identity permutation, palindromic otherwise; a palindromic
/// permutation must have cycle type (2,2) or (4).
pub fn classify(r: &SymmetryReport) -> Result<SymmetryKind, SymmetryError> {
    if r.sigma.is_identity() {
        return Ok(SymmetryKind::Dirichlet);
    }
    match r.sigma.cycle_type().as_slice() {
        [2, 2] | [4] => Ok(SymmetryKind::Palindromic),
        _ => Err(SymmetryError::LemmaViolation(format!(
            "palindromic permutation {} is neither of type (1 2)(3 4) nor (1 2 3 4)",
            r.sigma
        ))),
    }
}

/// The report of `G²` when σ has order 4, the input otherwise. Factors follow
/// `G²·l_i = λ_i·λ_{σ(i)}·l_{σ²(i)}`, i.e. `λ'_i = λ_i·ρ(λ_{σ(i)})` in K.
pub fn reduce_to_ord2(r: &SymmetryReport) -> SymmetryReport {
    if r.order() != 4 {
        return r.clone();
    }
    let lambdas = (0..4).map(|i| &r.lambdas[i] * &r.rho.apply(&r.lambdas[r.sigma.0[i]])).collect();
    let sigma = r.sigma.compose(&r.sigma);
    let kind = if sigma.is_identity() { SymmetryKind::Dirichlet } else { SymmetryKind::Palindromic };
    SymmetryReport {
        g: r.g.mul(&r.g),
        sigma,
        rho: r.rho.compose(&r.rho),
        lambdas,
        kind,
        proper: None,
        fixed_point: None,
        invariant_planes: None,
    }
}

/// The K-elements whose being 1 is the properness condition: one product
/// `λ_i·ρ(λ_{σ(i)})` per 2-cycle, or the cycle product
/// `λ_i·ρ(λ_{σ(i)})·ρ²(λ_{σ²(i)})·ρ³(λ_{σ³(i)})` for a 4-cycle.
pub fn mu_products(r: &SymmetryReport) -> Result<Vec<FieldElement>, SymmetryError> {
    let kind = classify(r)?;
    if kind == SymmetryKind::Dirichlet {
        return Err(SymmetryError::NotPalindromic);
    }
    let out = r
        .sigma
        .cycles()
        .iter()
        .map(|c| {
            let mut acc = r.lambdas[c[0]].clone();
            let mut rho_k = Automorphism::identity(r.rho.image.field());
            for &j in &c[1..] {
                rho_k = rho_k.compose(&r.rho);
                acc = &acc * &rho_k.apply(&r.lambdas[j]);
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Algebraic properness test alone.
pub fn mu_condition(r: &SymmetryReport) -> Result<bool, SymmetryError> {
    Ok(mu_products(r)?.iter().all(FieldElement::is_one))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Properness {
    pub proper: bool,
    pub mu_products: Vec<FieldElement>,
    pub fixed_point: Option<FixedPoint>,
}

/// Search height for fixed points; height 1 always suffices when the fixed
/// space meets a cone interior, since walls contain no nonzero integer points.
const FIXED_POINT_HEIGHT: i64 = 3;

/// Properness by the μ-product test, cross-checked against a fixed integer
/// point of `G` inside a cone.
pub fn is_proper(cf: &AlgebraicCF, r: &SymmetryReport) -> Result<Properness, SymmetryError> {
    let products = mu_products(r)?;
    let algebraic = products.iter().all(FieldElement::is_one);
    let fixed_point = match fixed_point_in_cone(cf, &r.g, FIXED_POINT_HEIGHT) {
        Ok(fp) => Some(fp),
        Err(SailError::NoFixedLine | SailError::NoInteriorFixedPoint | SailError::EmptyPatch) => None,
        Err(SailError::Cf(e)) => return Err(e.into()),
    };
    let geometric = fixed_point.is_some();
    if algebraic != geometric {
        return Err(SymmetryError::InconsistentProperness { algebraic, geometric });
    }
    Ok(Properness { proper: algebraic, mu_products: products, fixed_point })
}

/// `(x² − 1)²`.
pub fn involution_charpoly() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 0, -2, 0, 1])
}

pub fn invariant_planes(g: &IntMatrix) -> Result<InvariantPlanes, SymmetryError> {
    let chi = charpoly(g);
    if chi != involution_charpoly() {
        return Err(SymmetryError::WrongCharPoly(format!("{:?}", chi.coeffs())));
    }
    let shifted = |s: i64| {
        let rows = (0..4)
            .map(|i| (0..4).map(|j| if i == j { g.get(i, j) - Int::from(s) } else { g.get(i, j).clone() }).collect())
            .collect();
        IntMatrix::new(rows).unwrap()
    };
    let plus = integer_kernel(&shifted(1));
    let minus = integer_kernel(&shifted(-1));
    if plus.len() != 2 || minus.len() != 2 {
        return Err(SymmetryError::NotSemisimple(plus.len(), minus.len()));
    }
    Ok(InvariantPlanes { plus, minus })
}

/// Lemma checks asserted on every full report: a symmetry other than ±I that
/// fixes the first direction has an irrational factor there, and a proper
/// symmetry of order 2 has characteristic polynomial (x² − 1)².
pub fn lemma_checks(r: &SymmetryReport) -> Result<(), SymmetryError> {
    let id = IntMatrix::identity(4);
    let plus_minus_id = r.g == id || r.g == id.neg();
    if r.sigma.0[0] == 0 && !plus_minus_id && r.lambdas[0].as_rational().is_some() {
        return Err(SymmetryError::LemmaViolation(format!(
            "G fixes l_1 with rational factor {:?}",
            r.lambdas[0]
        )));
    }
    if r.proper == Some(true) && r.order() == 2 && r.charpoly() != involution_charpoly() {
        return Err(SymmetryError::LemmaViolation(format!(
            "proper order-2 symmetry with characteristic polynomial {:?}",
            r.charpoly().coeffs()
        )));
    }
    Ok(())
}

/// Full analysis of `G`: permutation, kind, properness with its fixed point,
/// invariant planes when χ_G = (x² − 1)², and the lemma checks.
pub fn symmetry_report(cf: &AlgebraicCF, g: &IntMatrix) -> Result<Option<SymmetryReport>, SymmetryError> {
    let Some(mut r) = sigma_of(cf, g)? else {
        return Ok(None);
    };
    r.kind = classify(&r)?;
    if r.kind == SymmetryKind::Palindromic {
        let p = is_proper(cf, &r)?;
        r.proper = Some(p.proper);
        r.fixed_point = p.fixed_point;
    } else {
        r.proper = Some(false);
    }
    if charpoly(g) == involution_charpoly() {
        r.invariant_planes = invariant_planes(g).ok();
    }
    lemma_checks(&r)?;
    Ok(Some(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::cf_core::cf_from_coords;
    use crate::numfield::{make_field, Labeling};
    use crate::rational::rat;

    pub(crate) fn example_cf() -> AlgebraicCF {
        let k = make_field(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])).unwrap();
        let e = |c: [Rat; 4]| k.element(c.to_vec()).unwrap();
        let z = || rat(0, 1);
        cf_from_coords(
            &k,
            Labeling(vec![3, 2, 0, 1]),
            e([z(), rat(1, 1), rat(1, 1), z()]),
            e([z(), z(), rat(-1, 1), rat(1, 2)]),
            e([z(), rat(-1, 1), rat(1, 1), z()]),
        )
        .unwrap()
    }

    use crate::rational::Rat;

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_one_based(&[3, 4, 1, 2]).unwrap();
        assert_eq!(p.to_string(), "(1 3)(2 4)");
        assert_eq!(p.order(), 2);
        assert_eq!(p.cycle_type(), vec![2, 2]);
        let c = Permutation::from_one_based(&[2, 3, 4, 1]).unwrap();
        assert_eq!(c.order(), 4);
        assert_eq!(c.compose(&c), p);
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!(Permutation::from_one_based(&[1, 1, 2, 3]).is_none());
    }

    #[test]
    fn identity_and_non_unimodular() {
        let cf = example_cf();
        let r = sigma_of(&cf, &IntMatrix::identity(4)).unwrap().unwrap();
        assert!(r.sigma.is_identity());
        assert!(r.lambdas.iter().all(FieldElement::is_one));
        assert_eq!(classify(&r).unwrap(), SymmetryKind::Dirichlet);
        let two = IntMatrix::from_i64(&[[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        assert_eq!(sigma_of(&cf, &two).unwrap_err(), SymmetryError::NotUnimodular(Int::from(16)));
    }

    #[test]
    fn example_g1() {
        let cf = example_cf();
        let r = symmetry_report(&cf, &canonical_matrix(1).unwrap()).unwrap().unwrap();
        assert_eq!(r.sigma, Permutation::from_one_based(&[3, 4, 1, 2]).unwrap());
        assert!(r.lambdas.iter().all(FieldElement::is_one));
        assert_eq!(r.proper, Some(true));
        assert!(r.fixed_point.is_some());
        assert!(verify_identity(&cf, &r));
        assert!(r.invariant_planes.is_some());
    }

    #[test]
    fn three_cycle_is_a_lemma_violation() {
        let cf = example_cf();
        let mut r = sigma_of(&cf, &IntMatrix::identity(4)).unwrap().unwrap();
        r.sigma = Permutation::from_one_based(&[1, 3, 4, 2]).unwrap();
        assert!(matches!(classify(&r), Err(SymmetryError::LemmaViolation(_))));
    }

    #[test]
    fn invariant_planes_of_diagonal() {
        let g = IntMatrix::from_i64(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]);
        let p = invariant_planes(&g).unwrap();
        assert_eq!(p.plus.len(), 2);
        assert!(p.plus.iter().all(|v| v[2].is_zero() && v[3].is_zero()));
        assert!(p.minus.iter().all(|v| v[0].is_zero() && v[1].is_zero()));
        assert!(matches!(invariant_planes(&IntMatrix::identity(4).neg()), Err(SymmetryError::WrongCharPoly(_))));
    }
}
