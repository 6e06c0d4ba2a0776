//! The ten canonical classes: a pair of relations on (α, β, γ) under the
//! involution σ₃, and the matrix `G_i` that is a proper symmetry of every
//! member.

use serde::Serialize;

use super::{sigma_of, SymmetryError};
use crate::cf_core::AlgebraicCF;
use crate::intlat::IntMatrix;
use crate::numfield::{Automorphism, Labeling};
use crate::rational::{rat, Rat};

pub const CLASS_COUNT: usize = 10;

/// `β + τ(β) = trace_const + trace_coeff·(α + τ(α))` and
/// `γ = gamma_alpha·α + gamma_tau_alpha·τ(α) + gamma_const`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    #[serde(with = "crate::json::rat")]
    pub trace_const: Rat,
    #[serde(with = "crate::json::rat")]
    pub trace_coeff: Rat,
    #[serde(with = "crate::json::rat")]
    pub gamma_alpha: Rat,
    #[serde(with = "crate::json::rat")]
    pub gamma_tau_alpha: Rat,
    #[serde(with = "crate::json::rat")]
    pub gamma_const: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalClass {
    pub index: usize,
    pub relation: Relation,
    pub g: IntMatrix,
}

/// (trace constant, trace coefficient as p/q, γ coefficients of α, τα, 1 as p/q).
type Row = ((i64, i64, i64), [(i64, i64); 3]);

const RELATIONS: [Row; CLASS_COUNT] = [
    ((0, -1, 1), [(0, 1), (1, 1), (0, 1)]),
    ((1, -1, 1), [(0, 1), (1, 1), (0, 1)]),
    ((2, -1, 1), [(0, 1), (1, 1), (0, 1)]),
    ((0, -1, 1), [(1, 2), (1, 2), (0, 1)]),
    ((2, -1, 1), [(1, 2), (1, 2), (0, 1)]),
    ((0, -1, 1), [(1, 2), (1, 2), (1, 2)]),
    ((2, -1, 1), [(1, 2), (1, 2), (1, 2)]),
    ((1, -1, 2), [(1, 2), (1, 2), (0, 1)]),
    ((2, -1, 2), [(1, 2), (1, 2), (0, 1)]),
    ((2, -1, 2), [(-1, 4), (1, 4), (0, 1)]),
];

const MATRICES: [[[i64; 4]; 4]; CLASS_COUNT] = [
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, -1, -1, -1], [0, 1, 0, 0]],
    [[1, 0, 0, 0], [0, 0, 0, 1], [1, -1, -1, -1], [0, 1, 0, 0]],
    [[1, 0, 0, 0], [0, 0, 0, 1], [2, -1, -1, -1], [0, 1, 0, 0]],
    [[1, 0, 0, 0], [0, -1, 0, 2], [0, 0, -1, -2], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, -1, 0, 2], [2, 0, -1, -2], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [-1, -1, 0, 2], [1, 0, -1, -2], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [-1, -1, 0, 2], [3, 0, -1, -2], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, -1, 0, 2], [1, 0, -1, -1], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, -1, 0, 2], [2, 0, -1, -1], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 1, 0, 4], [2, -1, -1, -2], [0, 0, 0, -1]],
];

pub fn canonical_class(i: usize) -> Result<CanonicalClass, SymmetryError> {
    if !(1..=CLASS_COUNT).contains(&i) {
        return Err(SymmetryError::BadClass(i));
    }
    let ((c, p, q), g) = RELATIONS[i - 1];
    let relation = Relation {
        trace_const: rat(c, 1),
        trace_coeff: rat(p, q),
        gamma_alpha: rat(g[0].0, g[0].1),
        gamma_tau_alpha: rat(g[1].0, g[1].1),
        gamma_const: rat(g[2].0, g[2].1),
    };
    let g = IntMatrix::from_i64(&MATRICES[i - 1]);
    assert!(g.is_unimodular(), "G_{i} must be unimodular");
    Ok(CanonicalClass { index: i, relation, g })
}

pub fn canonical_matrix(i: usize) -> Result<IntMatrix, SymmetryError> {
    canonical_class(i).map(|c| c.g)
}

/// Both relations of class `i` for the continued fraction under the involution `tau`.
pub fn relation_holds(cf: &AlgebraicCF, rel: &Relation, tau: &Automorphism) -> (bool, bool) {
    let k = cf.field();
    let (a, b, c) = (cf.alpha(), cf.beta(), cf.gamma());
    let ta = tau.apply(a);
    let t = a + &ta;
    let trace_rhs = &k.from_rat(rel.trace_const.clone()) + &t.scale(&rel.trace_coeff);
    let first = &(b + &tau.apply(b)) == &trace_rhs;
    let gamma_rhs =
        &(&a.scale(&rel.gamma_alpha) + &ta.scale(&rel.gamma_tau_alpha)) + &k.from_rat(rel.gamma_const.clone());
    (first, *c == gamma_rhs)
}

/// Labelings satisfying the σ₃ package that keep σ₁ of `cf`, one per
/// non-identity involution of K; the continued fraction's own labeling
/// comes first when it qualifies.
pub fn admissible_labelings(cf: &AlgebraicCF) -> Vec<(Labeling, Automorphism)> {
    let k = cf.field();
    let own = cf.labeling();
    let mut out: Vec<(Labeling, Automorphism)> = Vec::new();
    if k.structure_checks(own).holds() {
        out.push((own.clone(), k.find_conjugate(own.0[0], own.0[2]).unwrap()));
    }
    let base = own.0[0];
    for rho in k.automorphisms() {
        if rho.is_identity() || !rho.is_involution() || out.iter().any(|(_, r)| r == rho) {
            continue;
        }
        let partner = rho.root_map[base];
        let second = (0..4).rev().find(|&p| p != base && p != partner).unwrap();
        let l = Labeling(vec![base, second, partner, rho.root_map[second]]);
        debug_assert!(k.structure_checks(&l).holds());
        out.push((l, rho.clone()));
    }
    out
}

/// Class membership under the continued fraction's own labeling.
pub fn class_membership(cf: &AlgebraicCF, i: usize) -> Result<bool, SymmetryError> {
    let class = canonical_class(i)?;
    let k = cf.field();
    let l = cf.labeling();
    if !k.structure_checks(l).holds() {
        return Err(SymmetryError::NoSigma3);
    }
    let tau = k.find_conjugate(l.0[0], l.0[2]).expect("package holds");
    let (a, b) = relation_holds(cf, &class.relation, &tau);
    Ok(a && b)
}

/// First admissible labeling under which class `i` holds.
pub fn class_membership_any(cf: &AlgebraicCF, i: usize) -> Result<Option<Labeling>, SymmetryError> {
    let class = canonical_class(i)?;
    Ok(admissible_labelings(cf).into_iter().find_map(|(l, tau)| {
        let (a, b) = relation_holds(cf, &class.relation, &tau);
        (a && b).then_some(l)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma6Check {
    pub class: usize,
    pub in_class: bool,
    pub proper_order_two: bool,
}

impl Lemma6Check {
    pub fn holds(&self) -> bool {
        self.in_class == self.proper_order_two
    }
}

/// Both sides of the equivalence: membership in class `i` under some
/// admissible labeling, and `G_i` being a proper symmetry with σ of order 2.
pub fn verify_lemma6(cf: &AlgebraicCF, i: usize) -> Result<Lemma6Check, SymmetryError> {
    let in_class = class_membership_any(cf, i)?.is_some();
    let g = canonical_matrix(i)?;
    let proper_order_two = match sigma_of(cf, &g)? {
        Some(r) if r.order() == 2 => super::is_proper(cf, &r)?.proper,
        _ => false,
    };
    Ok(Lemma6Check { class: i, in_class, proper_order_two })
}

#[cfg(test)]
mod tests {
    use super::super::tests::example_cf;
    use super::*;
    use crate::cf_core::cf_from_coords;

    #[test]
    fn matrices_are_unimodular() {
        for i in 1..=CLASS_COUNT {
            assert!(canonical_matrix(i).unwrap().is_unimodular());
        }
        assert_eq!(canonical_matrix(0).unwrap_err(), SymmetryError::BadClass(0));
        assert_eq!(canonical_matrix(11).unwrap_err(), SymmetryError::BadClass(11));
    }

    #[test]
    fn example_cf_memberships() {
        let cf = example_cf();
        assert!(class_membership(&cf, 1).unwrap());
        assert!(!class_membership(&cf, 3).unwrap());
        for i in 1..=CLASS_COUNT {
            assert!(verify_lemma6(&cf, i).unwrap().holds(), "class {i}");
        }
        let c4 = verify_lemma6(&cf, 4).unwrap();
        assert!(!c4.in_class && !c4.proper_order_two);
    }

    #[test]
    fn unrelated_gamma_fails_everywhere() {
        let cf = example_cf();
        let k = cf.field();
        let gamma = &k.theta().pow(3) + &k.from_int(5);
        let other = cf_from_coords(k, cf.labeling().clone(), cf.alpha().clone(), cf.beta().clone(), gamma).unwrap();
        for i in 1..=CLASS_COUNT {
            assert!(!class_membership(&other, i).unwrap());
        }
    }
}
