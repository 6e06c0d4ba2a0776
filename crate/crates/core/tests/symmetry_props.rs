use std::sync::OnceLock;

use proptest::prelude::*;

use sailsym::cf_core::{
    canonical_test_matrix, cf_from_coords, companion, eigen_data, is_hyperbolic, AlgebraicCF,
};
use sailsym::exec::Execution;
use sailsym::intlat::IntMatrix;
use sailsym::numfield::{make_field, IntPolynomial, Labeling, NumberField};
use sailsym::rational::rat;
use sailsym::symmetry::{
    canonical_matrix, criterion_check, dirichlet_search, involution_charpoly, is_proper, symmetry_report,
    verify_identity, NotInClassReason, Permutation, SearchConfig, SymmetryKind, Verdict,
};

fn example_cf() -> &'static AlgebraicCF {
    static CELL: OnceLock<AlgebraicCF> = OnceLock::new();
    CELL.get_or_init(|| {
        let k: NumberField = make_field(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])).unwrap();
        let e = |c: [(i64, i64); 4]| k.element(c.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap();
        cf_from_coords(
            &k,
            Labeling(vec![3, 2, 0, 1]),
            e([(0, 1), (1, 1), (1, 1), (0, 1)]),
            e([(0, 1), (0, 1), (-1, 1), (1, 2)]),
            e([(0, 1), (-1, 1), (1, 1), (0, 1)]),
        )
        .unwrap()
    })
}

fn unimodular(ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(4);
    for &(i, j, c) in ops {
        if i == j {
            continue;
        }
        let mut e: Vec<Vec<i64>> = (0..4).map(|r| (0..4).map(|s| i64::from(r == s)).collect()).collect();
        e[i][j] = c;
        m = m.mul(&IntMatrix::from_i64(&e));
    }
    m
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Report invariants for the transported class-1 symmetry.
    #[test]
    fn transported_reports_are_consistent(ops in ops()) {
        let x = unimodular(&ops);
        let xi = x.inverse().unwrap();
        let moved = example_cf().transformed(&x).unwrap();
        let g = x.mul(&canonical_matrix(1).unwrap()).mul(&xi);
        let r = symmetry_report(&moved, &g).unwrap().unwrap();
        prop_assert!(verify_identity(&moved, &r));
        prop_assert_eq!(r.kind == SymmetryKind::Dirichlet, r.sigma.is_identity());
        prop_assert_eq!(r.proper, Some(true));
        prop_assert!(r.fixed_point.is_some());
        prop_assert_eq!(r.charpoly(), involution_charpoly());
        let fp = r.fixed_point.as_ref().unwrap();
        prop_assert_eq!(g.mul_vec(&fp.point), fp.point.clone());
        let v = criterion_check(&moved, Some(&xi), &SearchConfig::default(), Execution::default()).unwrap();
        prop_assert_eq!(v.class(), Some(1));
    }
}

#[test]
fn witnessless_search_recovers_the_class() {
    let x = unimodular(&[(0, 1, 1), (2, 3, -1), (1, 2, 1)]);
    let moved = example_cf().transformed(&x).unwrap();
    match criterion_check(&moved, None, &SearchConfig::default(), Execution::default()).unwrap() {
        Verdict::Proper { class, witness, symmetry, .. } => {
            assert_eq!(class, 1);
            let wi = witness.inverse().unwrap();
            assert_eq!(symmetry, wi.mul(&canonical_matrix(1).unwrap()).mul(&witness));
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn dirichlet_symmetries_have_irrational_factor() {
    let a = canonical_test_matrix();
    let cf = eigen_data(&is_hyperbolic(&a).unwrap(), None).unwrap();
    let hits = dirichlet_search(&cf, &a, 1, 4, Execution::default());
    assert!(!hits.is_empty());
    for h in hits {
        let r = symmetry_report(&cf, &h.matrix).unwrap().unwrap();
        assert_eq!(r.kind, SymmetryKind::Dirichlet);
        assert!(r.lambdas[0].as_rational().is_none());
        assert!(verify_identity(&cf, &r));
        assert_eq!(r.proper, Some(false));
    }
}

#[test]
fn properness_tests_agree_on_every_class_matrix() {
    let cf = example_cf();
    for i in 1..=10 {
        if let Some(r) = sailsym::symmetry::sigma_of(cf, &canonical_matrix(i).unwrap()).unwrap() {
            if r.kind != SymmetryKind::Dirichlet || !r.sigma.is_identity() {
                // Errors on disagreement.
                is_proper(cf, &r).unwrap();
            }
        }
    }
}

/// First monic quartic, by coefficient height, that is irreducible, totally
/// real, has unit constant term and only the trivial automorphism.
fn rigid_unit_quartic() -> IntPolynomial {
    for h in 1..=6i64 {
        for a3 in -h..=h {
            for a2 in -h..=h {
                for a1 in -h..=h {
                    if [a3, a2, a1].iter().map(|x| x.abs()).max() != Some(h) {
                        continue;
                    }
                    for a0 in [1, -1] {
                        let p = IntPolynomial::from_i64(&[a0, a1, a2, a3, 1]);
                        if make_field(&p).is_ok_and(|k| k.automorphisms().len() == 1) {
                            return p;
                        }
                    }
                }
            }
        }
    }
    panic!("no rigid quartic in range");
}

#[test]
fn rigid_field_is_not_in_any_class() {
    let p = rigid_unit_quartic();
    let cf = eigen_data(&is_hyperbolic(&companion(&p)).unwrap(), None).unwrap();
    let v = criterion_check(&cf, None, &SearchConfig::default(), Execution::default()).unwrap();
    assert_eq!(v, Verdict::NotInClass { witness: None, reason: NotInClassReason::NoAutomorphismPairing });
}

#[test]
fn permutation_cycles() {
    let p = Permutation::from_one_based(&[3, 4, 1, 2]).unwrap();
    assert_eq!(p.to_string(), "(1 3)(2 4)");
    assert_eq!(p.order(), 2);
    let q = Permutation::from_one_based(&[2, 3, 4, 1]).unwrap();
    assert_eq!(q.order(), 4);
    assert_eq!(q.compose(&q), p);
    assert!(Permutation::from_one_based(&[1, 1, 2, 3]).is_none());
}
