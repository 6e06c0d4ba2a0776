use proptest::prelude::*;

use sailsym::numfield::{make_field, sturm_count, FieldElement, IntPolynomial, NumberField};
use sailsym::rational::{rat, Rat};

fn example_field() -> NumberField {
    make_field(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])).unwrap()
}

fn element(k: &NumberField, c: &[(i64, i64)]) -> FieldElement {
    k.element(c.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-12i64..=12, 1i64..=6), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in coords(), b in coords(), c in coords()) {
        let k = example_field();
        let (a, b, c) = (element(&k, &a), element(&k, &b), element(&k, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism_on_intervals(a in coords(), b in coords(), pos in 0usize..4) {
        let k = example_field();
        let (a, b) = (element(&k, &a), element(&k, &b));
        let eps = rat(1, 1 << 20);
        let prod = (&a * &b).embed_eval(pos, &eps);
        let iprod = a.embed_eval(pos, &eps).mul(&b.embed_eval(pos, &eps));
        prop_assert!(prod.overlaps(&iprod));
        let sum = (&a + &b).embed_eval(pos, &eps);
        prop_assert!(sum.overlaps(&a.embed_eval(pos, &eps).add(&b.embed_eval(pos, &eps))));
    }

    /// Random monic quartics: whenever a field is accepted, Sturm counts all
    /// four roots and refined isolating intervals stay disjoint.
    #[test]
    fn accepted_fields_are_certified(c in prop::collection::vec(-9i64..=9, 4)) {
        let p = IntPolynomial::from_i64(&[c[0], c[1], c[2], c[3], 1]);
        let Ok(k) = make_field(&p) else { return Ok(()) };
        prop_assert_eq!(sturm_count(&p), 4);
        let eps: Rat = rat(1, 1 << 30);
        let refined: Vec<_> = k.roots().iter().map(|r| r.refine_to(&eps).interval).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                prop_assert!(!refined[i].overlaps(&refined[j]));
            }
        }
        prop_assert_eq!(k.theta().min_poly(), p.clone());
        for aut in k.automorphisms() {
            prop_assert_eq!(aut.image.min_poly(), p.clone());
            for (i, &j) in aut.root_map.iter().enumerate() {
                let iv = aut.image.embed_eval(i, &eps);
                prop_assert!(iv.overlaps(&k.roots()[j].refine_to(&eps).interval));
            }
        }
    }
}

#[test]
fn example_field_is_not_normal() {
    let k = example_field();
    assert_eq!(k.automorphisms().len(), 2);
    assert_eq!(sturm_count(k.minpoly()), 4);
}

#[test]
fn reducible_and_complex_inputs_are_rejected() {
    // (x² − 2)(x² − 3) and x⁴ + 1.
    assert!(make_field(&IntPolynomial::from_i64(&[6, 0, -5, 0, 1])).is_err());
    assert!(make_field(&IntPolynomial::from_i64(&[1, 0, 0, 0, 1])).is_err());
}
