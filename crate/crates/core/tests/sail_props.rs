mod oracles;

use std::sync::OnceLock;

use proptest::prelude::*;

use sailsym::cf_core::{canonical_test_matrix, eigen_data, is_hyperbolic, AlgebraicCF, Cone};
use sailsym::exec::Execution;
use sailsym::intlat::IntMatrix;
use sailsym::rational::rat;
use sailsym::sail::{convex_hull, locate_box, sail_patch, sail_patch_from_points, Point, SailPatch};

fn canonical_cf() -> AlgebraicCF {
    eigen_data(&is_hyperbolic(&canonical_test_matrix()).unwrap(), None).unwrap()
}

const ACTION_BOUND: i64 = 8;

/// Patches of every cone at [`ACTION_BOUND`], with their point sets.
fn action_patches() -> &'static Vec<(Cone, Vec<Point>, Option<SailPatch>)> {
    static CELL: OnceLock<Vec<(Cone, Vec<Point>, Option<SailPatch>)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let cf = canonical_cf();
        let located = locate_box(&cf, ACTION_BOUND, Execution::default());
        Cone::all()
            .map(|c| {
                let pts: Vec<Point> = located.iter().filter(|(_, k)| *k == c).map(|(p, _)| *p).collect();
                let patch = sail_patch_from_points(&cf, c, ACTION_BOUND, &rat(2, 1), &pts).ok();
                (c, pts, patch)
            })
            .collect()
    })
}

fn dot(n: &[i64; 4], p: &Point) -> i64 {
    (0..4).map(|k| n[k] * p[k]).sum()
}

fn apply(g: &IntMatrix, p: &Point) -> [i128; 4] {
    std::array::from_fn(|i| (0..4).map(|j| i128::try_from(g.get(i, j).clone()).unwrap() * p[j] as i128).sum())
}

#[test]
fn no_wall_hits_up_to_ten() {
    // locate_box panics on a wall hit.
    let n = locate_box(&canonical_cf(), 10, Execution::default()).len();
    assert_eq!(n, 21usize.pow(4) - 1);
}

#[test]
fn facet_hyperplanes_support_exactly() {
    for (_, pts, patch) in action_patches() {
        let Some(p) = patch else { continue };
        for f in &p.facets {
            assert!(f.offset > 0);
            assert!(pts.iter().all(|q| dot(&f.normal, q) >= f.offset));
            let on: Vec<usize> = (0..p.vertices.len()).filter(|&v| dot(&f.normal, &p.vertices[v]) == f.offset).collect();
            assert_eq!(on, f.vertices);
        }
        for (i, f) in p.facets.iter().enumerate() {
            if p.stable_flags[i] {
                assert!(f.vertices.iter().all(|&v| 2 * sailsym::sail::sup_norm(&p.vertices[v]) <= p.bound));
            }
        }
    }
}

#[test]
fn hull_is_idempotent() {
    let cf = canonical_cf();
    for c in Cone::all() {
        let Ok(p) = sail_patch(&cf, c, 4, &rat(2, 1), Execution::default()) else { continue };
        let again = sail_patch_from_points(&cf, c, 4, &rat(2, 1), &p.vertices).unwrap();
        assert_eq!(again.vertices, p.vertices);
    }
}

/// Symmetries of the canonical continued fraction: the matrix itself, its
/// inverse (Dirichlet) and a proper palindromic one found by the criterion search.
fn symmetries() -> Vec<IntMatrix> {
    let a = canonical_test_matrix();
    let s = IntMatrix::from_i64(&[[1, 6, 0, -6], [1, 2, 0, -3], [3, -4, 1, -2], [1, 3, 0, -4]]);
    vec![a.inverse().unwrap(), a, s]
}

/// Facets flagged stable or certified at the bound keep supporting the whole
/// image cone after a symmetry, and image vertices inside the box stay vertices.
#[test]
fn symmetry_action_on_flagged_facets() {
    let cf = canonical_cf();
    let patches = action_patches();
    let mut checked = 0;
    for g in symmetries() {
        assert!(sailsym::symmetry::sigma_of(&cf, &g).unwrap().is_some());
        let gi = g.inverse().unwrap();
        for (c, _, patch) in patches {
            let Some(p) = patch else { continue };
            for (i, f) in p.facets.iter().enumerate() {
                if !(p.stable_flags[i] || p.certified_flags[i]) {
                    continue;
                }
                let image = apply(&g, &p.vertices[f.vertices[0]]);
                let target = cf
                    .cone_locate(&image.iter().map(|&x| x.into()).collect::<Vec<_>>())
                    .unwrap();
                let (_, tpts, tpatch) = &patches[target.index()];
                // ⟨n, G⁻¹ q⟩ ≥ b for every q of the image cone.
                for q in tpts {
                    let back = apply(&gi, q);
                    let val: i128 = (0..4).map(|k| f.normal[k] as i128 * back[k]).sum();
                    assert!(val >= f.offset as i128, "cone {c} facet {i} under {g:?}");
                }
                let tpatch = tpatch.as_ref().unwrap();
                for &v in &f.vertices {
                    let w = apply(&g, &p.vertices[v]);
                    if w.iter().all(|x| x.abs() <= ACTION_BOUND as i128) {
                        let w: Point = w.map(|x| x as i64);
                        assert!(tpatch.vertices.contains(&w));
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_vertices_match_oracle(pts in prop::collection::vec(prop::array::uniform4(-3i64..=3), 5..40)) {
        let mut pts = pts;
        pts.sort();
        pts.dedup();
        match convex_hull(&pts) {
            Ok(h) => {
                let mut got: Vec<Point> = h.vertices.iter().map(|&i| pts[i]).collect();
                got.sort();
                let mut want = oracles::extreme_points(&pts);
                want.sort();
                prop_assert_eq!(got, want);
                for f in &h.facets {
                    prop_assert!(pts.iter().all(|q| dot(&f.normal, q) <= f.offset));
                }
            }
            Err(_) => prop_assert!(oracles::affine_rank(&pts) < 4),
        }
    }
}
