//! Truncated Klein sails: lattice points of one cone, their exact convex
//! hull, and the facets of that hull seen from the apex.
//!
//! The patch for bound `N` is built from `P = {p ∈ C ∩ ℤ⁴ \ 0 : ‖p‖∞ ≤ N}`.
//! `vertices` are all extreme points of `conv(P)`. `facets` are the facets
//! whose inward normal lies in the interior of the dual cone; these are
//! bounded, face the origin, and together approximate the sail.

pub mod hull;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cf_core::{AlgebraicCF, CfError, Cone};
use crate::exec::{box_point, box_size, Execution};
use crate::intlat::{integer_kernel, size_reduce, IntMatrix};
use crate::rational::{Int, Interval, Rat};

pub use hull::{convex_hull, HullError, Point};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SailError {
    #[error("no lattice points of the cone within the bound, or too few to span ℝ⁴")]
    EmptyPatch,
    #[error("G has no eigenvalue 1")]
    NoFixedLine,
    #[error("no fixed integer point found in a cone interior within the search height")]
    NoInteriorFixedPoint,
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// Lattice points of `cone` with sup-norm at most `n`, lexicographic.
pub fn enumerate_cone_points(cf: &AlgebraicCF, cone: Cone, n: i64, exec: Execution) -> Vec<Point> {
    let located = locate_box(cf, n, exec);
    located.into_iter().filter(|(_, c)| *c == cone).map(|(p, _)| p).collect()
}

/// Every nonzero point of the box with its cone, lexicographic. Panics on a
/// wall hit, which cannot happen for a continued fraction built from a basis.
pub fn locate_box(cf: &AlgebraicCF, n: i64, exec: Execution) -> Vec<(Point, Cone)> {
    exec.map_range(box_size(4, n), |idx| {
        let v = box_point(idx, 4, n);
        let p: Point = [v[0], v[1], v[2], v[3]];
        if p == [0; 4] {
            return None;
        }
        let c = cf.cone_locate_i64(&p).expect("integer point on an irrational wall");
        Some((p, c))
    })
    .into_iter()
    .flatten()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SailFacet {
    /// Indices into the patch's vertex list.
    pub vertices: Vec<usize>,
    /// Inward primitive normal: `⟨normal, p⟩ ≥ offset` for every point of the patch.
    pub normal: [i64; 4],
    pub offset: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SailPatch {
    pub cone: Cone,
    pub bound: i64,
    #[serde(with = "crate::json::rat")]
    pub margin: Rat,
    pub point_count: usize,
    pub vertices: Vec<Point>,
    /// Whether each vertex lies on one of `facets`.
    pub on_sail: Vec<bool>,
    pub facets: Vec<SailFacet>,
    /// All facet vertices have sup-norm at most `bound / margin`.
    pub stable_flags: Vec<bool>,
    /// The region of the cone below the facet hyperplane lies inside the box,
    /// so the facet is a facet of the full Klein polyhedron.
    pub certified_flags: Vec<bool>,
    pub hull_facet_count: usize,
}

impl SailPatch {
    pub fn sail_vertices(&self) -> Vec<Point> {
        self.vertices.iter().zip(&self.on_sail).filter(|(_, &s)| s).map(|(p, _)| *p).collect()
    }
}

pub fn sail_patch(cf: &AlgebraicCF, cone: Cone, n: i64, margin: &Rat, exec: Execution) -> Result<SailPatch, SailError> {
    let points = enumerate_cone_points(cf, cone, n, exec);
    sail_patch_from_points(cf, cone, n, margin, &points)
}

/// Patch built from an explicit point set of the cone.
pub fn sail_patch_from_points(
    cf: &AlgebraicCF,
    cone: Cone,
    n: i64,
    margin: &Rat,
    points: &[Point],
) -> Result<SailPatch, SailError> {
    let hull = convex_hull(points).map_err(|_| SailError::EmptyPatch)?;
    let vertices: Vec<Point> = hull.vertices.iter().map(|&i| points[i]).collect();
    let vindex = |i: usize| hull.vertices.binary_search(&i).expect("facet vertex is extreme");
    let mut facets = Vec::new();
    for f in &hull.facets {
        let inward: Vec<Int> = f.normal.iter().map(|&x| Int::from(-x)).collect();
        let in_dual = (0..4).all(|i| cf.covector_sign(i, &inward) == cone.0[i]);
        if in_dual {
            let mut vs: Vec<usize> = f.vertices.iter().map(|&i| vindex(i)).collect();
            vs.sort();
            facets.push(SailFacet { vertices: vs, normal: f.normal.map(|x| -x), offset: -f.offset });
        }
    }
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices).then(a.normal.cmp(&b.normal)));
    let mut on_sail = vec![false; vertices.len()];
    for f in &facets {
        for &v in &f.vertices {
            on_sail[v] = true;
        }
    }
    let stable_flags = facets
        .iter()
        .map(|f| {
            f.vertices.iter().all(|&v| {
                let norm = vertices[v].iter().map(|x| x.abs()).max().unwrap();
                Rat::from_integer(norm.into()) * margin <= Rat::from_integer(n.into())
            })
        })
        .collect();
    let certified_flags = facets.iter().map(|f| region_fits_box(cf, cone, f, n)).collect();
    Ok(SailPatch {
        cone,
        bound: n,
        margin: margin.clone(),
        point_count: points.len(),
        vertices,
        on_sail,
        facets,
        stable_flags,
        certified_flags,
        hull_facet_count: hull.facets.len(),
    })
}

/// Whether `C ∩ {⟨n, x⟩ ≤ b}` lies in the sup-norm box of radius `n_box`.
///
/// The region is the simplex spanned by 0 and `t_i s_i l_i` with
/// `t_i = b / ⟨n, s_i l_i⟩`, so it suffices that `b·|l_ik| ≤ N·⟨n, s_i l_i⟩`
/// for every vertex coordinate. Decided with intervals; an undecided
/// comparison counts as failure.
fn region_fits_box(cf: &AlgebraicCF, cone: Cone, f: &SailFacet, n_box: i64) -> bool {
    let eps = Rat::new(Int::one(), Int::one() << 80u32);
    let b = Rat::from_integer(f.offset.into());
    let nb = Rat::from_integer(n_box.into());
    let field = cf.field();
    let covector = f
        .normal
        .iter()
        .zip(cf.basis())
        .fold(field.zero(), |acc, (x, e)| &acc + &e.scale(&Rat::from_integer((*x).into())));
    (0..4).all(|i| {
        let pos = cf.embedding(i);
        let mut denom = covector.embed_eval(pos, &eps);
        if cone.0[i] < 0 {
            denom = denom.neg();
        }
        let rhs = denom.scale(&nb);
        cf.basis().iter().all(|e| {
            let v = e.embed_eval(pos, &eps);
            let abs_hi = v.lo.abs().max(v.hi.abs());
            let lhs = Interval::point(abs_hi).scale(&b);
            lhs.hi <= rhs.lo
        })
    })
}

/// Fixed integer point of `G` together with its cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub cone: Cone,
    #[serde(with = "crate::json::int_vec")]
    pub point: Vec<Int>,
    /// Dimension of ker(G − I) over ℚ.
    pub kernel_dim: usize,
}

/// A primitive integer vector with `G v = v` in some cone interior. When
/// ker(G − I) has dimension above one, integer combinations of a reduced
/// kernel basis with coefficients up to `height` are scanned by increasing height.
pub fn fixed_point_in_cone(cf: &AlgebraicCF, g: &IntMatrix, height: i64) -> Result<FixedPoint, SailError> {
    let n = g.nrows();
    let shifted: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { g.get(i, j) - Int::one() } else { g.get(i, j).clone() }).collect())
        .collect();
    let mut basis = integer_kernel(&IntMatrix::new(shifted).unwrap());
    if basis.is_empty() {
        return Err(SailError::NoFixedLine);
    }
    size_reduce(&mut basis);
    let d = basis.len();
    for h in 1..=height.max(1) {
        for idx in 0..box_size(d, h) {
            let c = box_point(idx, d, h);
            if c.iter().map(|x| x.abs()).max() != Some(h) {
                continue;
            }
            let mut v = vec![Int::zero(); n];
            for (ck, b) in c.iter().zip(&basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += Int::from(*ck) * y;
                }
            }
            let g_all = v.iter().fold(Int::zero(), |a, x| a.gcd(x));
            if g_all.is_zero() || !g_all.is_one() {
                continue;
            }
            if let Ok(cone) = cf.cone_locate(&v) {
                return Ok(FixedPoint { cone, point: v, kernel_dim: d });
            }
        }
    }
    Err(SailError::NoInteriorFixedPoint)
}

pub fn sup_norm(p: &Point) -> i64 {
    p.iter().map(|x| x.abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_core::{canonical_test_matrix, eigen_data, is_hyperbolic};

    fn canonical_cf() -> AlgebraicCF {
        eigen_data(&is_hyperbolic(&canonical_test_matrix()).unwrap(), None).unwrap()
    }

    #[test]
    fn cones_partition_the_box() {
        let cf = canonical_cf();
        let n = 2;
        let total: usize = Cone::all()
            .map(|c| enumerate_cone_points(&cf, c, n, Execution::Sequential).len())
            .sum();
        assert_eq!(total, 5usize.pow(4) - 1);
    }

    #[test]
    fn patch_basic_properties() {
        let cf = canonical_cf();
        let e1 = cf.cone_locate_i64(&[1, 0, 0, 0]).unwrap();
        let patch = sail_patch(&cf, e1, 3, &Rat::from_integer(2.into()), Execution::Parallel).unwrap();
        assert!(!patch.facets.is_empty());
        for f in &patch.facets {
            assert!(f.offset > 0);
        }
        for v in &patch.vertices {
            let twice = v.map(|x| 2 * x);
            assert!(!patch.vertices.contains(&twice) || sup_norm(v) == 0);
        }
    }

    #[test]
    fn fixed_points() {
        let cf = canonical_cf();
        let id = IntMatrix::identity(4);
        let fp = fixed_point_in_cone(&cf, &id, 2).unwrap();
        assert_eq!(fp.kernel_dim, 4);
        assert_eq!(fixed_point_in_cone(&cf, &id.neg(), 2), Err(SailError::NoFixedLine));
    }
}
