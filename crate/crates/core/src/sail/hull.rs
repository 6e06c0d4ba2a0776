//! Exact incremental convex hull of integer points in ℤ⁴ (beneath-beyond).
//!
//! All predicates are integer determinants and dot products in `i128`, so
//! there is no rounding anywhere. Points coplanar with a facet are treated as
//! not visible; non-simplicial facets are recovered afterwards by merging
//! simplices that share a primitive supporting hyperplane.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use crate::linalg;
use crate::rational::Rat;

pub type Point = [i64; 4];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error("points span an affine subspace of dimension {0} < 4")]
    NotFullDimensional(usize),
}

/// A facet of the hull: outward primitive normal `n` with `⟨n, x⟩ ≤ offset`
/// on the hull, and the indices of the extreme points lying on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: [i64; 4],
    pub offset: i64,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Hull {
    /// Indices of extreme points, ascending.
    pub vertices: Vec<usize>,
    pub facets: Vec<HullFacet>,
}

struct Simplex {
    verts: [usize; 4],
    normal: [i128; 4],
    offset: i128,
    alive: bool,
}

fn sub(a: &Point, b: &Point) -> [i128; 4] {
    std::array::from_fn(|k| a[k] as i128 - b[k] as i128)
}

fn dot(n: &[i128; 4], p: &Point) -> i128 {
    (0..4).map(|k| n[k] * p[k] as i128).sum()
}

fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Normal of the hyperplane through four points (zero if degenerate).
fn hyperplane_normal(p: &[Point], v: [usize; 4]) -> [i128; 4] {
    let rows = [sub(&p[v[1]], &p[v[0]]), sub(&p[v[2]], &p[v[0]]), sub(&p[v[3]], &p[v[0]])];
    std::array::from_fn(|k| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        let m = std::array::from_fn(|i| std::array::from_fn(|j| rows[i][cols[j]]));
        let d = det3(m);
        if k % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

fn affine_rank(points: &[Point], idx: &[usize]) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = idx[1..]
        .iter()
        .map(|&i| sub(&points[i], &points[idx[0]]).iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    linalg::rank(&rows)
}

fn primitive(n: [i128; 4], d: i128) -> ([i64; 4], i64) {
    let g = n.iter().fold(d.abs(), |g, x| g.gcd(x));
    let g = if g == 0 { 1 } else { g };
    (n.map(|x| (x / g) as i64), (d / g) as i64)
}

pub fn convex_hull(points: &[Point]) -> Result<Hull, HullError> {
    // Initial simplex: greedily extend an affinely independent set.
    let mut base: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if base.len() == 5 {
            break;
        }
        let mut cand = base.clone();
        cand.push(i);
        if affine_rank(points, &cand) == cand.len() - 1 {
            base = cand;
        }
    }
    if base.len() < 5 {
        return Err(HullError::NotFullDimensional(base.len().saturating_sub(1)));
    }
    // Five times the centroid of the initial simplex, strictly interior forever.
    let c5: [i128; 4] = std::array::from_fn(|k| base.iter().map(|&i| points[i][k] as i128).sum());
    let outward = |verts: [usize; 4]| -> Simplex {
        let mut n = hyperplane_normal(points, verts);
        let mut d = dot(&n, &points[verts[0]]);
        let c: i128 = (0..4).map(|k| n[k] * c5[k]).sum();
        if c > 5 * d {
            n = n.map(|x| -x);
            d = -d;
        }
        Simplex { verts, normal: n, offset: d, alive: true }
    };
    let mut simplices: Vec<Simplex> = Vec::new();
    let mut ridges: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
    let add = |s: Simplex, simplices: &mut Vec<Simplex>, ridges: &mut HashMap<[usize; 3], Vec<usize>>| {
        let id = simplices.len();
        for r in ridges_of(&s.verts) {
            ridges.entry(r).or_default().push(id);
        }
        simplices.push(s);
    };
    for skip in 0..5 {
        let v: Vec<usize> = (0..5).filter(|&k| k != skip).map(|k| base[k]).collect();
        let mut verts = [v[0], v[1], v[2], v[3]];
        verts.sort();
        add(outward(verts), &mut simplices, &mut ridges);
    }
    // Far points first: they are most likely extreme and make later points cheap to reject.
    let mut order: Vec<usize> = (0..points.len()).filter(|i| !base.contains(i)).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(points[i].iter().map(|x| x.abs()).max().unwrap_or(0)), points[i]));
    for q in order {
        let visible: Vec<usize> = (0..simplices.len())
            .filter(|&f| simplices[f].alive && dot(&simplices[f].normal, &points[q]) > simplices[f].offset)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            for r in ridges_of(&simplices[f].verts) {
                let other = ridges[&r].iter().copied().find(|&g| g != f && simplices[g].alive);
                if let Some(g) = other {
                    if !visible.contains(&g) {
                        horizon.push(r);
                    }
                }
            }
        }
        for &f in &visible {
            simplices[f].alive = false;
            for r in ridges_of(&simplices[f].verts) {
                if let Some(list) = ridges.get_mut(&r) {
                    list.retain(|&g| g != f);
                }
            }
        }
        for r in horizon {
            let mut verts = [r[0], r[1], r[2], q];
            verts.sort();
            add(outward(verts), &mut simplices, &mut ridges);
        }
    }
    // Merge simplices by supporting hyperplane.
    let mut merged: BTreeMap<([i64; 4], i64), Vec<usize>> = BTreeMap::new();
    for s in simplices.iter().filter(|s| s.alive) {
        let key = primitive(s.normal, s.offset);
        merged.entry(key).or_default().extend(s.verts);
    }
    let mut incident: BTreeMap<usize, Vec<[i64; 4]>> = BTreeMap::new();
    for ((n, _), verts) in merged.iter_mut() {
        verts.sort();
        verts.dedup();
        for &v in verts.iter() {
            incident.entry(v).or_default().push(*n);
        }
    }
    let vertices: Vec<usize> = incident
        .iter()
        .filter(|(_, normals)| {
            let rows: Vec<Vec<Rat>> =
                normals.iter().map(|n| n.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
            linalg::rank(&rows) == 4
        })
        .map(|(&v, _)| v)
        .collect();
    let facets = merged
        .into_iter()
        .map(|((normal, offset), verts)| HullFacet {
            normal,
            offset,
            vertices: verts.into_iter().filter(|v| vertices.binary_search(v).is_ok()).collect(),
        })
        .collect();
    Ok(Hull { vertices, facets })
}

fn ridges_of(v: &[usize; 4]) -> [[usize; 3]; 4] {
    [[v[1], v[2], v[3]], [v[0], v[2], v[3]], [v[0], v[1], v[3]], [v[0], v[1], v[2]]]
}
