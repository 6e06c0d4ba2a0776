//! The class criterion: a continued fraction has a proper palindromic
//! symmetry exactly when some unimodular `X` moves it into one of the ten
//! classes.
//!
//! With a witness `X` the test is exact. Without one, the search runs over
//! proper symmetries `F` of order 2 (the integer points of the lattice of
//! matrices with `F·v ∈ K·ρ(v)` for an involution ρ) and over unimodular
//! intertwiners `X` with `X·F = G_i·X`, both by increasing coefficient
//! height up to a bound. Exhausting the bound gives `Unknown`.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::classes::{admissible_labelings, canonical_matrix, class_membership_any, CLASS_COUNT};
use super::{mu_condition, sigma_of, symmetry_report, SymmetryError, SymmetryKind, SymmetryReport};
use crate::cf_core::{poly_of_matrix, AlgebraicCF};
use crate::exec::{box_point, box_size, Execution};
use crate::intlat::{integer_kernel, size_reduce, IntMatrix};
use crate::linalg;
use crate::numfield::{Automorphism, FieldElement, Labeling};
use crate::rational::{lcm_of_denominators, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Coefficient bound for both lattice searches.
    pub bound: i64,
    /// Hard cap on intertwiner candidates examined.
    pub max_candidates: usize,
    /// Proper symmetries tried per involution.
    pub max_symmetries: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { bound: 2, max_candidates: 2_000_000, max_symmetries: 16 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub bound: i64,
    pub involutions: usize,
    pub proper_symmetries: usize,
    pub candidates: usize,
    pub cap_reached: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotInClassReason {
    /// The witness moves the continued fraction into none of the classes.
    WitnessFailsAllClasses,
    /// K has no involutive automorphism, so no labeling satisfies the σ₃
    /// package and no palindromic symmetry exists.
    NoAutomorphismPairing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Proper {
        class: usize,
        witness: IntMatrix,
        /// `X⁻¹·G_i·X`, a proper symmetry of the input.
        symmetry: IntMatrix,
        /// Labeling of the transformed continued fraction under which the class relations hold.
        labeling: Labeling,
        report: SymmetryReport,
        stats: Option<SearchStats>,
    },
    NotInClass {
        witness: Option<IntMatrix>,
        reason: NotInClassReason,
    },
    Unknown {
        stats: SearchStats,
    },
}

impl Verdict {
    pub fn class(&self) -> Option<usize> {
        match self {
            Verdict::Proper { class, .. } => Some(*class),
            _ => None,
        }
    }
}

pub fn criterion_check(
    cf: &AlgebraicCF,
    witness: Option<&IntMatrix>,
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<Verdict, SymmetryError> {
    if let Some(x) = witness {
        return Ok(with_witness(cf, x)?.unwrap_or(Verdict::NotInClass {
            witness: Some(x.clone()),
            reason: NotInClassReason::WitnessFailsAllClasses,
        }));
    }
    let pairings = admissible_labelings(cf);
    if pairings.is_empty() {
        return Ok(Verdict::NotInClass { witness: None, reason: NotInClassReason::NoAutomorphismPairing });
    }
    if let Some(v) = with_witness(cf, &IntMatrix::identity(4))? {
        return Ok(v);
    }
    let mut stats = SearchStats { bound: cfg.bound, involutions: pairings.len(), ..Default::default() };
    for (_, rho) in &pairings {
        for f in proper_symmetries(cf, rho, cfg) {
            stats.proper_symmetries += 1;
            for i in 1..=CLASS_COUNT {
                let g = canonical_matrix(i)?;
                if let Some(x) = find_intertwiner(&f, &g, cfg, &mut stats, exec) {
                    if let Some(Verdict::Proper { class, witness, symmetry, labeling, report, .. }) =
                        with_witness(cf, &x)?
                    {
                        return Ok(Verdict::Proper { class, witness, symmetry, labeling, report, stats: Some(stats) });
                    }
                }
                if stats.cap_reached {
                    return Ok(Verdict::Unknown { stats });
                }
            }
        }
    }
    Ok(Verdict::Unknown { stats })
}

fn with_witness(cf: &AlgebraicCF, x: &IntMatrix) -> Result<Option<Verdict>, SymmetryError> {
    if !x.is_unimodular() {
        return Err(SymmetryError::NotUnimodular(x.det()));
    }
    let moved = cf.transformed(x)?;
    for i in 1..=CLASS_COUNT {
        let Some(labeling) = class_membership_any(&moved, i)? else {
            continue;
        };
        let xi = x.inverse().expect("unimodular");
        let g = xi.mul(&canonical_matrix(i)?).mul(x);
        let report = symmetry_report(cf, &g)?.ok_or_else(|| {
            SymmetryError::LemmaViolation(format!("class {i} member without G_{i} as a symmetry"))
        })?;
        if report.kind != SymmetryKind::Palindromic || report.proper != Some(true) || report.order() != 2 {
            return Err(SymmetryError::LemmaViolation(format!("G_{i} is not a proper order-2 symmetry of a class member")));
        }
        return Ok(Some(Verdict::Proper { class: i, witness: x.clone(), symmetry: g, labeling, report, stats: None }));
    }
    Ok(None)
}

/// ℤ-basis of the integer matrices `F` with `F·v = μ·ρ(v)` for some `μ ∈ K`.
pub fn twisted_lattice(cf: &AlgebraicCF, rho: &Automorphism) -> Vec<IntMatrix> {
    let v = cf.basis();
    let k = cf.field();
    // Coordinates of x in the basis v solve Bᵀc = x.
    let bt: Vec<Vec<Rat>> = (0..4).map(|i| (0..4).map(|j| v[j].coords()[i].clone()).collect()).collect();
    let in_basis = |x: &FieldElement| linalg::solve(&bt, x.coords()).expect("v is a basis");
    let rv: Vec<FieldElement> = v.iter().map(|x| rho.apply(x)).collect();
    // Column m of `a` is the row-major matrix of μ = θ^m.
    let cols: Vec<Vec<Rat>> = (0..4)
        .map(|m| {
            let mu = k.theta().pow(m as u32);
            rv.iter().flat_map(|r| in_basis(&(&mu * r))).collect()
        })
        .collect();
    let d = lcm_of_denominators(cols.iter().flatten());
    let dr = Rat::from_integer(d);
    let at: Vec<Vec<Int>> = cols.iter().map(|c| c.iter().map(|x| (x * &dr).to_integer()).collect()).collect();
    let left = integer_kernel(&IntMatrix::new(at).unwrap());
    let mut basis = integer_kernel(&IntMatrix::new(left).unwrap());
    size_reduce(&mut basis);
    basis.iter().map(|b| IntMatrix::new(b.chunks(4).map(<[Int]>::to_vec).collect()).unwrap()).collect()
}

fn combine(basis: &[IntMatrix], c: &[i64]) -> IntMatrix {
    let rows = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| basis.iter().zip(c).map(|(b, &ck)| b.get(i, j) * Int::from(ck)).sum())
                .collect()
        })
        .collect();
    IntMatrix::new(rows).unwrap()
}

/// Unimodular proper order-2 symmetries with `F·v ∈ K·ρ(v)`, by coefficient height.
fn proper_symmetries(cf: &AlgebraicCF, rho: &Automorphism, cfg: &SearchConfig) -> Vec<IntMatrix> {
    let basis = twisted_lattice(cf, rho);
    let mut out = Vec::new();
    for h in 1..=cfg.bound {
        for idx in 0..box_size(4, h) {
            let c = box_point(idx, 4, h);
            if c.iter().map(|x| x.abs()).max() != Some(h) {
                continue;
            }
            let f = combine(&basis, &c);
            if !f.is_unimodular() {
                continue;
            }
            let Ok(Some(r)) = sigma_of(cf, &f) else { continue };
            if r.order() == 2 && mu_condition(&r).unwrap_or(false) {
                out.push(f);
                if out.len() >= cfg.max_symmetries {
                    return out;
                }
            }
        }
    }
    out
}

fn det4(m: &[[i64; 4]; 4]) -> i128 {
    let a = |i: usize, j: usize| m[i][j] as i128;
    let minor = |c0: usize, c1: usize| a(2, c0) * a(3, c1) - a(2, c1) * a(3, c0);
    let mut det = 0i128;
    for (j, sign) in [(0usize, 1i128), (1, -1), (2, 1), (3, -1)] {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let m3 = a(1, cols[0]) * minor(cols[1], cols[2]) - a(1, cols[1]) * minor(cols[0], cols[2])
            + a(1, cols[2]) * minor(cols[0], cols[1]);
        det += sign * a(0, j) * m3;
    }
    det
}

/// A unimodular `X` with `X·F = G·X`, searched by coefficient height over a
/// reduced basis of the integer intertwiners.
fn find_intertwiner(
    f: &IntMatrix,
    g: &IntMatrix,
    cfg: &SearchConfig,
    stats: &mut SearchStats,
    exec: Execution,
) -> Option<IntMatrix> {
    // Unknown X in row-major order; equation (a, b) of X·F − G·X = 0.
    let mut rows = vec![vec![Int::zero(); 16]; 16];
    for a in 0..4 {
        for b in 0..4 {
            let eq = &mut rows[4 * a + b];
            for c in 0..4 {
                eq[4 * a + c] += f.get(c, b);
                eq[4 * c + b] -= g.get(a, c);
            }
        }
    }
    let mut basis = integer_kernel(&IntMatrix::new(rows).unwrap());
    if basis.is_empty() {
        return None;
    }
    size_reduce(&mut basis);
    let small: Vec<Vec<i64>> = basis.iter().map(|b| b.iter().map(|x| x.to_i64()).collect::<Option<_>>()).collect::<Option<_>>()?;
    let d = small.len();
    for h in 1..=cfg.bound {
        let size = box_size(d, h);
        let budget = cfg.max_candidates.saturating_sub(stats.candidates);
        let n = size.min(budget);
        let hit = exec.find_map_first(n, |idx| {
            let c = box_point(idx, d, h);
            if c.iter().map(|x| x.abs()).max() != Some(h) {
                return None;
            }
            let mut m = [[0i64; 4]; 4];
            for (ck, b) in c.iter().zip(&small) {
                if *ck == 0 {
                    continue;
                }
                for (t, x) in b.iter().enumerate() {
                    m[t / 4][t % 4] = m[t / 4][t % 4].checked_add(ck.checked_mul(*x)?)?;
                }
            }
            (det4(&m).abs() == 1).then_some((idx, m))
        });
        match hit {
            Some((idx, m)) => {
                stats.candidates += idx + 1;
                return Some(IntMatrix::from_i64(&m));
            }
            None => stats.candidates += n,
        }
        if n < size {
            stats.cap_reached = true;
            return None;
        }
    }
    None
}

/// A Dirichlet symmetry `p(A)` found by the bounded polynomial search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirichletHit {
    /// Coefficients of `p`, constant term first.
    pub coeffs: Vec<i64>,
    pub matrix: IntMatrix,
    /// The unit `λ` with `p(A)·v = λ·v`.
    pub unit: FieldElement,
}

/// Unimodular `p(A) ≠ ±I` over integer polynomials of degree ≤ 3 with
/// coefficients in `[−bound, bound]`, by height then lexicographically.
/// Best effort: this is not a unit-group computation.
pub fn dirichlet_search(cf: &AlgebraicCF, a: &IntMatrix, bound: i64, max_hits: usize, exec: Execution) -> Vec<DirichletHit> {
    let id = IntMatrix::identity(4);
    let mut hits = Vec::new();
    for h in 1..=bound {
        let found: Vec<DirichletHit> = exec
            .map_range(box_size(4, h), |idx| {
                let c = box_point(idx, 4, h);
                if c.iter().map(|x| x.abs()).max() != Some(h) {
                    return None;
                }
                let coeffs: Vec<Int> = c.iter().rev().map(|&x| Int::from(x)).collect();
                let m = poly_of_matrix(&coeffs, a);
                if !m.is_unimodular() || m == id || m == id.neg() {
                    return None;
                }
                let r = sigma_of(cf, &m).ok()??;
                r.sigma.is_identity().then(|| DirichletHit {
                    coeffs: c.iter().rev().copied().collect(),
                    matrix: m,
                    unit: r.lambdas[0].clone(),
                })
            })
            .into_iter()
            .flatten()
            .collect();
        for hit in found {
            hits.push(hit);
            if hits.len() >= max_hits {
                return hits;
            }
        }
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::super::tests::example_cf;
    use super::*;

    #[test]
    fn determinant_helper() {
        let m = [[2, 0, 1, 0], [1, 3, 2, 0], [1, 1, 2, 0], [0, 0, 0, -1]];
        assert_eq!(det4(&m), -6);
        assert_eq!(det4(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), 1);
    }

    #[test]
    fn example_identity_witness() {
        let cf = example_cf();
        let v = criterion_check(&cf, Some(&IntMatrix::identity(4)), &SearchConfig::default(), Execution::Sequential)
            .unwrap();
        assert_eq!(v.class(), Some(1));
        if let Verdict::Proper { symmetry, .. } = v {
            assert_eq!(symmetry, canonical_matrix(1).unwrap());
        }
    }

    #[test]
    fn twisted_lattice_contains_g1() {
        let cf = example_cf();
        let k = cf.field();
        let tau = k.find_conjugate(cf.embedding(0), cf.embedding(2)).unwrap();
        let basis = twisted_lattice(&cf, &tau);
        assert_eq!(basis.len(), 4);
        // G1 has integer coordinates in the basis.
        let cols: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| b.rows().iter().flatten().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let target: Vec<Rat> =
            canonical_matrix(1).unwrap().rows().iter().flatten().map(|x| Rat::from_integer(x.clone())).collect();
        let a: Vec<Vec<Rat>> = (0..16).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let sol = linalg::solve(&a, &target).unwrap();
        assert!(sol.iter().all(|x| x.is_integer()));
    }
}
