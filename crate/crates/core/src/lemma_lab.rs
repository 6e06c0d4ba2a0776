//! Desk-scale checks of the eleven-case basis lemma for quadruples
//! `z₁..z₄` exchanged in pairs by an integer involution `F`.
//!
//! Each case is a fixed 4×4 matrix of rational coefficients (stored in
//! quarters) expressing four candidate basis vectors through the `z`'s.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exec::{box_point, box_size, Execution};
use crate::intlat::{is_z4_basis, IntMatrix, RationalMatrix};
use crate::rational::{Int, Rat};
use crate::symmetry::{canonical_matrix, CLASS_COUNT};

pub const CASE_COUNT: usize = 11;

/// `QUARTERS[i][j][k]`: four times the coefficient of `z_{k+1}` in the
/// `j+1`-th vector of case `i+1`.
pub const QUARTERS: [[[i64; 4]; 4]; CASE_COUNT] = [
    [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [1, 1, 1, 1]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]],
    [[4, 0, 0, 0], [2, 2, 0, 0], [2, 0, 2, 0], [2, 0, 0, 2]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [2, 0, 2, 0], [1, 1, 1, 1]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [2, 0, 2, 0], [0, 2, 0, 2]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [2, -2, 2, 2]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [3, 1, -1, 1]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [0, 2, 0, 2]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [2, 0, 2, 0], [1, 2, -1, 2]],
    [[4, 0, 0, 0], [0, 4, 0, 0], [2, 0, 2, 0], [2, 1, 0, 2]],
    [[4, 0, 0, 0], [2, 2, 0, 0], [0, 0, 4, 0], [2, -2, 2, 2]],
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LemmaLabError {
    #[error("case index {0} is outside 1..11")]
    BadCase(usize),
    #[error("z vectors must be four integer 4-vectors")]
    Shape,
    #[error("z vectors are linearly dependent, F is not determined")]
    Singular,
    #[error("the map z1->z3, z2->z4, z3->z1, z4->z2 is not integral")]
    NonIntegralF,
    #[error("F does not exchange the pairs")]
    RelationsFail,
}

/// Four integer vectors with an integer `F` swapping `z₁ ↔ z₃`, `z₂ ↔ z₄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigInstance {
    #[serde(with = "crate::json::int_mat")]
    pub z: Vec<Vec<Int>>,
    pub f: IntMatrix,
}

fn swap_pairs(z: &[Vec<Int>]) -> Vec<Vec<Int>> {
    vec![z[2].clone(), z[3].clone(), z[0].clone(), z[1].clone()]
}

impl ConfigInstance {
    pub fn new(z: Vec<Vec<Int>>, f: IntMatrix) -> Result<Self, LemmaLabError> {
        if z.len() != 4 || z.iter().any(|v| v.len() != 4) || f.nrows() != 4 || f.ncols() != 4 {
            return Err(LemmaLabError::Shape);
        }
        if z.iter().zip(swap_pairs(&z)).any(|(a, b)| f.mul_vec(a) != b) {
            return Err(LemmaLabError::RelationsFail);
        }
        Ok(ConfigInstance { z, f })
    }

    /// The instance whose `F` is forced by a full-rank quadruple.
    pub fn from_quadruple(z: Vec<Vec<Int>>) -> Result<Self, LemmaLabError> {
        if z.len() != 4 || z.iter().any(|v| v.len() != 4) {
            return Err(LemmaLabError::Shape);
        }
        let to_rat = |vs: &[Vec<Int>]| -> Vec<Vec<Rat>> {
            vs.iter().map(|v| v.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect()
        };
        let zc = RationalMatrix::from_columns(&to_rat(&z));
        let zi = zc.inverse().ok_or(LemmaLabError::Singular)?;
        let f = RationalMatrix::from_columns(&to_rat(&swap_pairs(&z))).mul(&zi);
        let f = f.to_integer().ok_or(LemmaLabError::NonIntegralF)?;
        ConfigInstance::new(z, f)
    }

    /// `U·z` with `U·F·U⁻¹`.
    pub fn transported(&self, u: &IntMatrix) -> ConfigInstance {
        let ui = u.inverse().expect("unimodular transport");
        ConfigInstance { z: self.z.iter().map(|v| u.mul_vec(v)).collect(), f: u.mul(&self.f).mul(&ui) }
    }
}

fn check_case(i: usize) -> Result<&'static [[i64; 4]; 4], LemmaLabError> {
    if (1..=CASE_COUNT).contains(&i) {
        Ok(&QUARTERS[i - 1])
    } else {
        Err(LemmaLabError::BadCase(i))
    }
}

/// The four vectors of case `i`.
pub fn case_vectors(c: &ConfigInstance, i: usize) -> Result<Vec<Vec<Rat>>, LemmaLabError> {
    let q = check_case(i)?;
    Ok(q.iter()
        .map(|row| {
            (0..4)
                .map(|t| {
                    let s: Int = row.iter().zip(&c.z).map(|(&a, z)| Int::from(a) * &z[t]).sum();
                    Rat::new(s, Int::from(4))
                })
                .collect()
        })
        .collect())
}

/// Every case whose vectors form a basis of ℤ⁴, ascending.
pub fn classify_cases(c: &ConfigInstance) -> Vec<usize> {
    (1..=CASE_COUNT).filter(|&i| is_z4_basis(&case_vectors(c, i).unwrap())).collect()
}

fn det4(m: &[[i64; 4]; 4]) -> i128 {
    let a = |i: usize, j: usize| m[i][j] as i128;
    let minor = |c0: usize, c1: usize| a(2, c0) * a(3, c1) - a(2, c1) * a(3, c0);
    [(0usize, 1i128), (1, -1), (2, 1), (3, -1)]
        .iter()
        .map(|&(j, sign)| {
            let c: Vec<usize> = (0..4).filter(|&x| x != j).collect();
            sign * a(0, j)
                * (a(1, c[0]) * minor(c[1], c[2]) - a(1, c[1]) * minor(c[0], c[2]) + a(1, c[2]) * minor(c[0], c[1]))
        })
        .sum()
}

/// Machine-integer version of [`classify_cases`] for small quadruples.
fn classify_fast(z: &[[i64; 4]; 4]) -> Vec<usize> {
    (1..=CASE_COUNT)
        .filter(|&i| {
            let q = &QUARTERS[i - 1];
            let mut w = [[0i64; 4]; 4];
            for (j, row) in q.iter().enumerate() {
                for t in 0..4 {
                    w[j][t] = (0..4).map(|k| row[k] * z[k][t]).sum();
                }
            }
            w.iter().flatten().all(|x| x % 4 == 0) && det4(&w).abs() == 256
        })
        .collect()
}

/// Template for case `i`: the quadruple whose case vectors are the
/// standard basis. `None` when that quadruple is not integral, in which case
/// no integral quadruple can satisfy case `i`.
pub fn template(i: usize) -> Result<Option<ConfigInstance>, LemmaLabError> {
    let q = check_case(i)?;
    // Case vectors are the rows of C·Z (Z with rows z_k); C·Z = I gives Z = C⁻¹.
    let c = RationalMatrix::new(
        q.iter().map(|r| r.iter().map(|&x| Rat::new(Int::from(x), Int::from(4))).collect()).collect(),
    )
    .unwrap();
    let Some(z) = c.inverse().unwrap().to_integer() else {
        return Ok(None);
    };
    match ConfigInstance::from_quadruple(z.rows().to_vec()) {
        Ok(inst) => Ok(Some(inst)),
        Err(LemmaLabError::NonIntegralF) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Uniform-ish random unimodular matrix with entries in `[−bound, bound]`,
/// by rejection sampling.
pub fn random_unimodular(rng: &mut ChaCha8Rng, bound: i64) -> IntMatrix {
    loop {
        let mut m = [[0i64; 4]; 4];
        for x in m.iter_mut().flatten() {
            *x = rng.gen_range(-bound..=bound);
        }
        if det4(&m).abs() == 1 {
            return IntMatrix::from_i64(&m);
        }
    }
}

fn to_small(m: &IntMatrix) -> Option<[[i64; 4]; 4]> {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m.get(i, j).to_i64()?;
        }
    }
    Some(out)
}

/// First pair `(z₁, z₂)` in the sup-norm box, by increasing height of the
/// pair and then lexicographically, with `z₃ = F z₁`, `z₄ = F z₂` satisfying
/// some case.
pub fn find_configuration(f: &IntMatrix, bound: i64, exec: Execution) -> Option<ConfigInstance> {
    let fs = to_small(f)?;
    let apply = |v: &[i64; 4]| -> Option<[i64; 4]> {
        let mut out = [0i64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..4 {
                *o = o.checked_add(fs[i][j].checked_mul(v[j])?)?;
            }
        }
        Some(out)
    };
    let mut pts: Vec<[i64; 4]> = (0..box_size(4, bound))
        .map(|i| {
            let v = box_point(i, 4, bound);
            [v[0], v[1], v[2], v[3]]
        })
        .filter(|v| *v != [0; 4])
        .collect();
    pts.sort_by_key(|v| v.iter().map(|x| x.abs()).max());
    let images: Vec<Option<[i64; 4]>> = pts.iter().map(apply).collect();
    let n = pts.len();
    let height = |v: &[i64; 4]| v.iter().map(|x| x.abs()).max().unwrap();
    for h in 1..=bound {
        // Pairs whose larger height is exactly h.
        let limit = pts.partition_point(|v| height(v) <= h);
        let hit = exec.find_map_first(limit * limit, |idx| {
            let (a, b) = (idx / limit, idx % limit);
            if height(&pts[a]).max(height(&pts[b])) != h {
                return None;
            }
            let z = [pts[a], pts[b], images[a]?, images[b]?];
            if classify_fast(&z).is_empty() {
                return None;
            }
            Some(z)
        });
        if let Some(z) = hit {
            let z: Vec<Vec<Int>> = z.iter().map(|v| v.iter().map(|&x| Int::from(x)).collect()).collect();
            return ConfigInstance::new(z, f.clone()).ok();
        }
        if limit == n {
            break;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateStats {
    pub case: usize,
    /// False when no integral quadruple can satisfy the case as stated.
    pub realizable: bool,
    pub transports: usize,
    pub classified_correctly: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomInstance {
    /// Class whose matrix `F` is conjugate to.
    pub class: usize,
    pub f: IntMatrix,
    pub instance: Option<ConfigInstance>,
    pub cases: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub bound: i64,
    pub samples: usize,
    pub seed: u64,
    pub templates: Vec<TemplateStats>,
    pub random_instances: usize,
    pub random_with_case: usize,
    /// Occurrences of each case among the configurations found (index 0 is case 1).
    pub case_histogram: Vec<usize>,
    pub counterexamples: Vec<RandomInstance>,
    /// Transported templates scaled by 2: their z's are not primitive, so they
    /// violate the hypotheses; an empty case set there is not a lemma failure.
    pub hypothesis_violations: usize,
    pub hypothesis_violations_with_empty_cases: usize,
}

pub const TEMPLATE_TRANSPORTS: usize = 100;

/// The sweep: template transports for every case, then `samples` synthetic
/// involutions `F = U·G_j·U⁻¹` (random class `j`, random unimodular `U` with
/// entries bounded by `bound`), each searched for a configuration with
/// `z₁, z₂` in the box of radius `bound`. Deterministic for a given seed.
pub fn sweep(bound: i64, samples: usize, seed: u64, exec: Execution) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut templates = Vec::new();
    let mut hypothesis_violations = 0;
    let mut hypothesis_violations_with_empty_cases = 0;
    for i in 1..=CASE_COUNT {
        let t = template(i).expect("valid case");
        let us: Vec<IntMatrix> = (0..TEMPLATE_TRANSPORTS).map(|_| random_unimodular(&mut rng, bound)).collect();
        let Some(t) = t else {
            templates.push(TemplateStats { case: i, realizable: false, transports: 0, classified_correctly: 0 });
            continue;
        };
        let results: Vec<(bool, bool)> = exec.map(&us, |u| {
            let moved = t.transported(u);
            let ok = classify_cases(&moved).contains(&i);
            let two = Int::from(2);
            let scaled = ConfigInstance {
                z: moved.z.iter().map(|v| v.iter().map(|x| x * &two).collect()).collect(),
                f: moved.f.clone(),
            };
            (ok, classify_cases(&scaled).is_empty())
        });
        hypothesis_violations += results.len();
        hypothesis_violations_with_empty_cases += results.iter().filter(|r| r.1).count();
        templates.push(TemplateStats {
            case: i,
            realizable: true,
            transports: results.len(),
            classified_correctly: results.iter().filter(|r| r.0).count(),
        });
    }
    let classes: Vec<usize> = (1..=CLASS_COUNT).collect();
    let draws: Vec<(usize, IntMatrix)> = (0..samples)
        .map(|_| (*classes.choose(&mut rng).unwrap(), random_unimodular(&mut rng, bound)))
        .collect();
    let inner = Execution::Sequential;
    let results: Vec<RandomInstance> = exec.map(&draws, |(j, u)| {
        let ui = u.inverse().expect("unimodular");
        let f = u.mul(&canonical_matrix(*j).unwrap()).mul(&ui);
        let instance = find_configuration(&f, bound, inner);
        let cases = instance.as_ref().map(classify_cases).unwrap_or_default();
        RandomInstance { class: *j, f, instance, cases }
    });
    let mut case_histogram = vec![0; CASE_COUNT];
    for r in &results {
        for &c in &r.cases {
            case_histogram[c - 1] += 1;
        }
    }
    let random_with_case = results.iter().filter(|r| !r.cases.is_empty()).count();
    let counterexamples = results.into_iter().filter(|r| r.cases.is_empty()).collect();
    SweepReport {
        bound,
        samples,
        seed,
        templates,
        random_instances: samples,
        random_with_case,
        case_histogram,
        counterexamples,
        hypothesis_violations,
        hypothesis_violations_with_empty_cases,
    }
}

/// Whether `m` is a ±1 determinant integer matrix; shared helper for callers
/// that hold machine integers.
pub fn is_unimodular_small(m: &[[i64; 4]; 4]) -> bool {
    det4(m).abs() == 1
}
