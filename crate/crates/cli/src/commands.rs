//! One function per subcommand; each returns the rendered report and its exit code.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use sailsym::cf_core::{eigen_data, is_hyperbolic, AlgebraicCF, Cone, HyperbolicError};
use sailsym::exec::Execution;
use sailsym::intlat::IntMatrix;
use sailsym::lemma_lab::{classify_cases, sweep, ConfigInstance};
use sailsym::numfield::{make_field, IntPolynomial, Labeling, NumberField};
use sailsym::rational::{fmt_rat, parse_rat, rat, Int, Rat};
use sailsym::sail::{sail_patch, SailError, SailPatch};
use sailsym::symmetry::{
    canonical_matrix, criterion_check, dirichlet_search, is_proper, sigma_of, symmetry_report, verify_lemma6,
    SearchConfig, SymmetryError, Verdict,
};

use crate::input;
use crate::report::{CliError, Outcome, Provenance, EXIT_NEGATIVE, EXIT_OK};
use crate::CfSource;

const ROOT_BITS: u32 = 64;

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

/// Input problems with G or a witness are usage errors; anything else is internal.
fn symmetry_error(flag: &str, e: SymmetryError) -> CliError {
    match e {
        SymmetryError::NotSquare4 | SymmetryError::NotUnimodular(_) => CliError::usage(flag, e.to_string()),
        e => internal(e),
    }
}

fn source_flag(s: &CfSource) -> &'static str {
    if s.matrix.is_some() {
        "--matrix"
    } else {
        "--cf"
    }
}

fn field_json(k: &NumberField) -> Value {
    let roots: Vec<Value> = k
        .root_intervals(ROOT_BITS)
        .iter()
        .enumerate()
        .map(|(i, iv)| json!({ "position": i + 1, "interval": [fmt_rat(&iv.lo), fmt_rat(&iv.hi)], "approx": k.root_approx(i) }))
        .collect();
    let autos: Vec<Value> = k
        .automorphisms()
        .iter()
        .map(|a| json!({ "image": a.image, "root_map": a.root_map.iter().map(|j| j + 1).collect::<Vec<_>>() }))
        .collect();
    // One labeling per choice of σ₁, the rest ascending.
    let structures: Vec<Value> = (0..k.degree())
        .map(|b| {
            let mut l = vec![b];
            l.extend((0..k.degree()).filter(|&p| p != b));
            json!(k.embedding_structure(&Labeling(l)))
        })
        .collect();
    json!({
        "minpoly": k.minpoly(),
        "degree": k.degree(),
        "poly_discriminant": k.poly_discriminant().to_string(),
        "roots": roots,
        "automorphisms": autos,
        "normal": k.automorphisms().len() == k.degree(),
        "embedding_structures": structures,
    })
}

fn cf_json(cf: &AlgebraicCF) -> Value {
    json!({
        "minpoly": cf.field().minpoly(),
        "labeling": cf.labeling(),
        "basis": cf.basis(),
        "alpha": cf.alpha(),
        "beta": cf.beta(),
        "gamma": cf.gamma(),
        "source": cf.source(),
    })
}

pub fn field(minpoly: Option<&str>, path: Option<&Path>) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("field");
    let (flag, poly) = match (minpoly, path) {
        (Some(s), _) => {
            prov.param("--minpoly", s);
            let coeffs = s
                .split(',')
                .map(|c| c.trim().parse::<Int>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::usage("--minpoly", format!("bad coefficient list: {e}")))?;
            ("--minpoly", IntPolynomial::new(coeffs))
        }
        (None, Some(p)) => ("--input", input::field_doc("--input", p, &mut prov)?.minpoly),
        (None, None) => return Err(CliError::usage("--minpoly", "give --minpoly or --input")),
    };
    let k = make_field(&poly).map_err(|e| CliError::usage(flag, e.to_string()))?;
    Outcome::new(&prov, &field_json(&k), EXIT_OK)
}

pub fn analyze(path: &Path, bound: i64, hits: usize) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("analyze");
    prov.param("--dirichlet-bound", bound).param("--dirichlet-hits", hits);
    if !(0..=3).contains(&bound) {
        return Err(CliError::usage("--dirichlet-bound", "must lie in 0..=3"));
    }
    let a = input::matrix("--matrix", path, &mut prov)?;
    let hm = is_hyperbolic(&a).map_err(|e: HyperbolicError| CliError::usage("--matrix", e.to_string()))?;
    let cf = eigen_data(&hm, None).map_err(|e| CliError::usage("--matrix", e.to_string()))?;
    let found = if bound == 0 { Vec::new() } else { dirichlet_search(&cf, &a, bound, hits, Execution::default()) };
    let result = json!({
        "hyperbolic": hm,
        "field": field_json(cf.field()),
        "cf": cf_json(&cf),
        "embedding_structure": cf.field().embedding_structure(cf.labeling()),
        "dirichlet": found,
    });
    Outcome::new(&prov, &result, EXIT_OK)
}

#[derive(Serialize)]
struct SailResult {
    cf: Value,
    bound: i64,
    #[serde(serialize_with = "ser_rat")]
    margin: Rat,
    patches: Vec<SailPatch>,
    /// Cones with too few lattice points in the box for a 4-dimensional hull.
    empty_cones: Vec<Cone>,
    stable_facets: usize,
    certified_facets: usize,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

pub fn sail(source: &CfSource, bound: i64, margin: &str, cone: Option<&str>) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("sail");
    prov.param("--bound", bound).param("--margin", margin).param("--cone", cone.unwrap_or("all"));
    if !(1..=12).contains(&bound) {
        return Err(CliError::usage("--bound", "must lie in 1..=12"));
    }
    let m = parse_rat(margin).map_err(|e| CliError::usage("--margin", e.to_string()))?;
    if m < rat(1, 1) {
        return Err(CliError::usage("--margin", "must be at least 1"));
    }
    let cones: Vec<Cone> = match cone {
        Some(s) => vec![s.parse().map_err(|e: String| CliError::usage("--cone", e))?],
        None => Cone::all().collect(),
    };
    let cf = input::cf(source, &mut prov)?;
    let mut patches = Vec::new();
    let mut empty_cones = Vec::new();
    for c in cones {
        match sail_patch(&cf, c, bound, &m, Execution::default()) {
            Ok(p) => patches.push(p),
            Err(SailError::EmptyPatch) => empty_cones.push(c),
            Err(e) => return Err(CliError::usage(source_flag(source), e.to_string())),
        }
    }
    let count = |f: fn(&SailPatch) -> &Vec<bool>| patches.iter().map(|p| f(p).iter().filter(|&&b| b).count()).sum();
    let result = SailResult {
        cf: cf_json(&cf),
        bound,
        margin: m,
        stable_facets: count(|p| &p.stable_flags),
        certified_facets: count(|p| &p.certified_flags),
        patches,
        empty_cones,
    };
    Outcome::new(&prov, &result, EXIT_OK)
}

pub fn symmetry(source: &CfSource, g_path: &Path) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("symmetry");
    let cf = input::cf(source, &mut prov)?;
    let g = input::matrix("--g", g_path, &mut prov)?;
    let report = symmetry_report(&cf, &g).map_err(|e| symmetry_error("--g", e))?;
    let code = if report.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
    let result = json!({
        "cf": cf_json(&cf),
        "g": g,
        "is_symmetry": report.is_some(),
        "report": report,
    });
    Outcome::new(&prov, &result, code)
}

pub fn criterion(source: &CfSource, witness: Option<&Path>, bound: i64, max_candidates: usize) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("criterion");
    prov.param("--bound", bound).param("--max-candidates", max_candidates);
    if !(1..=4).contains(&bound) {
        return Err(CliError::usage("--bound", "must lie in 1..=4"));
    }
    if max_candidates == 0 {
        return Err(CliError::usage("--max-candidates", "must be positive"));
    }
    let cf = input::cf(source, &mut prov)?;
    let x = witness.map(|p| input::matrix("--witness", p, &mut prov)).transpose()?;
    let cfg = SearchConfig { bound, max_candidates, ..SearchConfig::default() };
    let verdict = criterion_check(&cf, x.as_ref(), &cfg, Execution::default()).map_err(|e| symmetry_error("--witness", e))?;
    let code = if verdict.class().is_some() { EXIT_OK } else { EXIT_NEGATIVE };
    let result = json!({ "cf": cf_json(&cf), "search": cfg, "verdict": verdict });
    Outcome::new(&prov, &result, code)
}

pub fn lemma4_sweep(bound: i64, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("lemma4 sweep");
    prov.param("--bound", bound).param("--samples", samples).param("--seed", seed);
    if !(1..=6).contains(&bound) {
        return Err(CliError::usage("--bound", "must lie in 1..=6"));
    }
    let report = sweep(bound, samples, seed, Execution::default());
    let code = if report.counterexamples.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
    Outcome::new(&prov, &report, code)
}

pub fn lemma4_classify(path: &Path) -> Result<Outcome, CliError> {
    let mut prov = Provenance::new("lemma4 classify");
    let doc = input::quadruple("--z", path, &mut prov)?;
    let inst = match doc.f {
        Some(f) => ConfigInstance::new(doc.z, f),
        None => ConfigInstance::from_quadruple(doc.z),
    }
    .map_err(|e| CliError::usage("--z", e.to_string()))?;
    let cases = classify_cases(&inst);
    let code = if cases.is_empty() { EXIT_NEGATIVE } else { EXIT_OK };
    Outcome::new(&prov, &json!({ "instance": inst, "cases": cases }), code)
}

/// The worked quartic x⁴ − 8x² + 14 with its class-1 continued fraction.
pub fn example_paper() -> Result<Outcome, CliError> {
    let prov = Provenance::new("example-paper");
    let k = make_field(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])).map_err(internal)?;
    let es = k.embedding_structure(&Labeling(vec![3, 2, 1, 0]));
    let l = es.witness.clone().ok_or_else(|| internal("no labeling satisfies the embedding conditions"))?;
    let el = |c: [(i64, i64); 4]| k.element(c.iter().map(|&(p, q)| rat(p, q)).collect()).map_err(internal);
    let cf = sailsym::cf_core::cf_from_coords(
        &k,
        l.clone(),
        el([(0, 1), (1, 1), (1, 1), (0, 1)])?,
        el([(0, 1), (0, 1), (-1, 1), (1, 2)])?,
        el([(0, 1), (-1, 1), (1, 1), (0, 1)])?,
    )
    .map_err(internal)?;
    let tau = k.find_conjugate(l.0[0], l.0[2]).ok_or_else(|| internal("σ₃ is not a conjugate of σ₁"))?;
    let omega_sum = cf.alpha() + &tau.apply(cf.alpha());
    let psi_sum = cf.beta() + &tau.apply(cf.beta());
    let g1 = canonical_matrix(1).map_err(internal)?;
    let r = sigma_of(&cf, &g1).map_err(internal)?.ok_or_else(|| internal("G_1 is not a symmetry"))?;
    let properness = is_proper(&cf, &r).map_err(internal)?;
    let lemma6 = (1..=10).map(|i| verify_lemma6(&cf, i)).collect::<Result<Vec<_>, _>>().map_err(internal)?;
    let verdict = criterion_check(&cf, Some(&IntMatrix::identity(4)), &SearchConfig::default(), Execution::default())
        .map_err(internal)?;
    // Aut(K) has at most four elements, so order 4 means ρ² ≠ id.
    let cyclic = k.automorphisms().iter().any(|a| !a.compose(a).is_identity());
    let note = if k.automorphisms().len() < k.degree() && !cyclic {
        "not normal, no cyclic symmetry"
    } else {
        "normal field"
    };
    let result = json!({
        "field": field_json(&k),
        "embedding_structure": es,
        "cf": cf_json(&cf),
        "tau": tau.image,
        "omega_plus_tau_omega": omega_sum,
        "psi_plus_tau_psi": psi_sum,
        "eigen_directions_approx": (0..4).map(|i| cf.direction_approx(i).to_vec()).collect::<Vec<_>>(),
        "g1_report": r,
        "properness": properness,
        "class_checks": lemma6,
        "verdict": verdict,
        "note": note,
    });
    let code = if matches!(verdict, Verdict::Proper { class: 1, .. }) { EXIT_OK } else { EXIT_NEGATIVE };
    Outcome::new(&prov, &result, code)
}
