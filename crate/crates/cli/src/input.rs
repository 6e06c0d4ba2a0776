//! Input documents. Every failure names the flag it came from.

use std::path::Path;

use serde::Deserialize;

use sailsym::cf_core::{cf_from_coords, default_labeling, eigen_data, is_hyperbolic, AlgebraicCF};
use sailsym::intlat::IntMatrix;
use sailsym::numfield::{make_field, ElementLiteral, IntPolynomial, Labeling};

use crate::report::{CliError, Provenance};
use crate::CfSource;

pub fn read(flag: &str, path: &Path, prov: &mut Provenance) -> Result<Vec<u8>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::usage(flag, format!("cannot read {}: {e}", path.display())))?;
    prov.input(flag, &bytes);
    Ok(bytes)
}

fn parse<T: for<'de> Deserialize<'de>>(flag: &str, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::usage(flag, format!("invalid document: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    matrix: IntMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub minpoly: IntPolynomial,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoordsDoc {
    field: FieldDoc,
    alpha: ElementLiteral,
    beta: ElementLiteral,
    gamma: ElementLiteral,
    #[serde(default)]
    labeling: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CfDoc {
    Matrix(MatrixDoc),
    Coords(CoordsDoc),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrupleDoc {
    #[serde(with = "sailsym::json::int_mat")]
    pub z: Vec<Vec<sailsym::rational::Int>>,
    #[serde(default)]
    pub f: Option<IntMatrix>,
}

pub fn matrix(flag: &str, path: &Path, prov: &mut Provenance) -> Result<IntMatrix, CliError> {
    let doc: MatrixDoc = parse(flag, &read(flag, path, prov)?)?;
    if doc.matrix.nrows() != 4 || doc.matrix.ncols() != 4 {
        return Err(CliError::usage(flag, "expected a 4x4 integer matrix"));
    }
    Ok(doc.matrix)
}

pub fn field_doc(flag: &str, path: &Path, prov: &mut Provenance) -> Result<FieldDoc, CliError> {
    parse(flag, &read(flag, path, prov)?)
}

pub fn quadruple(flag: &str, path: &Path, prov: &mut Provenance) -> Result<QuadrupleDoc, CliError> {
    parse(flag, &read(flag, path, prov)?)
}

fn labeling(flag: &str, v: &[usize]) -> Result<Labeling, CliError> {
    Labeling::from_one_based(v).ok_or_else(|| CliError::usage(flag, "labeling must be a 1-based permutation of 1..4"))
}

fn cf_from_matrix(flag: &str, m: &IntMatrix) -> Result<AlgebraicCF, CliError> {
    let hm = is_hyperbolic(m).map_err(|e| CliError::usage(flag, e.to_string()))?;
    eigen_data(&hm, None).map_err(|e| CliError::usage(flag, e.to_string()))
}

pub fn cf(source: &CfSource, prov: &mut Provenance) -> Result<AlgebraicCF, CliError> {
    if let Some(p) = &source.matrix {
        let m = matrix("--matrix", p, prov)?;
        return cf_from_matrix("--matrix", &m);
    }
    let p = source.cf.as_ref().expect("clap enforces one source");
    let flag = "--cf";
    match parse::<CfDoc>(flag, &read(flag, p, prov)?)? {
        CfDoc::Matrix(d) => cf_from_matrix(flag, &d.matrix),
        CfDoc::Coords(d) => {
            let k = make_field(&d.field.minpoly).map_err(|e| CliError::usage(flag, e.to_string()))?;
            let el = |lit: &ElementLiteral| k.element_from_literal(lit).map_err(|e| CliError::usage(flag, e.to_string()));
            let l = match &d.labeling {
                Some(v) => labeling(flag, v)?,
                None => default_labeling(&k),
            };
            cf_from_coords(&k, l, el(&d.alpha)?, el(&d.beta)?, el(&d.gamma)?).map_err(|e| CliError::usage(flag, e.to_string()))
        }
    }
}
