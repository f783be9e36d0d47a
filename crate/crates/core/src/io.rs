//! Generator files.
//!
//! A generator file is a JSON array of objects
//! `{"translation": {"v": [..], "w": [..]}, "shear": [[..]], "linear": [[..]]}`
//! with rationals written as strings. Missing parts default to the identity
//! element, the zero shear and the identity matrix. Torus files carry
//! `linear` only.

use serde::{Deserialize, Serialize};

use crate::algebra::{GraphAlgebra, NilElement};
use crate::automorphism::AffineGenerator;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<NilElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear: Option<QMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<QMatrix>,
}

impl GeneratorRecord {
    pub fn from_generator(g: &AffineGenerator) -> Self {
        GeneratorRecord {
            translation: (!g.translation_part().is_identity()).then(|| g.translation_part().clone()),
            shear: (!g.shear_part().theta().is_zero()).then(|| g.shear_part().theta().clone()),
            linear: (!g.linear_part().g().is_identity()).then(|| g.linear_part().g().clone()),
        }
    }

    pub fn build(&self, alg: &GraphAlgebra) -> Result<AffineGenerator> {
        AffineGenerator::assemble(
            alg,
            self.translation.clone().unwrap_or_else(|| alg.identity()),
            self.shear.clone().unwrap_or_else(|| QMatrix::zeros(alg.dim_w(), alg.dim_v())),
            self.linear.clone().unwrap_or_else(|| QMatrix::identity(alg.dim_v())),
        )
    }
}

fn at(index: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Generator { index, inner: Box::new(e) }
}

pub fn parse_records(text: &str) -> Result<Vec<GeneratorRecord>> {
    Ok(serde_json::from_str(text)?)
}

/// Affine generators for the nilmanifold of `alg`. Lattice stabilization is
/// checked later, when the generator set is formed.
pub fn parse_generators(text: &str, alg: &GraphAlgebra) -> Result<Vec<AffineGenerator>> {
    parse_records(text)?.iter().enumerate().map(|(i, r)| r.build(alg).map_err(at(i))).collect()
}

/// Matrices of a torus generator file, with their common dimension.
pub fn parse_torus_matrices(text: &str) -> Result<(usize, Vec<QMatrix>)> {
    let records = parse_records(text)?;
    let mut mats = Vec::with_capacity(records.len());
    for (i, r) in records.into_iter().enumerate() {
        if r.translation.is_some() || r.shear.is_some() {
            return Err(at(i)(Error::InvalidRequest("torus generators take `linear` only".into())));
        }
        let m = r.linear.ok_or_else(|| at(i)(Error::InvalidRequest("missing `linear`".into())))?;
        mats.push(m);
    }
    let n = mats.first().map(QMatrix::nrows).ok_or_else(|| Error::InvalidRequest("empty generator list".into()))?;
    for (i, m) in mats.iter().enumerate() {
        if m.nrows() != n || m.ncols() != n {
            return Err(at(i)(Error::DimensionMismatch(format!(
                "{}x{} matrix, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            ))));
        }
    }
    Ok((n, mats))
}

pub fn generators_to_json(gens: &[AffineGenerator]) -> String {
    let records: Vec<GeneratorRecord> = gens.iter().map(GeneratorRecord::from_generator).collect();
    serde_json::to_string_pretty(&records).expect("generator records serialize")
}

pub fn torus_matrices_to_json(mats: &[QMatrix]) -> String {
    let records: Vec<GeneratorRecord> =
        mats.iter().map(|m| GeneratorRecord { linear: Some(m.clone()), ..Default::default() }).collect();
    serde_json::to_string_pretty(&records).expect("generator records serialize")
}
