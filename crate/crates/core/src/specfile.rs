//! Reading and writing algebra specification files.
//!
//! A spec file is UTF-8 JSON with fields `field` (`"Q"` or `"Fp:<p>"`),
//! `basis` (array of `{label, degree}`), `unit` (a label), `mul` (array of
//! `{left, right, result: [{label, coeff}]}`), `d` (array of
//! `{input, result: [{label, coeff}]}`), and optional `pairing` (array of
//! `{left, right, value}`). Coefficients are strings: integers or
//! `"num/den"` over the rationals, residues over a prime field. Pairs and
//! inputs absent from `mul`/`d` are zero. When `pairing` is present the
//! file describes a symmetric Frobenius algebra; the dimension `n` is
//! read off the (necessarily constant) total degree of its support.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dga::DgAlgebra;
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::graded::{GradedMap, GradedSpace};
use crate::scalar::{Field, Scalar};
use crate::sparse::{self, SparseVec};

#[derive(Debug, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub degree: i64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermEntry {
    pub label: String,
    pub coeff: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MulEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<TermEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiffEntry {
    pub input: String,
    pub result: Vec<TermEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PairEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// The on-disk shape of an algebra specification.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub field: String,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    pub mul: Vec<MulEntry>,
    #[serde(default)]
    pub d: Vec<DiffEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<PairEntry>>,
}

/// A parsed spec: always a dg algebra, optionally with Frobenius data.
pub struct ParsedAlgebra {
    pub algebra: DgAlgebra,
    pub frobenius: Option<FrobeniusAlgebra>,
}

fn parse_terms(space: &GradedSpace, field: Field, terms: &[TermEntry]) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    for t in terms {
        let idx = space.index_of(&t.label)?;
        let c = Scalar::parse(field, &t.coeff)?;
        sparse::add_term(&mut v, idx, c);
    }
    Ok(v)
}

pub fn from_spec_str(text: &str) -> Result<ParsedAlgebra> {
    let spec: AlgebraSpec = serde_json::from_str(text)?;
    let field = Field::parse(&spec.field)?;
    let space = GradedSpace::new(
        field,
        spec.basis.iter().map(|b| (b.label.clone(), b.degree)).collect(),
    )?;
    let unit = space.index_of(&spec.unit)?;
    let mut mul: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for entry in &spec.mul {
        let i = space.index_of(&entry.left)?;
        let j = space.index_of(&entry.right)?;
        let v = parse_terms(&space, field, &entry.result)?;
        if !v.is_empty() {
            mul.insert((i, j), v);
        }
    }
    let mut d = GradedMap::zero(space.dim(), 1);
    for entry in &spec.d {
        let i = space.index_of(&entry.input)?;
        d.columns[i] = parse_terms(&space, field, &entry.result)?;
    }
    let algebra = DgAlgebra { space, unit, mul, d };
    let frobenius = match &spec.pairing {
        None => None,
        Some(entries) => {
            let mut pairing = BTreeMap::new();
            let mut dim_n: Option<i64> = None;
            for e in entries {
                let i = algebra.space.index_of(&e.left)?;
                let j = algebra.space.index_of(&e.right)?;
                let c = Scalar::parse(field, &e.value)?;
                if c.is_zero() {
                    continue;
                }
                let total = algebra.degree(i) + algebra.degree(j);
                match dim_n {
                    None => dim_n = Some(total),
                    Some(n) if n != total => {
                        return Err(Error::Invalid(format!(
                            "pairing support is not concentrated in one total degree \
                             ({n} vs {total} at ⟨{},{}⟩)",
                            e.left, e.right
                        )))
                    }
                    _ => {}
                }
                pairing.insert((i, j), c);
            }
            let dim_n = dim_n.ok_or_else(|| {
                Error::Invalid("pairing block present but everywhere zero".into())
            })?;
            Some(FrobeniusAlgebra { algebra: algebra.clone(), pairing, dim_n })
        }
    };
    Ok(ParsedAlgebra { algebra, frobenius })
}

pub fn from_spec_file(path: &Path) -> Result<ParsedAlgebra> {
    let text = std::fs::read_to_string(path)?;
    from_spec_str(&text)
}

fn render_terms(space: &GradedSpace, v: &SparseVec) -> Vec<TermEntry> {
    v.iter()
        .map(|(k, c)| TermEntry { label: space.label(*k).to_string(), coeff: c.to_string() })
        .collect()
}

/// Renders a Frobenius algebra back into the on-disk spec shape (sorted,
/// deterministic).
pub fn to_spec(fr: &FrobeniusAlgebra) -> AlgebraSpec {
    let a = &fr.algebra;
    let space = &a.space;
    AlgebraSpec {
        field: a.field().tag(),
        basis: (0..space.dim())
            .map(|i| BasisEntry { label: space.label(i).to_string(), degree: space.degree(i) })
            .collect(),
        unit: space.label(a.unit).to_string(),
        mul: a
            .mul
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|((i, j), v)| MulEntry {
                left: space.label(*i).to_string(),
                right: space.label(*j).to_string(),
                result: render_terms(space, v),
            })
            .collect(),
        d: (0..space.dim())
            .filter(|i| !a.d.columns[*i].is_empty())
            .map(|i| DiffEntry {
                input: space.label(i).to_string(),
                result: render_terms(space, &a.d.columns[i]),
            })
            .collect(),
        pairing: Some(
            fr.pairing
                .iter()
                .map(|((i, j), c)| PairEntry {
                    left: space.label(*i).to_string(),
                    right: space.label(*j).to_string(),
                    value: c.to_string(),
                })
                .collect(),
        ),
    }
}

pub fn to_spec_string(fr: &FrobeniusAlgebra) -> String {
    serde_json::to_string_pretty(&to_spec(fr)).expect("spec serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{cp_model, product_model, sphere_model};

    #[test]
    fn round_trip_preserves_all_models() {
        let s3 = sphere_model(Field::Q, 3).unwrap();
        for fr in [
            sphere_model(Field::Q, 2).unwrap(),
            s3.clone(),
            cp_model(Field::Q, 2).unwrap(),
            product_model(&s3, &s3).unwrap(),
            sphere_model(Field::Fp(7), 3).unwrap(),
        ] {
            let text = to_spec_string(&fr);
            let parsed = from_spec_str(&text).unwrap();
            let back = parsed.frobenius.expect("pairing present");
            assert!(back.validate().is_empty());
            assert_eq!(back.dim_n, fr.dim_n);
            assert_eq!(back.pairing, fr.pairing);
            assert_eq!(back.algebra.mul, fr.algebra.mul);
            for i in 0..fr.algebra.dim() {
                assert_eq!(back.algebra.d.columns[i], fr.algebra.d.columns[i]);
                assert_eq!(back.algebra.degree(i), fr.algebra.degree(i));
            }
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(from_spec_str("{").is_err());
        assert!(from_spec_str("{\"field\":\"Q\",\"basis\":[],\"unit\":\"1\",\"mul\":[]}").is_err());
        // pairing spread over two total degrees
        let bad = r#"{
            "field": "Q",
            "basis": [{"label":"1","degree":0},{"label":"x","degree":1}],
            "unit": "1",
            "mul": [{"left":"1","right":"1","result":[{"label":"1","coeff":"1"}]}],
            "d": [],
            "pairing": [
                {"left":"1","right":"1","value":"1"},
                {"left":"1","right":"x","value":"1"}
            ]
        }"#;
        assert!(from_spec_str(bad).is_err());
    }
}
