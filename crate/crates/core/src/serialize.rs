//! JSON forms of chain and cochain elements, keyed by basis labels so the
//! files stay readable and stable across basis reorderings of the same
//! labels.
//!
//! A chain element is an array of `{word: [labels…], module: label,
//! coeff}`. A cochain is an array of elementary tensors
//! `{inputs: [labels…], output: label, coeff}` (the cochain degree is
//! recomputed from the labels on parse).

use serde::{Deserialize, Serialize};

use crate::dga::DgAlgebra;
use crate::error::{Error, Result};
use crate::hochschild::{Cochain, HochschildElement, Word};
use crate::scalar::Scalar;
use crate::sparse;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainTermJson {
    pub word: Vec<String>,
    pub module: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CochainTensorJson {
    pub inputs: Vec<String>,
    pub output: String,
    pub coeff: String,
}

pub fn chain_to_json(a: &DgAlgebra, x: &HochschildElement) -> Vec<ChainTermJson> {
    x.terms
        .iter()
        .map(|(w, c)| ChainTermJson {
            word: w.tensor.iter().map(|i| a.space.label(*i).to_string()).collect(),
            module: a.space.label(w.module).to_string(),
            coeff: c.to_string(),
        })
        .collect()
}

pub fn chain_from_json(a: &DgAlgebra, terms: &[ChainTermJson]) -> Result<HochschildElement> {
    let mut x = HochschildElement::zero();
    for t in terms {
        let tensor = t
            .word
            .iter()
            .map(|l| a.space.index_of(l))
            .collect::<Result<Vec<usize>>>()?;
        let module = a.space.index_of(&t.module)?;
        let c = Scalar::parse(a.field(), &t.coeff)?;
        x.add_term(Word { tensor, module }, c);
    }
    Ok(x)
}

pub fn chain_from_json_str(a: &DgAlgebra, text: &str) -> Result<HochschildElement> {
    let terms: Vec<ChainTermJson> = serde_json::from_str(text)?;
    chain_from_json(a, &terms)
}

pub fn chain_to_json_string(a: &DgAlgebra, x: &HochschildElement) -> String {
    serde_json::to_string_pretty(&chain_to_json(a, x)).expect("serialization cannot fail")
}

pub fn cochain_to_json(a: &DgAlgebra, f: &Cochain) -> Vec<CochainTensorJson> {
    let mut out = Vec::new();
    for (inputs, values) in &f.entries {
        for (k, c) in values {
            out.push(CochainTensorJson {
                inputs: inputs.iter().map(|i| a.space.label(*i).to_string()).collect(),
                output: a.space.label(*k).to_string(),
                coeff: c.to_string(),
            });
        }
    }
    out
}

/// Rebuilds a cochain from elementary tensors; every tensor must induce
/// the same cochain degree (output degree minus shifted input degrees).
pub fn cochain_from_json(a: &DgAlgebra, tensors: &[CochainTensorJson]) -> Result<Cochain> {
    if tensors.is_empty() {
        return Err(Error::Invalid(
            "empty cochain JSON: the degree cannot be inferred (use an explicit zero)".into(),
        ));
    }
    let mut degree: Option<i64> = None;
    let mut entries: std::collections::BTreeMap<Vec<usize>, sparse::SparseVec> =
        Default::default();
    for t in tensors {
        let inputs = t
            .inputs
            .iter()
            .map(|l| a.space.index_of(l))
            .collect::<Result<Vec<usize>>>()?;
        let out = a.space.index_of(&t.output)?;
        let c = Scalar::parse(a.field(), &t.coeff)?;
        let shifted: i64 = inputs.iter().map(|i| a.degree(*i) - 1).sum();
        let deg = a.degree(out) - shifted;
        match degree {
            None => degree = Some(deg),
            Some(d) if d != deg => {
                return Err(Error::Invalid(format!(
                    "cochain tensors of mixed degree ({d} vs {deg})"
                )))
            }
            _ => {}
        }
        sparse::add_term(entries.entry(inputs).or_default(), out, c);
    }
    entries.retain(|_, v| !v.is_empty());
    let f = Cochain { degree: degree.unwrap(), entries };
    f.check(a)?;
    Ok(f)
}

pub fn cochain_from_json_str(a: &DgAlgebra, text: &str) -> Result<Cochain> {
    let tensors: Vec<CochainTensorJson> = serde_json::from_str(text)?;
    cochain_from_json(a, &tensors)
}

pub fn cochain_to_json_string(a: &DgAlgebra, f: &Cochain) -> String {
    serde_json::to_string_pretty(&cochain_to_json(a, f)).expect("serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::sphere_model;
    use crate::hochschild::enumerate_words;
    use crate::scalar::Field;

    #[test]
    fn chain_round_trip() {
        let fr = sphere_model(Field::Q, 3).unwrap();
        let a = &fr.algebra;
        let mut x = HochschildElement::zero();
        for (i, w) in enumerate_words(a, 2, -20, 20).into_iter().enumerate() {
            x.add_term(w, Scalar::from_i64(Field::Q, i as i64 - 3));
        }
        let text = chain_to_json_string(a, &x);
        assert_eq!(chain_from_json_str(a, &text).unwrap(), x);
    }

    #[test]
    fn cochain_round_trip() {
        let fr = sphere_model(Field::Q, 3).unwrap();
        let a = &fr.algebra;
        let f = Cochain::elementary(a, vec![1, 1], 1).unwrap();
        let g = Cochain::elementary(a, vec![1], 0).unwrap();
        // mix two arities of the same degree if possible; otherwise test
        // them separately
        for c in [f, g] {
            let text = cochain_to_json_string(a, &c);
            assert_eq!(cochain_from_json_str(a, &text).unwrap(), c);
        }
    }

    #[test]
    fn cochain_mixed_degree_rejected() {
        let fr = sphere_model(Field::Q, 3).unwrap();
        let a = &fr.algebra;
        let bad = vec![
            CochainTensorJson { inputs: vec![], output: "1".into(), coeff: "1".into() },
            CochainTensorJson { inputs: vec![], output: "v".into(), coeff: "1".into() },
        ];
        assert!(cochain_from_json(a, &bad).is_err());
    }
}
