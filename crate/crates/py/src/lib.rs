//! Python bindings for the exact string-topology engine.
//!
//! The module exposes three classes:
//!
//! - `Model`: a symmetric dg Frobenius algebra (built-in sphere /
//!   projective-space / product models, or loaded from JSON);
//! - `Chain` / `Cochain`: elements of the normalized Hochschild complexes,
//!   with their differentials, the Connes operator, cup and star products,
//!   the duality pairing, and the configuration-model coproduct pipeline;
//! - `Lens`: the closed-form loop-product/coproduct calculus for
//!   three-dimensional lens spaces.
//!
//! All arithmetic is exact; coefficients cross the boundary as strings
//! (e.g. `"-3/4"` over the rationals, `"5"` over a prime field).

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stringtop::conf::ConfModel;
use stringtop::frobenius::{cp_model, product_model, sphere_model, FrobeniusAlgebra};
use stringtop::hochschild::{
    chain_differential, cochain_differential, connes_b, duality_pair, Cochain as CoreCochain,
    HochschildElement, Word,
};
use stringtop::homology::{homology_table, ComplexKind, Window};
use stringtop::lens;
use stringtop::products::{cup, gh_star};
use stringtop::scalar::{Field, Scalar};
use stringtop::serialize;
use stringtop::sparse;
use stringtop::specfile;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_field(p: u64) -> PyResult<Field> {
    if p == 0 {
        Ok(Field::Q)
    } else {
        Field::parse(&format!("Fp:{p}")).map_err(err)
    }
}

/// A symmetric dg Frobenius algebra: the coefficient model every other
/// object is built over.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Model {
    fr: FrobeniusAlgebra,
}

impl Model {
    fn index(&self, label: &str) -> PyResult<usize> {
        self.fr.algebra.space.index_of(label).map_err(err)
    }

}

#[pymethods]
impl Model {
    /// Cohomology model of the n-sphere; `p = 0` means rational
    /// coefficients, otherwise the prime field `F_p`.
    #[staticmethod]
    #[pyo3(signature = (n, p = 0))]
    fn sphere(n: i64, p: u64) -> PyResult<Model> {
        Ok(Model { fr: sphere_model(parse_field(p)?, n).map_err(err)? })
    }

    /// Cohomology model of complex projective m-space.
    #[staticmethod]
    #[pyo3(signature = (m, p = 0))]
    fn projective(m: i64, p: u64) -> PyResult<Model> {
        Ok(Model { fr: cp_model(parse_field(p)?, m).map_err(err)? })
    }

    /// Tensor product of two models (a model of the product space).
    #[staticmethod]
    fn product(a: &Model, b: &Model) -> PyResult<Model> {
        Ok(Model { fr: product_model(&a.fr, &b.fr).map_err(err)? })
    }

    /// Parses a model from the JSON format also used by the CLI.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Model> {
        let parsed = specfile::from_spec_str(text).map_err(err)?;
        let fr = parsed
            .frobenius
            .ok_or_else(|| err("model has no pairing block"))?;
        Ok(Model { fr })
    }

    /// Loads a model from a JSON file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Model> {
        let text = std::fs::read_to_string(path).map_err(err)?;
        Model::from_json(&text)
    }

    fn to_json(&self) -> String {
        specfile::to_spec_string(&self.fr)
    }

    /// Returns the (empty when valid) list of axiom violations.
    fn validate(&self) -> Vec<String> {
        self.fr.validate()
    }

    /// The degree of the pairing, i.e. the dimension of the underlying
    /// manifold.
    #[getter]
    fn ambient_degree(&self) -> i64 {
        self.fr.dim_n
    }

    #[getter]
    fn field(&self) -> String {
        self.fr.field().tag()
    }

    /// Basis labels with their degrees.
    fn basis(&self) -> Vec<(String, i64)> {
        (0..self.fr.algebra.dim())
            .map(|i| {
                (
                    self.fr.algebra.space.label(i).to_string(),
                    self.fr.algebra.degree(i),
                )
            })
            .collect()
    }

    fn euler_characteristic(&self) -> i64 {
        self.fr.euler_characteristic()
    }

    /// `γ(a) = Σ ±(e_i a f_i)` rendered as `{label: coefficient}`.
    fn gamma(&self, label: &str) -> PyResult<BTreeMap<String, String>> {
        let i = self.index(label)?;
        let g = self.fr.gamma(&sparse::basis(self.fr.field(), i)).map_err(err)?;
        Ok(g
            .iter()
            .map(|(k, c)| (self.fr.algebra.space.label(*k).to_string(), c.to_string()))
            .collect())
    }

    /// The same model with coefficients reduced mod a prime.
    fn to_prime_field(&self, p: u64) -> PyResult<Model> {
        Ok(Model { fr: self.fr.to_prime_field(p).map_err(err)? })
    }

    /// A single-word Hochschild chain `(ā₁ ⊗ … ⊗ ā_m ; a)`.
    #[pyo3(signature = (tensor, module, coeff = "1"))]
    fn chain(&self, tensor: Vec<String>, module: &str, coeff: &str) -> PyResult<Chain> {
        let tensor = tensor
            .iter()
            .map(|s| self.index(s))
            .collect::<PyResult<Vec<_>>>()?;
        let module = self.index(module)?;
        let c = Scalar::parse(self.fr.field(), coeff).map_err(err)?;
        let mut x = HochschildElement::zero();
        x.add_term(Word { tensor, module }, c);
        x.degree(&self.fr.algebra).map_err(err)?;
        Ok(Chain { model: self.clone(), elem: x })
    }

    fn zero_chain(&self) -> Chain {
        Chain { model: self.clone(), elem: HochschildElement::zero() }
    }

    fn chain_from_json(&self, text: &str) -> PyResult<Chain> {
        let elem = serialize::chain_from_json_str(&self.fr.algebra, text).map_err(err)?;
        Ok(Chain { model: self.clone(), elem })
    }

    /// The elementary cochain sending the word `inputs` to `output` (and
    /// every other word to zero).
    fn cochain(&self, inputs: Vec<String>, output: &str) -> PyResult<Cochain> {
        let w = inputs
            .iter()
            .map(|s| self.index(s))
            .collect::<PyResult<Vec<_>>>()?;
        let o = self.index(output)?;
        let f = CoreCochain::elementary(&self.fr.algebra, w, o).map_err(err)?;
        Ok(Cochain { model: self.clone(), elem: f })
    }

    fn cochain_from_json(&self, text: &str) -> PyResult<Cochain> {
        let elem = serialize::cochain_from_json_str(&self.fr.algebra, text).map_err(err)?;
        Ok(Cochain { model: self.clone(), elem })
    }

    /// Per-degree homology dimensions of one of the three complexes
    /// (`"chains"`, `"cochains"`, `"tate"`) over a certified window.
    fn homology(
        &self,
        kind: &str,
        max_len: usize,
        k_min: i64,
        k_max: i64,
    ) -> PyResult<BTreeMap<i64, usize>> {
        let kind = match kind {
            "chains" => ComplexKind::Chains,
            "cochains" => ComplexKind::Cochains,
            "tate" => ComplexKind::Tate,
            other => return Err(err(format!("unknown complex kind {other:?}"))),
        };
        let window = Window::new(max_len, k_min, k_max).map_err(err)?;
        let table = homology_table(&self.fr, kind, &window).map_err(err)?;
        Ok(table.degrees.iter().map(|(k, s)| (*k, s.dim)).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(field={}, dim={}, ambient_degree={})",
            self.fr.field().tag(),
            self.fr.algebra.dim(),
            self.fr.dim_n
        )
    }
}

/// An element of the normalized Hochschild chain complex.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Chain {
    model: Model,
    elem: HochschildElement,
}

#[pymethods]
impl Chain {
    fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    /// Total degree, or `None` for the zero chain (degrees must be pure).
    fn degree(&self) -> PyResult<Option<i64>> {
        self.elem.degree(&self.model.fr.algebra).map_err(err)
    }

    fn add(&self, other: &Chain) -> Chain {
        Chain { model: self.model.clone(), elem: self.elem.add(&other.elem) }
    }

    fn neg(&self) -> Chain {
        Chain { model: self.model.clone(), elem: self.elem.neg() }
    }

    fn scale(&self, coeff: &str) -> PyResult<Chain> {
        let c = Scalar::parse(self.model.fr.field(), coeff).map_err(err)?;
        Ok(Chain { model: self.model.clone(), elem: self.elem.scale(&c) })
    }

    /// The Hochschild boundary `∂` (degree `+1` in this grading).
    fn differential(&self) -> PyResult<Chain> {
        let elem = chain_differential(&self.model.fr.algebra, &self.elem).map_err(err)?;
        Ok(Chain { model: self.model.clone(), elem })
    }

    /// The Connes operator `B`.
    fn connes_b(&self) -> PyResult<Chain> {
        let elem = connes_b(&self.model.fr.algebra, &self.elem).map_err(err)?;
        Ok(Chain { model: self.model.clone(), elem })
    }

    /// The chain-level product dual to the loop coproduct.
    fn star(&self, other: &Chain) -> PyResult<Chain> {
        let elem = gh_star(&self.model.fr, &self.elem, &other.elem).map_err(err)?;
        Ok(Chain { model: self.model.clone(), elem })
    }

    /// The same operation computed through the two-point configuration
    /// model (cut, Thom collapse, splitting, and interleaving).
    fn coproduct_pipeline(&self, other: &Chain) -> PyResult<Chain> {
        let cm = ConfModel::new(&self.model.fr).map_err(err)?;
        let elem = cm
            .geometric_coproduct_pipeline(&self.elem, &other.elem)
            .map_err(err)?;
        Ok(Chain { model: self.model.clone(), elem })
    }

    fn to_json(&self) -> String {
        serialize::chain_to_json_string(&self.model.fr.algebra, &self.elem)
    }

    fn __eq__(&self, other: &Chain) -> bool {
        self.elem == other.elem
    }

    fn __repr__(&self) -> String {
        if self.elem.is_zero() {
            return "Chain(0)".into();
        }
        let a = &self.model.fr.algebra;
        let terms: Vec<String> = self
            .elem
            .terms
            .iter()
            .map(|(w, c)| {
                let tensor: Vec<&str> = w.tensor.iter().map(|i| a.space.label(*i)).collect();
                format!("{} ({}; {})", c, tensor.join("⊗"), a.space.label(w.module))
            })
            .collect();
        format!("Chain({})", terms.join(" + "))
    }
}

/// An element of the normalized Hochschild cochain complex.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Cochain {
    model: Model,
    elem: CoreCochain,
}

#[pymethods]
impl Cochain {
    #[getter]
    fn degree(&self) -> i64 {
        self.elem.degree
    }

    fn is_zero(&self) -> bool {
        self.elem.entries.is_empty()
    }

    fn add(&self, other: &Cochain) -> PyResult<Cochain> {
        let elem = self.elem.add(&other.elem).map_err(err)?;
        Ok(Cochain { model: self.model.clone(), elem })
    }

    fn scale(&self, coeff: &str) -> PyResult<Cochain> {
        let c = Scalar::parse(self.model.fr.field(), coeff).map_err(err)?;
        Ok(Cochain { model: self.model.clone(), elem: self.elem.scale(&c) })
    }

    /// The cochain differential `δ`, truncated at input length `cap`.
    fn differential(&self, cap: usize) -> PyResult<Cochain> {
        let elem = cochain_differential(&self.model.fr.algebra, &self.elem, cap).map_err(err)?;
        Ok(Cochain { model: self.model.clone(), elem })
    }

    /// The cup product, truncated at input length `cap`.
    fn cup(&self, other: &Cochain, cap: usize) -> PyResult<Cochain> {
        let elem = cup(&self.model.fr.algebra, &self.elem, &other.elem, cap).map_err(err)?;
        Ok(Cochain { model: self.model.clone(), elem })
    }

    /// The duality pairing `⟨f, x⟩` against a chain, as a coefficient
    /// string.
    fn pair(&self, chain: &Chain) -> String {
        duality_pair(&self.model.fr, &self.elem, &chain.elem).to_string()
    }

    fn to_json(&self) -> String {
        serialize::cochain_to_json_string(&self.model.fr.algebra, &self.elem)
    }

    fn __eq__(&self, other: &Cochain) -> bool {
        self.elem == other.elem
    }

    fn __repr__(&self) -> String {
        format!("Cochain(degree={}, terms={})", self.elem.degree, self.elem.entries.len())
    }
}

/// The lens space `L(p, q)` with its degree-1 string calculus.
#[pyclass]
struct Lens {
    inner: lens::LensSpace,
}

#[pymethods]
impl Lens {
    #[new]
    fn new(p: u64, q: u64) -> PyResult<Lens> {
        Ok(Lens { inner: lens::LensSpace::new(p, q).map_err(err)? })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    /// The loop coproduct `∨ρ_{ℓ,m}` as `{(k, k'): coefficient}` with all
    /// indices and coefficients reduced mod p and zeros dropped.
    fn coproduct(&self, l: u64, m: u64) -> PyResult<BTreeMap<(u64, u64), u64>> {
        let c = lens::rho_coproduct(&self.inner, l, m);
        Ok(c.coeffs.clone().into_iter().collect())
    }

    /// Degrees `d` with `d² q_other ≡ q mod p`: the possible degrees of a
    /// homotopy equivalence from `L(p, q_other)` to this space.
    fn equivalence_degrees(&self, q_other: u64) -> Vec<u64> {
        lens::homotopy_equiv_degrees(self.inner.p, q_other, self.inner.q)
    }

    /// Searches for a basis-change making the coproduct match under a
    /// degree-d equivalence from `L(p, q_other)`. Returns `(ℓ, a)` or
    /// `None`.
    fn invariance_witness(&self, q_other: u64) -> PyResult<Option<(u64, u64)>> {
        lens::coproduct_invariance_search(self.inner.p, q_other, self.inner.q).map_err(err)
    }

    /// `True` when the two spaces are homeomorphic (`q q' ≡ ±1` or
    /// `q ≡ ±q'` mod p).
    fn homeomorphic(&self, q_other: u64) -> bool {
        lens::homeomorphic(self.inner.p, self.inner.q, q_other)
    }

    /// `True` when a degree-1 (orientation-preserving) homeomorphism
    /// exists (`q q' ≡ 1` or `q ≡ q'` mod p).
    fn oriented_homeomorphic(&self, q_other: u64) -> bool {
        lens::oriented_homeomorphic(self.inner.p, self.inner.q, q_other)
    }

    /// Scans all pairs up to `p_max`, returning the JSON report the CLI
    /// also emits (witnesses, non-preserving pairs, counterexamples).
    #[staticmethod]
    #[pyo3(signature = (p_max, threads = 1))]
    fn scan(p_max: u64, threads: usize) -> PyResult<String> {
        let report = lens::thm_lens_scan(p_max, threads).map_err(err)?;
        serde_json::to_string_pretty(&report).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Lens({}, {})", self.inner.p, self.inner.q)
    }
}

#[pymodule]
fn stringtop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<Chain>()?;
    m.add_class::<Cochain>()?;
    m.add_class::<Lens>()?;
    Ok(())
}
