//! Exact homology of the truncated Hochschild chain, cochain, and two-sided
//! complexes: per-degree dimensions via rank computations, deterministic
//! cycle representatives, reduction modulo boundaries, and products induced
//! on homology classes.
//!
//! Truncation is certified rather than silent: for a simply connected
//! algebra with top degree `n`, every chain word of total degree `k` has at
//! most `|k|` shifted factors and every nonzero cochain of degree `k` has
//! arity at most `n - k`, so a length cap `L ≥ |k| + n` loses nothing in
//! degree `k`. [`certify_window`] refuses windows outside this guarantee
//! instead of returning silently wrong ranks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::hochschild::{
    chain_differential, cochain_differential, enumerate_inputs, enumerate_words, Cochain,
    HochschildElement,
};
use crate::linalg::Matrix;
use crate::products::{cup, gh_star, tate_differential, TateElement};
use crate::scalar::Scalar;

/// A truncation window: word-length cap and total-degree range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub max_len: usize,
    pub k_min: i64,
    pub k_max: i64,
}

impl Window {
    pub fn new(max_len: usize, k_min: i64, k_max: i64) -> Result<Window> {
        if k_min > k_max {
            return Err(Error::Invalid("empty degree window".into()));
        }
        Ok(Window { max_len, k_min, k_max })
    }
}

/// Which truncated complex to take homology of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    /// Hochschild chains with `∂`, graded by total chain degree.
    Chains,
    /// Hochschild cochains with `δ`, graded by cochain degree.
    Cochains,
    /// The two-sided complex `C^k ⊕ C_{k-n+1}` with the glued differential,
    /// graded by total degree `k`.
    Tate,
}

/// Homology of one degree: representatives are cycles, `dim` of them,
/// linearly independent modulo boundaries.
#[derive(Clone, Debug)]
pub struct DegreeSummary {
    pub degree: i64,
    pub cycle_rank: usize,
    pub boundary_rank: usize,
    pub dim: usize,
    pub representatives: Vec<TateElement>,
}

/// Per-degree homology of one complex over the certified window.
#[derive(Clone, Debug)]
pub struct HomologyTable {
    pub kind: ComplexKind,
    pub window: Window,
    pub degrees: BTreeMap<i64, DegreeSummary>,
}

/// Refuses windows outside the guaranteed-exact region: the algebra must be
/// simply connected and the length cap must dominate `|k| + n` over the
/// whole degree range.
pub fn certify_window(fr: &FrobeniusAlgebra, window: &Window) -> Result<()> {
    let a = &fr.algebra;
    if !a.is_simply_connected() {
        return Err(Error::WindowNotCertified(
            "truncation is only exact for simply connected algebras (no degree-1 generators)"
                .into(),
        ));
    }
    let needed = window.k_min.unsigned_abs().max(window.k_max.unsigned_abs()) as i64 + fr.dim_n;
    if (window.max_len as i64) < needed {
        return Err(Error::WindowNotCertified(format!(
            "length cap {} is below the exactness bound |k| + n = {} for degrees in [{}, {}]",
            window.max_len, needed, window.k_min, window.k_max
        )));
    }
    Ok(())
}

/// Basis of the truncated complex in one degree, as two-sided elements. The
/// ordering is canonical (input-word lexicographic), making every downstream
/// choice deterministic.
pub fn basis_in_degree(
    fr: &FrobeniusAlgebra,
    kind: ComplexKind,
    window: &Window,
    k: i64,
) -> Vec<TateElement> {
    let a = &fr.algebra;
    let n = fr.dim_n;
    let mut out = Vec::new();
    let chain_deg = match kind {
        ComplexKind::Chains => Some(k),
        ComplexKind::Tate => Some(k - n + 1),
        ComplexKind::Cochains => None,
    };
    let cochain_deg = match kind {
        ComplexKind::Cochains | ComplexKind::Tate => Some(k),
        ComplexKind::Chains => None,
    };
    if let Some(kc) = cochain_deg {
        for arity in 0..=window.max_len {
            for w in enumerate_inputs(a, arity) {
                let shifted: i64 = w.iter().map(|&i| a.degree(i) - 1).sum();
                for o in 0..a.dim() {
                    if a.degree(o) == kc + shifted {
                        let f = Cochain::elementary(a, w.clone(), o).unwrap();
                        out.push(TateElement {
                            degree: k,
                            cochain: f,
                            chain: HochschildElement::zero(),
                        });
                    }
                }
            }
        }
    }
    if let Some(kh) = chain_deg {
        for w in enumerate_words(a, window.max_len, kh, kh) {
            if w.degree(a) == kh {
                out.push(TateElement {
                    degree: k,
                    cochain: Cochain::zero(k),
                    chain: HochschildElement::single(w, Scalar::one(fr.field())),
                });
            }
        }
    }
    out
}

/// The differential of the selected complex applied to a two-sided element
/// (for the pure complexes only the matching sector is used).
pub fn apply_differential(
    fr: &FrobeniusAlgebra,
    kind: ComplexKind,
    window: &Window,
    x: &TateElement,
) -> Result<TateElement> {
    let a = &fr.algebra;
    // One extra arity slot: δ raises arity by one, and the certification
    // bound guarantees nothing of interest lives above the cap.
    let cap = window.max_len + 1;
    match kind {
        ComplexKind::Chains => Ok(TateElement {
            degree: x.degree + 1,
            cochain: Cochain::zero(x.degree + 1),
            chain: chain_differential(a, &x.chain)?,
        }),
        ComplexKind::Cochains => Ok(TateElement {
            degree: x.degree + 1,
            cochain: cochain_differential(a, &x.cochain, cap)?,
            chain: HochschildElement::zero(),
        }),
        ComplexKind::Tate => tate_differential(fr, x, cap),
    }
}

/// Internal: a canonical index for every basis direction of a two-sided
/// element (sector, input word or tensor part, output or module index).
type SlotKey = (u8, Vec<usize>, usize);

fn index_map(basis: &[TateElement]) -> BTreeMap<SlotKey, usize> {
    let mut map = BTreeMap::new();
    for (i, b) in basis.iter().enumerate() {
        for (w, v) in &b.cochain.entries {
            for k in v.keys() {
                map.insert((0u8, w.clone(), *k), i);
            }
        }
        for w in b.chain.terms.keys() {
            map.insert((1u8, w.tensor.clone(), w.module), i);
        }
    }
    map
}

/// Coordinates of `x` against an elementary `basis` of the same degree.
/// Errors when `x` has support outside the span.
pub fn coords(
    fr: &FrobeniusAlgebra,
    basis: &[TateElement],
    map: &BTreeMap<SlotKey, usize>,
    x: &TateElement,
) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::zero(fr.field()); basis.len()];
    for (w, v) in &x.cochain.entries {
        for (k, c) in v {
            let i = map
                .get(&(0u8, w.clone(), *k))
                .ok_or_else(|| Error::Invalid("element leaves the truncated basis".into()))?;
            out[*i] = out[*i].add(c);
        }
    }
    for (w, c) in &x.chain.terms {
        let i = map
            .get(&(1u8, w.tensor.clone(), w.module))
            .ok_or_else(|| Error::Invalid("element leaves the truncated basis".into()))?;
        out[*i] = out[*i].add(c);
    }
    Ok(out)
}

fn combine(fr: &FrobeniusAlgebra, basis: &[TateElement], c: &[Scalar], degree: i64) -> TateElement {
    let mut acc = TateElement::zero(degree);
    for (b, ci) in basis.iter().zip(c) {
        if !ci.is_zero() {
            acc = acc.add(&b.scale(ci)).unwrap();
        }
    }
    let _ = fr;
    acc
}

/// The matrix of the differential from degree `k` to `k + 1`, columns
/// indexed by the degree-`k` basis.
fn differential_matrix(
    fr: &FrobeniusAlgebra,
    kind: ComplexKind,
    window: &Window,
    k: i64,
) -> Result<(Vec<TateElement>, Matrix)> {
    let src = basis_in_degree(fr, kind, window, k);
    let dst = basis_in_degree(fr, kind, window, k + 1);
    let map = index_map(&dst);
    let mut m = Matrix::zero(fr.field(), dst.len(), src.len());
    for (j, b) in src.iter().enumerate() {
        let db = apply_differential(fr, kind, window, b)?;
        let col = coords(fr, &dst, &map, &db)?;
        for (i, c) in col.into_iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    Ok((src, m))
}

/// Exact homology over the certified window, with deterministic
/// representatives: kernel vectors (in canonical order) greedily kept while
/// they increase the rank over the boundary space.
pub fn homology_table(
    fr: &FrobeniusAlgebra,
    kind: ComplexKind,
    window: &Window,
) -> Result<HomologyTable> {
    certify_window(fr, window)?;
    let mut degrees = BTreeMap::new();
    for k in window.k_min..=window.k_max {
        let (basis, d_out) = differential_matrix(fr, kind, window, k)?;
        let (below, d_in) = differential_matrix(fr, kind, window, k - 1)?;
        let kernel = d_out.nullspace();
        let cycle_rank = kernel.len();
        // Boundary vectors: images of the degree-(k-1) basis, in basis-of-k
        // coordinates (the columns of d_in).
        let mut boundaries: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..below.len() {
            boundaries.push((0..basis.len()).map(|i| d_in.at(i, j).clone()).collect());
        }
        let boundary_rank = rank_of(fr, basis.len(), &boundaries);
        let mut kept: Vec<Vec<Scalar>> = boundaries.clone();
        let mut rank = boundary_rank;
        let mut representatives = Vec::new();
        for v in kernel {
            kept.push(v.clone());
            let r = rank_of(fr, basis.len(), &kept);
            if r > rank {
                rank = r;
                representatives.push(combine(fr, &basis, &v, k));
            } else {
                kept.pop();
            }
        }
        let dim = cycle_rank - boundary_rank;
        debug_assert_eq!(dim, representatives.len());
        degrees.insert(
            k,
            DegreeSummary { degree: k, cycle_rank, boundary_rank, dim, representatives },
        );
    }
    Ok(HomologyTable { kind, window: *window, degrees })
}

fn rank_of(fr: &FrobeniusAlgebra, rows: usize, cols: &[Vec<Scalar>]) -> usize {
    let mut m = Matrix::zero(fr.field(), rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c.clone());
            }
        }
    }
    m.rank()
}

/// Expresses a cycle of degree `k` as a class: coordinates on the stored
/// representatives, modulo boundaries. Errors when the input is not a cycle
/// in the window or not in the span.
pub fn class_of(
    fr: &FrobeniusAlgebra,
    kind: ComplexKind,
    window: &Window,
    table: &HomologyTable,
    x: &TateElement,
) -> Result<Vec<Scalar>> {
    let k = x.degree;
    let summary = table
        .degrees
        .get(&k)
        .ok_or_else(|| Error::Invalid(format!("degree {k} is outside the table window")))?;
    let dx = apply_differential(fr, kind, window, x)?;
    if !dx.is_zero() {
        return Err(Error::Invalid("not a cycle".into()));
    }
    let basis = basis_in_degree(fr, kind, window, k);
    let map = index_map(&basis);
    let target = coords(fr, &basis, &map, x)?;
    // Solve [boundaries | representatives] c = x; the representative block
    // of the solution is the class.
    let (below, d_in) = differential_matrix(fr, kind, window, k - 1)?;
    let reps: Vec<Vec<Scalar>> = summary
        .representatives
        .iter()
        .map(|r| coords(fr, &basis, &map, r))
        .collect::<Result<_>>()?;
    let ncols = below.len() + reps.len();
    let mut m = Matrix::zero(fr.field(), basis.len(), ncols);
    for j in 0..below.len() {
        for i in 0..basis.len() {
            let c = d_in.at(i, j).clone();
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    for (j, r) in reps.iter().enumerate() {
        for (i, c) in r.iter().enumerate() {
            if !c.is_zero() {
                m.set(i, below.len() + j, c.clone());
            }
        }
    }
    let sol = m
        .solve(&target)
        .ok_or_else(|| Error::Invalid("cycle is not in the span of the computed classes".into()))?;
    Ok(sol[below.len()..].to_vec())
}

/// The product of two single-sector two-sided elements: cup when both are
/// pure cochains, the star product when both are pure chains. Mixed-sector
/// products have no chain-level formula here and are refused.
pub fn tate_product(
    fr: &FrobeniusAlgebra,
    x: &TateElement,
    y: &TateElement,
    arity_cap: usize,
) -> Result<TateElement> {
    let pure_cochain = x.chain.is_zero() && y.chain.is_zero();
    let pure_chain = x.cochain.is_zero() && y.cochain.is_zero();
    if pure_cochain {
        let f = cup(&fr.algebra, &x.cochain, &y.cochain, arity_cap)?;
        let mut out = TateElement::from_cochain(f);
        out.degree = x.degree + y.degree;
        out.cochain.degree = out.degree;
        Ok(out)
    } else if pure_chain {
        let s = gh_star(fr, &x.chain, &y.chain)?;
        let degree = x.degree + y.degree;
        Ok(TateElement { degree, cochain: Cochain::zero(degree), chain: s })
    } else {
        Err(Error::Invalid(
            "mixed-sector products are not defined at this chain level".into(),
        ))
    }
}
