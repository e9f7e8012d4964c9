//! Symmetric dg Frobenius algebras of a fixed dimension `n`.
//!
//! The pairing `⟨-,-⟩` has degree `-n`: it is nonzero only on
//! `A^i ⊗ A^{n-i}`, is graded symmetric, non-degenerate, invariant
//! (`⟨ab,c⟩ = ⟨a,bc⟩`) and satisfies `⟨d(a),b⟩ = -(-1)^{|a|} ⟨a,d(b)⟩`.
//!
//! The central derived quantity is the diagonal class
//! `Δ(1) = Σ_i e_i ⊗ f_i ∈ (A ⊗ A)^n`, the copairing characterized by
//! `x = Σ_i (-1)^{|e_i||x|} e_i ⟨x, f_i⟩` for every homogeneous `x`. It is
//! computed by exact inversion of the pairing blocks, one degree at a time.
//! The coproduct is then the bimodule extension `Δ(a) = a·Δ(1)` (with
//! `a·(e⊗f) = (ae)⊗f`), the Euler class is `e = μ(Δ(1))`, and
//! `γ(a) = Σ_i (-1)^{|f_i||a|} e_i a f_i`.

use std::collections::BTreeMap;

use crate::dga::{tensor_dga, DgAlgebra};
use crate::error::{Error, Result};
use crate::graded::{sign_pow, GradedMap, GradedSpace};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};
use crate::sparse::{self, SparseVec};

/// A symmetric dg Frobenius algebra: a dg algebra plus a pairing of degree
/// `-n`. Pairing entries are stored sparsely on basis pairs.
#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    pub algebra: DgAlgebra,
    /// `pairing[(i,j)] = ⟨e_i, e_j⟩`; absent keys are zero.
    pub pairing: BTreeMap<(usize, usize), Scalar>,
    /// The dimension `n` (top degree).
    pub dim_n: i64,
}

/// The diagonal class `Δ(1)` as a list of `(left, right, coefficient)`
/// triples over basis pairs, ordered deterministically.
pub type DiagonalClass = Vec<(usize, usize, Scalar)>;

impl FrobeniusAlgebra {
    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn pair_basis(&self, i: usize, j: usize) -> Scalar {
        self.pairing
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field()))
    }

    /// Bilinear extension of the pairing.
    pub fn pair(&self, x: &SparseVec, y: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero(self.field());
        for (i, a) in x {
            for (j, b) in y {
                acc = acc.add(&a.mul(b).mul(&self.pair_basis(*i, *j)));
            }
        }
        acc
    }

    /// Check every Frobenius axiom on the whole basis; empty = valid.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = self.algebra.validate();
        let a = &self.algebra;
        let s = &a.space;
        let n = self.dim_n;

        // (1) Degree: ⟨-,-⟩ nonzero only on A^i ⊗ A^{n-i}.
        for ((i, j), v) in &self.pairing {
            if !v.is_zero() && s.degree(*i) + s.degree(*j) != n {
                errs.push(format!(
                    "pairing ⟨{},{}⟩ ≠ 0 but degrees {}+{} ≠ {n}",
                    s.label(*i), s.label(*j), s.degree(*i), s.degree(*j)
                ));
            }
        }
        // (2) Non-degeneracy, block by block: the matrix of ⟨-,-⟩ on
        // A^d ⊗ A^{n-d} must be invertible.
        for d in s.support() {
            let rows = s.basis_in_degree(d);
            let cols = s.basis_in_degree(n - d);
            if rows.len() != cols.len() {
                errs.push(format!(
                    "dim A^{d} = {} ≠ dim A^{} = {}: pairing cannot be perfect",
                    rows.len(), n - d, cols.len()
                ));
                continue;
            }
            let mut m = Matrix::zero(self.field(), rows.len(), cols.len());
            for (r, &i) in rows.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    m.set(r, c, self.pair_basis(i, j));
                }
            }
            if m.rank() != rows.len() {
                errs.push(format!("pairing degenerate on A^{d} ⊗ A^{}", n - d));
            }
        }
        // (3) Invariance ⟨ab,c⟩ = ⟨a,bc⟩ on all basis triples.
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                for k in 0..a.dim() {
                    let lhs = self.pair(&a.mul_basis(i, j), &sparse::basis(self.field(), k));
                    let rhs = self.pair(&sparse::basis(self.field(), i), &a.mul_basis(j, k));
                    if lhs != rhs {
                        errs.push(format!(
                            "invariance fails: ⟨{}·{},{}⟩ = {} but ⟨{},{}·{}⟩ = {}",
                            s.label(i), s.label(j), s.label(k), lhs,
                            s.label(i), s.label(j), s.label(k), rhs
                        ));
                    }
                }
            }
        }
        // (4) Differential compatibility ⟨d(a),b⟩ = -(-1)^{|a|} ⟨a,d(b)⟩.
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.pair(&a.d.columns[i], &sparse::basis(self.field(), j));
                let rhs = self
                    .pair(&sparse::basis(self.field(), i), &a.d.columns[j])
                    .signed(-sign_pow(s.degree(i)));
                if lhs != rhs {
                    errs.push(format!(
                        "pairing/differential compatibility fails on ({},{})",
                        s.label(i), s.label(j)
                    ));
                }
            }
        }
        // Symmetry ⟨a,b⟩ = (-1)^{|a||b|} ⟨b,a⟩.
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.pair_basis(i, j);
                let rhs = self.pair_basis(j, i).signed(sign_pow(s.degree(i) * s.degree(j)));
                if lhs != rhs {
                    errs.push(format!(
                        "symmetry fails on ({},{})",
                        s.label(i), s.label(j)
                    ));
                }
            }
        }
        errs
    }

    /// The diagonal class `Δ(1) = Σ e_i ⊗ f_i`, computed per degree block:
    /// the coefficients `c_{ij}` on pairs with `|e_i| = d`, `|f_j| = n-d`
    /// solve `Σ_{ij} c_{ij} (-1)^{d·d} ⟨x, f_j⟩ e_i = x` for every basis
    /// `x ∈ A^d`, an exactly-solved linear system per block. Errors if any
    /// block is singular (degenerate pairing).
    pub fn diagonal_class(&self) -> Result<DiagonalClass> {
        let s = &self.algebra.space;
        let n = self.dim_n;
        let mut out: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for d in s.support() {
            let left = s.basis_in_degree(d); // candidates for e_i
            let right = s.basis_in_degree(n - d); // candidates for f_j
            if left.is_empty() || right.is_empty() {
                continue;
            }
            // Unknowns: c_{ij} over left × right. Equations: for each basis
            // x in A^d and each basis slot u in A^d (coefficient of e_i = u):
            //   Σ_j c_{uj} (-1)^{d|x|} ⟨x, f_j⟩ = δ_{u,x}.
            // The u-index decouples, leaving one |right|-sized solve per x
            // with the same matrix M_{xj} = (-1)^{d²} ⟨x, f_j⟩.
            let sign = sign_pow(d * d);
            let mut m = Matrix::zero(self.field(), left.len(), right.len());
            for (r, &x) in left.iter().enumerate() {
                for (c, &j) in right.iter().enumerate() {
                    m.set(r, c, self.pair_basis(x, j).signed(sign));
                }
            }
            for (u_pos, &u) in left.iter().enumerate() {
                let mut rhs = vec![Scalar::zero(self.field()); left.len()];
                rhs[u_pos] = Scalar::one(self.field());
                let sol = m.solve(&rhs).ok_or_else(|| {
                    Error::Invalid(format!("pairing block at degree {d} is singular"))
                })?;
                for (c, coeff) in sol.into_iter().enumerate() {
                    if !coeff.is_zero() {
                        out.insert((u, right[c]), coeff);
                    }
                }
            }
        }
        Ok(out.into_iter().map(|((i, j), c)| (i, j, c)).collect())
    }

    /// The coproduct `Δ(a) = a·Δ(1)` of an element, as a sparse element of
    /// `A ⊗ A` over basis pairs.
    pub fn coproduct(&self, x: &SparseVec) -> Result<Vec<(usize, usize, Scalar)>> {
        let diag = self.diagonal_class()?;
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (i, a) in x {
            for (e, f, c) in &diag {
                let prod = self.algebra.mul_basis(*i, *e);
                for (k, m) in &prod {
                    let coeff = a.mul(c).mul(m);
                    merge_pair(&mut acc, (*k, *f), coeff);
                }
            }
        }
        Ok(acc.into_iter().map(|((i, j), c)| (i, j, c)).collect())
    }

    /// The Euler class `e = μ(Δ(1)) = Σ_i e_i f_i`.
    pub fn euler_class(&self) -> Result<SparseVec> {
        let mut acc = SparseVec::new();
        for (e, f, c) in self.diagonal_class()? {
            sparse::axpy(&mut acc, &c, &self.algebra.mul_basis(e, f));
        }
        Ok(acc)
    }

    /// The Euler characteristic read off the Euler class: the coefficient
    /// of the chosen top-degree basis direction. More robustly, `χ` equals
    /// the alternating sum of graded dimensions, which is what this
    /// computes; the Euler-class statement is cross-checked in tests.
    pub fn euler_characteristic(&self) -> i64 {
        let s = &self.algebra.space;
        (0..s.dim()).map(|i| sign_pow(s.degree(i))).sum()
    }

    /// `γ(a) = Σ_i (-1)^{|f_i||a|} e_i a f_i`.
    pub fn gamma(&self, x: &SparseVec) -> Result<SparseVec> {
        let diag = self.diagonal_class()?;
        let s = &self.algebra.space;
        let mut acc = SparseVec::new();
        for (i, coeff) in x {
            for (e, f, c) in &diag {
                let sign = sign_pow(s.degree(*f) * s.degree(*i));
                let ea = self.algebra.mul_basis(*e, *i);
                for (k, m1) in &ea {
                    let eaf = self.algebra.mul_basis(*k, *f);
                    let factor = coeff.mul(c).mul(m1).signed(sign);
                    sparse::axpy(&mut acc, &factor, &eaf);
                }
            }
        }
        Ok(acc)
    }

    /// Reduce all structure constants modulo a prime, producing the same
    /// algebra over `F_p`. Errors if any denominator vanishes mod `p`.
    pub fn to_prime_field(&self, p: u64) -> Result<FrobeniusAlgebra> {
        if self.field() != Field::Q {
            return Err(Error::Invalid("can only reduce a rational algebra".into()));
        }
        let s = &self.algebra.space;
        let field = Field::Fp(p);
        let space = GradedSpace::new(
            field,
            (0..s.dim()).map(|i| (s.label(i).to_string(), s.degree(i))).collect(),
        )?;
        let reduce_vec = |v: &SparseVec| -> Result<SparseVec> {
            let mut out = SparseVec::new();
            for (k, c) in v {
                sparse::add_term(&mut out, *k, c.reduce_mod(p)?);
            }
            Ok(out)
        };
        let mut mul = BTreeMap::new();
        for (key, v) in &self.algebra.mul {
            let r = reduce_vec(v)?;
            if !r.is_empty() {
                mul.insert(*key, r);
            }
        }
        let mut d = GradedMap::zero(s.dim(), 1);
        for i in 0..s.dim() {
            d.columns[i] = reduce_vec(&self.algebra.d.columns[i])?;
        }
        let mut pairing = BTreeMap::new();
        for (key, c) in &self.pairing {
            let r = c.reduce_mod(p)?;
            if !r.is_zero() {
                pairing.insert(*key, r);
            }
        }
        Ok(FrobeniusAlgebra {
            algebra: DgAlgebra { space, unit: self.algebra.unit, mul, d },
            pairing,
            dim_n: self.dim_n,
        })
    }
}

fn merge_pair(acc: &mut BTreeMap<(usize, usize), Scalar>, key: (usize, usize), c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// The cohomology of an `n`-sphere: one generator `v` in degree `n` with
/// `v² = 0` and `⟨1,v⟩ = ⟨v,1⟩ = 1`.
pub fn sphere_model(field: Field, n: i64) -> Result<FrobeniusAlgebra> {
    if n < 1 {
        return Err(Error::Invalid("sphere dimension must be at least 1".into()));
    }
    let space = GradedSpace::new(field, vec![("1".into(), 0), ("v".into(), n)])?;
    let mut mul = BTreeMap::new();
    mul.insert((0, 0), sparse::basis(field, 0));
    mul.insert((0, 1), sparse::basis(field, 1));
    mul.insert((1, 0), sparse::basis(field, 1));
    let mut pairing = BTreeMap::new();
    pairing.insert((0, 1), Scalar::one(field));
    pairing.insert((1, 0), Scalar::one(field));
    Ok(FrobeniusAlgebra {
        algebra: DgAlgebra { space, unit: 0, mul, d: GradedMap::zero(2, 1) },
        pairing,
        dim_n: n,
    })
}

/// The cohomology of complex projective `m`-space: a truncated polynomial
/// algebra `k[x]/(x^{m+1})` with `|x| = 2` and `⟨x^i, x^{m-i}⟩ = 1`.
pub fn cp_model(field: Field, m: i64) -> Result<FrobeniusAlgebra> {
    if m < 1 {
        return Err(Error::Invalid("projective space dimension must be at least 1".into()));
    }
    let m = m as usize;
    let labels: Vec<(String, i64)> = (0..=m)
        .map(|i| {
            let label = match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            };
            (label, 2 * i as i64)
        })
        .collect();
    let space = GradedSpace::new(field, labels)?;
    let mut mul = BTreeMap::new();
    for i in 0..=m {
        for j in 0..=m {
            if i + j <= m {
                mul.insert((i, j), sparse::basis(field, i + j));
            }
        }
    }
    let mut pairing = BTreeMap::new();
    for i in 0..=m {
        pairing.insert((i, m - i), Scalar::one(field));
    }
    Ok(FrobeniusAlgebra {
        algebra: DgAlgebra { space, unit: 0, mul, d: GradedMap::zero(m + 1, 1) },
        pairing,
        dim_n: 2 * m as i64,
    })
}

/// Tensor product of Frobenius algebras, modelling a product of manifolds.
/// The pairing is `⟨a⊗b, c⊗d⟩ = (-1)^{|b||c|} ⟨a,c⟩ ⟨b,d⟩` and the
/// dimension adds.
pub fn product_model(a: &FrobeniusAlgebra, b: &FrobeniusAlgebra) -> Result<FrobeniusAlgebra> {
    let algebra = tensor_dga(&a.algebra, &b.algebra)?;
    let nb = b.algebra.dim();
    let idx = |i: usize, j: usize| i * nb + j;
    let mut pairing = BTreeMap::new();
    for ((i, k), pa) in &a.pairing {
        for ((j, l), pb) in &b.pairing {
            let sign = sign_pow(b.algebra.degree(*j) * a.algebra.degree(*k));
            let c = pa.mul(pb).signed(sign);
            if !c.is_zero() {
                pairing.insert((idx(*i, *j), idx(*k, *l)), c);
            }
        }
    }
    Ok(FrobeniusAlgebra { algebra, pairing, dim_n: a.dim_n + b.dim_n })
}
