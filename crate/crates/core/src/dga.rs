//! Differential graded algebras with finite labelled bases.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::{sign_pow, GradedMap, GradedSpace};
use crate::scalar::{Field, Scalar};
use crate::sparse::{self, SparseVec};

/// A finite-dimensional dg algebra: graded space, unit, multiplication
/// table and a degree `+1` differential. The table stores structure
/// constants sparsely: `mul[(i,j)]` is the expansion of the product of
/// basis elements `i` and `j`; absent keys mean the product is zero.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    pub space: GradedSpace,
    pub unit: usize,
    pub mul: BTreeMap<(usize, usize), SparseVec>,
    pub d: GradedMap,
}

impl DgAlgebra {
    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    /// Product of two basis elements as a sparse vector.
    pub fn mul_basis(&self, i: usize, j: usize) -> SparseVec {
        self.mul.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Bilinear extension of the multiplication table. No Koszul signs are
    /// inserted here: the table already encodes the product of basis
    /// elements, and scalars are even.
    pub fn mul_elem(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(prod) = self.mul.get(&(*i, *j)) {
                    sparse::axpy(&mut acc, &a.mul(b), prod);
                }
            }
        }
        acc
    }

    pub fn d_elem(&self, x: &SparseVec) -> SparseVec {
        self.d.apply(x)
    }

    pub fn unit_elem(&self) -> SparseVec {
        sparse::basis(self.field(), self.unit)
    }

    /// Indices of basis elements other than the unit. For the augmented
    /// algebras this engine works with (unit in degree zero, basis adapted
    /// to the augmentation) this is a basis of the augmentation ideal.
    pub fn non_unit_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.unit).collect()
    }

    /// `true` when the algebra is concentrated in degrees `>= 0` with
    /// one-dimensional degree-0 part spanned by the unit.
    pub fn is_connected(&self) -> bool {
        self.degree(self.unit) == 0
            && (0..self.dim()).all(|i| self.degree(i) >= 0)
            && self.space.basis_in_degree(0) == vec![self.unit]
    }

    /// Connected with nothing in degree 1.
    pub fn is_simply_connected(&self) -> bool {
        self.is_connected() && self.space.basis_in_degree(1).is_empty()
    }

    /// Exhaustively check graded commutativity on basis pairs.
    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let lhs = self.mul_basis(i, j);
                let sign = sign_pow(self.degree(i) * self.degree(j));
                let rhs = sparse::scale(&Scalar::from_i64(self.field(), sign), &self.mul_basis(j, i));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Check all dg-algebra axioms on the whole basis. Returns a list of
    /// human-readable violations (empty = valid): degree homogeneity of the
    /// table and the differential, unitality, associativity, `d∘d = 0` and
    /// the graded Leibniz rule `d(ab) = d(a)b + (-1)^{|a|} a d(b)`.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let n = self.dim();
        let s = &self.space;

        if let Err(e) = self.d.check_degree(s) {
            errs.push(format!("differential: {e}"));
        }
        for ((i, j), prod) in &self.mul {
            let want = s.degree(*i) + s.degree(*j);
            for k in prod.keys() {
                if s.degree(*k) != want {
                    errs.push(format!(
                        "product {}·{} has a component {} of degree {} (expected {})",
                        s.label(*i), s.label(*j), s.label(*k), s.degree(*k), want
                    ));
                }
            }
        }
        if s.degree(self.unit) != 0 {
            errs.push(format!("unit {} has nonzero degree", s.label(self.unit)));
        }
        for i in 0..n {
            let e = sparse::basis(self.field(), i);
            if self.mul_basis(self.unit, i) != e {
                errs.push(format!("1·{} ≠ {}", s.label(i), s.label(i)));
            }
            if self.mul_basis(i, self.unit) != e {
                errs.push(format!("{}·1 ≠ {}", s.label(i), s.label(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ab_c = self.mul_elem(&self.mul_basis(i, j), &sparse::basis(self.field(), k));
                    let a_bc = self.mul_elem(&sparse::basis(self.field(), i), &self.mul_basis(j, k));
                    if ab_c != a_bc {
                        errs.push(format!(
                            "associativity fails on ({},{},{})",
                            s.label(i), s.label(j), s.label(k)
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            let dd = self.d.apply(&self.d.columns[i]);
            if !dd.is_empty() {
                errs.push(format!("d² ≠ 0 on {}: {}", s.label(i), s.render(&dd)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.d_elem(&self.mul_basis(i, j));
                let mut rhs = self.mul_elem(&self.d.columns[i], &sparse::basis(self.field(), j));
                let sign = Scalar::from_i64(self.field(), sign_pow(self.degree(i)));
                let right = self.mul_elem(&sparse::basis(self.field(), i), &self.d.columns[j]);
                sparse::axpy(&mut rhs, &sign, &right);
                if lhs != rhs {
                    errs.push(format!(
                        "Leibniz fails on ({},{}): d(ab)={}, d(a)b±a d(b)={}",
                        s.label(i), s.label(j), s.render(&lhs), s.render(&rhs)
                    ));
                }
            }
        }
        errs
    }
}

/// The tensor product dg algebra `A ⊗ B` with the Koszul product
/// `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'` and differential
/// `d(a⊗b) = d(a)⊗b + (-1)^{|a|} a⊗d(b)`. Basis labels are
/// `"<a>(x)<b>"`.
pub fn tensor_dga(a: &DgAlgebra, b: &DgAlgebra) -> Result<DgAlgebra> {
    if a.field() != b.field() {
        return Err(Error::Invalid("tensor factors over different fields".into()));
    }
    let field = a.field();
    let na = a.dim();
    let nb = b.dim();
    let idx = |i: usize, j: usize| i * nb + j;

    let mut basis = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            basis.push((
                format!("{}(x){}", a.space.label(i), b.space.label(j)),
                a.degree(i) + b.degree(j),
            ));
        }
    }
    let space = GradedSpace::new(field, basis)?;

    let mut mul = BTreeMap::new();
    for i in 0..na {
        for j in 0..nb {
            for k in 0..na {
                for l in 0..nb {
                    let sign = sign_pow(b.degree(j) * a.degree(k));
                    let pa = a.mul_basis(i, k);
                    let pb = b.mul_basis(j, l);
                    let mut out = SparseVec::new();
                    for (x, ca) in &pa {
                        for (y, cb) in &pb {
                            let c = ca.mul(cb).signed(sign);
                            sparse::add_term(&mut out, idx(*x, *y), c);
                        }
                    }
                    if !out.is_empty() {
                        mul.insert((idx(i, j), idx(k, l)), out);
                    }
                }
            }
        }
    }

    let mut d = GradedMap::zero(na * nb, 1);
    for i in 0..na {
        for j in 0..nb {
            let mut col = SparseVec::new();
            for (x, c) in &a.d.columns[i] {
                sparse::add_term(&mut col, idx(*x, j), c.clone());
            }
            for (y, c) in &b.d.columns[j] {
                sparse::add_term(&mut col, idx(i, *y), c.signed(sign_pow(a.degree(i))));
            }
            d.columns[idx(i, j)] = col;
        }
    }

    Ok(DgAlgebra { space, unit: idx(a.unit, b.unit), mul, d })
}
