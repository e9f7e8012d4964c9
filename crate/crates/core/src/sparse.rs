//! Sparse vectors over a field, keyed by basis index.
//!
//! All element arithmetic in the engine goes through these maps; keys are
//! ordered (`BTreeMap`) so every textual or JSON rendering of an element is
//! deterministic.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

/// A sparse linear combination of basis elements, keyed by basis index.
/// Zero coefficients are never stored.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// Add `c * v` into `acc`, dropping entries that cancel to zero.
pub fn axpy(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_term(acc, *k, c.mul(x));
    }
}

/// Add a single term into `acc`, dropping it if it cancels.
pub fn add_term(acc: &mut SparseVec, k: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(k) {
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

/// `u + v`.
pub fn add(u: &SparseVec, v: &SparseVec) -> SparseVec {
    let mut acc = u.clone();
    for (k, x) in v {
        add_term(&mut acc, *k, x.clone());
    }
    acc
}

/// `u - v`.
pub fn sub(u: &SparseVec, v: &SparseVec) -> SparseVec {
    let mut acc = u.clone();
    for (k, x) in v {
        add_term(&mut acc, *k, x.neg());
    }
    acc
}

/// `c * v`.
pub fn scale(c: &Scalar, v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    axpy(&mut acc, c, v);
    acc
}

/// The singleton vector `c * e_k`.
pub fn single(k: usize, c: Scalar) -> SparseVec {
    let mut v = SparseVec::new();
    add_term(&mut v, k, c);
    v
}

/// The basis vector `e_k` with coefficient one.
pub fn basis(field: Field, k: usize) -> SparseVec {
    single(k, Scalar::one(field))
}
