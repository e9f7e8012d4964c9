//! An exact-arithmetic engine for string-topology operations on the
//! Hochschild complexes of symmetric dg Frobenius algebras.
//!
//! The crate provides:
//!
//! - graded linear algebra over `Q` and `F_p` with no floating point
//!   anywhere ([`scalar`], [`linalg`], [`graded`]);
//! - dg algebras, `A∞` relation checking, and symmetric Frobenius
//!   structures with exactly computed diagonal classes, Euler classes and
//!   coproducts ([`dga`], [`ainfinity`], [`frobenius`]);
//! - normalized Hochschild chains and cochains with their differentials,
//!   the Connes operator, and the chain/cochain duality induced by the
//!   Frobenius pairing ([`hochschild`]);
//! - the cup product, the algebraic Goresky–Hingston-type coproduct-dual
//!   product on chains, and the Tate–Hochschild mapping-cone complex with
//!   its pairing ([`products`]);
//! - exact homology of the truncated complexes with certified windows and
//!   induced products on classes ([`homology`]);
//! - two small configuration-space models (a two-point model and its
//!   algebra counterpart) together with the elementwise geometric coproduct
//!   pipeline that they support ([`conf`]);
//! - closed-form loop homology product/coproduct calculus for
//!   three-dimensional lens spaces, including the coproduct-invariance
//!   search and exhaustive scans ([`lens`]).

pub mod ainfinity;
pub mod conf;
pub mod dga;
pub mod error;
pub mod frobenius;
pub mod graded;
pub mod hochschild;
pub mod homology;
pub mod lens;
pub mod linalg;
pub mod products;
pub mod scalar;
pub mod serialize;
pub mod sparse;
pub mod specfile;
