//! varlab — an exact-arithmetic engine for varieties of nonassociative
//! algebras over the rationals.
//!
//! The crate decides, degree by degree, questions about a variety presented
//! by polynomial identities: whether a candidate identity is a law, whether
//! the variety is algebraically coherent (via an eight-parameter rewriting
//! criterion), how an alternating variety splits between the Lie and the
//! antiassociative branches, and whether the canonical comparison map from a
//! coproduct of flat kernels to the flat kernel of a coproduct is injective
//! or surjective at each multidegree. All arithmetic is exact; every verdict
//! is backed by a finite linear-algebra computation that tests can replay.

pub mod cli;
pub mod coherence;
pub mod fdalg;
pub mod flatkappa;
pub mod matrix;
pub mod poly;
pub mod tideal;
pub mod variety;
pub mod words;

pub use poly::{Polynomial, Scalar};
pub use tideal::Tables;
pub use variety::{Identity, VarietyPresentation};
pub use words::{Multidegree, VarId, Word};
