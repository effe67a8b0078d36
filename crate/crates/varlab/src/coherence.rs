//! The λ-criterion for algebraic coherence and the classification of
//! alternating varieties.
//!
//! A variety of algebras is algebraically coherent exactly when the class of
//! `z*(x*y)` can be rewritten, modulo the variety's laws, as a rational
//! combination of the eight degree-(1,1,1) words in which `z` is attached to
//! the outside: the fixed term list
//! `t = (y(zx), x(yz), y(xz), x(zy), (zx)y, (yz)x, (xz)y, (zy)x)`.
//! This module solves that affine linear system exactly, and classifies
//! alternating varieties by which of the Jacobi and antiassociativity laws
//! they satisfy.

use std::fmt;

use thiserror::Error;

use crate::matrix::{self, RowReducer, Vector};
use crate::poly::{Polynomial, Scalar};
use crate::tideal::Tables;
use crate::variety::{parse_identity, VarietyPresentation};
use crate::words::{Multidegree, VarId};

/// The left-hand side being rewritten.
pub const LAMBDA_TARGET: &str = "z*(x*y)";

/// The eight candidate terms t₁..t₈, in the fixed reporting order.
pub const LAMBDA_TERMS: [&str; 8] = [
    "y*(z*x)",
    "x*(y*z)",
    "y*(x*z)",
    "x*(z*y)",
    "(z*x)*y",
    "(y*z)*x",
    "(x*z)*y",
    "(z*y)*x",
];

fn term_poly(src: &str) -> Polynomial {
    parse_identity(src).expect("fixed term parses").poly().clone()
}

fn degree_xyz() -> Multidegree {
    Multidegree::from_counts(
        ["x", "y", "z"]
            .into_iter()
            .map(|n| (VarId::new(n).unwrap(), 1)),
    )
}

/// `z*(x*y) - Σ λᵢ tᵢ`: the polynomial that must be a law for `lambda` to
/// witness coherence.
pub fn lambda_residual(lambda: &[Scalar]) -> Polynomial {
    assert_eq!(lambda.len(), 8, "eight coefficients required");
    let mut p = term_poly(LAMBDA_TARGET);
    for (coeff, term) in lambda.iter().zip(LAMBDA_TERMS) {
        p = p.sub(&term_poly(term).scale(coeff));
    }
    p
}

/// Outcome of the λ-criterion: whether the affine system is solvable, one
/// particular solution, and a basis of the homogeneous solution space.
#[derive(Clone, Debug)]
pub struct CoherenceSolution {
    pub solvable: bool,
    /// A particular solution (free coordinates zero, pivots in term order),
    /// when solvable.
    pub particular: Option<Vec<Scalar>>,
    /// Basis of the homogeneous solution space: the full solution set is
    /// `particular + span(freedom)`.
    pub freedom: Vec<Vec<Scalar>>,
}

impl CoherenceSolution {
    pub fn freedom_rank(&self) -> usize {
        self.freedom.len()
    }

    /// Whether `lambda` lies in the affine solution set.
    pub fn contains(&self, lambda: &[Scalar]) -> bool {
        let Some(particular) = &self.particular else {
            return false;
        };
        assert_eq!(lambda.len(), 8, "eight coefficients required");
        let mut reducer = RowReducer::new(8);
        for row in &self.freedom {
            reducer.insert(row.clone());
        }
        let diff: Vector = lambda
            .iter()
            .zip(particular)
            .map(|(a, b)| a - b)
            .collect();
        reducer.contains(&diff)
    }
}

/// Solves `[z(xy)] = Σ λᵢ [tᵢ]` in the quotient of the (x:1,y:1,z:1)
/// component by the variety's consequence space.
pub fn solve_coherence(tables: &Tables, variety: &VarietyPresentation) -> CoherenceSolution {
    let space = tables.consequence_space(variety, &degree_xyz());
    let target = space.reduce(&term_poly(LAMBDA_TARGET));
    let columns: Vec<Polynomial> = LAMBDA_TERMS
        .iter()
        .map(|t| space.reduce(&term_poly(t)))
        .collect();

    // Coordinates over the quotient basis.
    let quotient = space.quotient_basis();
    let coords = |p: &Polynomial| -> Vector {
        quotient.iter().map(|w| p.coeff(w)).collect()
    };
    let cols: Vec<Vector> = columns.iter().map(&coords).collect();
    match matrix::solve(&cols, &coords(&target)) {
        Some((particular, freedom)) => CoherenceSolution {
            solvable: true,
            particular: Some(particular),
            freedom,
        },
        None => CoherenceSolution {
            solvable: false,
            particular: None,
            freedom: Vec::new(),
        },
    }
}

pub fn is_algebraically_coherent(tables: &Tables, variety: &VarietyPresentation) -> bool {
    solve_coherence(tables, variety).solvable
}

/// Verdict for an alternating variety.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlternatingClass {
    LieBranch,
    AntiassociativeBranch,
    Both,
    Neither,
}

impl fmt::Display for AlternatingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlternatingClass::LieBranch => "LieBranch",
            AlternatingClass::AntiassociativeBranch => "AntiassociativeBranch",
            AlternatingClass::Both => "Both",
            AlternatingClass::Neither => "Neither",
        })
    }
}

#[derive(Debug, Error)]
#[error("variety {name:?} is not alternating: x*x is not one of its laws")]
pub struct NotAlternating {
    pub name: String,
}

/// Classification data for an alternating variety.
#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub verdict: AlternatingClass,
    /// Whether the Jacobi identity is a law.
    pub jacobi: bool,
    /// Whether antiassociativity is a law.
    pub antiassociative: bool,
    /// Whether all triple products vanish (x*(y*z) is a law).
    pub triple_products_vanish: bool,
    /// The λ-criterion verdict, for cross-checking against the
    /// classification: Neither must coincide with non-coherence.
    pub coherent: bool,
}

/// Classifies an alternating variety by the Jacobi and antiassociativity
/// laws.
///
/// When both laws hold, every triple product necessarily vanishes and the
/// variety sits inside the antiassociative branch, which is the verdict
/// reported; `Both` is reserved for the (unrealizable over the rationals)
/// case where the two laws hold without the triple-product collapse.
pub fn classify_alternating(
    tables: &Tables,
    variety: &VarietyPresentation,
) -> Result<ClassifyReport, NotAlternating> {
    if !tables.is_law(variety, &term_poly("x*x")).holds {
        return Err(NotAlternating {
            name: variety.name().to_string(),
        });
    }
    let jacobi = tables
        .is_law(variety, &term_poly("x*(y*z) + z*(x*y) + y*(z*x)"))
        .holds;
    let antiassociative = tables
        .is_law(variety, &term_poly("x*(y*z) + (x*y)*z"))
        .holds;
    let triple_products_vanish = tables.is_law(variety, &term_poly("x*(y*z)")).holds;
    let verdict = match (jacobi, antiassociative) {
        (true, false) => AlternatingClass::LieBranch,
        (false, true) => AlternatingClass::AntiassociativeBranch,
        (true, true) if triple_products_vanish => AlternatingClass::AntiassociativeBranch,
        (true, true) => AlternatingClass::Both,
        (false, false) => AlternatingClass::Neither,
    };
    Ok(ClassifyReport {
        verdict,
        jacobi,
        antiassociative,
        triple_products_vanish,
        coherent: is_algebraically_coherent(tables, variety),
    })
}
