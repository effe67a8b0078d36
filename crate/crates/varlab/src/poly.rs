//! Sparse polynomials in the free nonassociative algebra: finite rational
//! linear combinations of magma words, with substitution as the homomorphic
//! extension of a variable assignment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::{Multidegree, VarId, Word, WordView};

/// Exact rational coefficient; `BigRational` keeps itself in lowest terms
/// with a positive denominator.
pub type Scalar = BigRational;

pub fn scalar_int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn scalar_ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a scalar as `n` or `n/d`, the form the file formats use.
pub fn scalar_to_string(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational {text:?}: {reason}")]
pub struct ScalarParseError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `n` or `n/d` with optional leading minus.
pub fn scalar_from_str(text: &str) -> Result<Scalar, ScalarParseError> {
    let bad = |reason| ScalarParseError {
        text: text.to_string(),
        reason,
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
    let denom: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| bad("bad denominator"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Scalar::new(numer, denom))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("no value assigned to variable {0}")]
    MissingVariable(VarId),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
}

/// A polynomial: a map from words to nonzero rational coefficients, kept in
/// the deterministic word order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Word, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn monomial(w: Word) -> Polynomial {
        Polynomial::term(w, Scalar::one())
    }

    pub fn var(v: VarId) -> Polynomial {
        Polynomial::monomial(Word::leaf(v))
    }

    pub fn term(w: Word, c: Scalar) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(terms: I) -> Polynomial {
        let mut p = Polynomial::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Adds `c * w`, dropping the entry if the coefficient cancels to zero.
    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, k)| (w.clone(), k * c))
                .collect(),
        }
    }

    /// The bilinear magma product.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (wl, cl) in self.terms() {
            for (wr, cr) in other.terms() {
                out.add_term(Word::node(wl.clone(), wr.clone()), cl * cr);
            }
        }
        out
    }

    /// Variables occurring in some term.
    pub fn support(&self) -> BTreeSet<VarId> {
        let mut s = BTreeSet::new();
        for (w, _) in self.terms() {
            for (v, _) in w.multidegree().iter() {
                s.insert(v.clone());
            }
        }
        s
    }

    /// `Some(d)` when the polynomial is nonzero and every term has
    /// multidegree `d`; `None` otherwise.
    pub fn multidegree(&self) -> Option<Multidegree> {
        let mut it = self.terms.keys();
        let first = it.next()?.multidegree();
        for w in it {
            if w.multidegree() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.multidegree().is_some()
    }

    /// Splits into homogeneous parts, keyed by multidegree. Over an infinite
    /// field each part of a law is again a law, so everything downstream
    /// works one multidegree at a time.
    pub fn homogeneous_components(&self) -> BTreeMap<Multidegree, Polynomial> {
        let mut out: BTreeMap<Multidegree, Polynomial> = BTreeMap::new();
        for (w, c) in self.terms() {
            out.entry(w.multidegree())
                .or_default()
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// Homomorphic substitution: every variable of `self` must be assigned a
    /// polynomial; leaves map through the assignment and products map to
    /// products.
    pub fn substitute(&self, map: &BTreeMap<VarId, Polynomial>) -> Result<Polynomial, PolyError> {
        fn image(w: &Word, map: &BTreeMap<VarId, Polynomial>) -> Result<Polynomial, PolyError> {
            match w.view() {
                WordView::Leaf(v) => map
                    .get(v)
                    .cloned()
                    .ok_or_else(|| PolyError::MissingVariable(v.clone())),
                WordView::Node(l, r) => Ok(image(l, map)?.mul(&image(r, map)?)),
            }
        }
        let mut out = Polynomial::zero();
        for (w, c) in self.terms() {
            out = out.add(&image(w, map)?.scale(c));
        }
        Ok(out)
    }

    /// Substitution that leaves unassigned variables in place.
    pub fn substitute_partial(&self, map: &BTreeMap<VarId, Polynomial>) -> Polynomial {
        let mut full = map.clone();
        for v in self.support() {
            full.entry(v.clone()).or_insert_with(|| Polynomial::var(v));
        }
        self.substitute(&full).expect("all variables assigned")
    }

    /// Renames variables (a special case of substitution).
    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Polynomial {
        let poly_map = map
            .iter()
            .map(|(a, b)| (a.clone(), Polynomial::var(b.clone())))
            .collect();
        self.substitute_partial(&poly_map)
    }

    pub fn is_multilinear(&self) -> bool {
        self.multidegree().map_or(self.is_zero(), |d| d.is_multilinear())
    }

    /// Full polarization of a homogeneous polynomial over the rationals.
    ///
    /// Each variable of multiplicity k >= 2 is replaced by a sum of k fresh
    /// variables and only the part linear in all fresh variables is kept;
    /// substituting every fresh copy back recovers `prod(k_i!) * self`, so in
    /// characteristic zero the single returned polynomial carries the same
    /// consequences. Returns an empty family for the zero polynomial.
    pub fn multilinearize(&self) -> Result<Vec<Polynomial>, PolyError> {
        if self.is_zero() {
            return Ok(vec![]);
        }
        let d = self.multidegree().ok_or(PolyError::NotHomogeneous)?;
        let mut work = self.clone();
        let mut degree = d;
        loop {
            let heavy = degree.iter().find(|(_, k)| *k >= 2).map(|(v, k)| (v.clone(), k));
            let Some((var, k)) = heavy else { break };
            let support = work.support();
            let mut fresh: Vec<VarId> = Vec::with_capacity(k as usize);
            let mut suffix = 0u32;
            while fresh.len() < k as usize {
                suffix += 1;
                let candidate = VarId::new(&format!("{}_{}", var.name(), suffix))
                    .expect("derived name is valid");
                if !support.contains(&candidate) && !fresh.contains(&candidate) {
                    fresh.push(candidate);
                }
            }
            let mut sum = Polynomial::zero();
            for f in &fresh {
                sum = sum.add(&Polynomial::var(f.clone()));
            }
            let mut map = BTreeMap::new();
            map.insert(var.clone(), sum);
            let expanded = work.substitute_partial(&map);
            let mut target = degree.checked_sub(&Multidegree::from_counts([(var, k)])).unwrap();
            for f in &fresh {
                target.bump(f.clone(), 1);
            }
            work = expanded
                .homogeneous_components()
                .remove(&target)
                .unwrap_or_else(Polynomial::zero);
            degree = target;
        }
        if work.is_zero() {
            Ok(vec![])
        } else {
            Ok(vec![work])
        }
    }
}

impl fmt::Display for Polynomial {
    /// Canonical identity-DSL form: terms ascending, coefficients printed
    /// only when they are not a unit, subtraction for negative coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    if abs.is_one() {
                        write!(f, "-{}", w)?;
                    } else {
                        write!(f, "-{}*{}", scalar_to_string(&abs), w)?;
                    }
                    continue;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if abs.is_one() {
                write!(f, "{}", w)?;
            } else {
                write!(f, "{}*{}", scalar_to_string(&abs), w)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}
