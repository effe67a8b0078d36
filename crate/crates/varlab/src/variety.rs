//! Variety presentations: identities in a small expression language, the
//! built-in catalogue, and the derived multilinear generating family.
//!
//! Identity grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := [scalar '*'] factor
//! factor := atom | atom '*' atom
//! atom   := var | '(' expr ')'
//! scalar := ['-'] digits ['/' digits]
//! var    := letter (letter | digit | '_')*
//! ```
//!
//! Products do not associate: `a*b*c` is rejected with a parse error, and the
//! intended tree must be written `(a*b)*c` or `a*(b*c)`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::poly::{Polynomial, Scalar};
use crate::words::VarId;

/// An identity `p = 0`: a polynomial together with its variable support.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    poly: Polynomial,
    vars: Vec<VarId>,
}

impl Identity {
    pub fn new(poly: Polynomial) -> Identity {
        let vars = poly.support().into_iter().collect();
        Identity { poly, vars }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Variables of the identity, ascending; always exactly the support.
    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn is_multilinear(&self) -> bool {
        self.poly.is_multilinear()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Identity({})", self.poly)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        let negative = self.eat(b'-');
        if negative {
            self.skip_ws();
        }
        let scalar = match self.peek() {
            Some(c) if c.is_ascii_digit() => Some(self.scalar()?),
            _ => None,
        };
        if let Some(c) = scalar {
            let c = if negative { -c } else { c };
            self.skip_ws();
            if !self.eat(b'*') {
                return self.err("expected '*' after scalar coefficient");
            }
            let f = self.factor()?;
            Ok(f.scale(&c))
        } else {
            let f = self.factor()?;
            Ok(if negative { f.neg() } else { f })
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let a = self.atom()?;
        self.skip_ws();
        if !self.eat(b'*') {
            return Ok(a);
        }
        let b = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'*') {
            return self.err(
                "nonassociative product requires parentheses: write (a*b)*c or a*(b*c)",
            );
        }
        Ok(a.mul(&b))
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let var = VarId::new(name).expect("lexed name is valid");
                Ok(Polynomial::var(var))
            }
            _ => self.err("expected a variable or '('"),
        }
    }

    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        let numer = self.digits()?;
        self.skip_ws();
        let denom = if self.eat(b'/') {
            self.skip_ws();
            let d = self.digits()?;
            if d == BigInt::from(0) {
                return self.err("zero denominator");
            }
            d
        } else {
            BigInt::one()
        };
        Ok(Scalar::new(numer, denom))
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .unwrap())
    }
}

/// Parses one identity in the expression grammar above.
///
/// As a printer-compatibility extension, the single token `0` is accepted and
/// denotes the zero polynomial (the canonical printer renders zero as `0`).
pub fn parse_identity(src: &str) -> Result<Identity, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.eat(b'0') {
        p.skip_ws();
        if p.peek().is_none() {
            return Ok(Identity::new(Polynomial::zero()));
        }
        p.pos = 0;
    }
    let poly = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(Identity::new(poly))
}

/// A variety of algebras presented by identities. The multilinear generating
/// family is derived eagerly: identities are split into homogeneous
/// components and each component is fully polarized, which over the
/// rationals generates the same consequences.
#[derive(Clone)]
pub struct VarietyPresentation {
    name: String,
    identities: Vec<Identity>,
    multilinear_basis: Vec<Identity>,
    hash: String,
}

impl VarietyPresentation {
    pub fn new(name: impl Into<String>, identities: Vec<Identity>) -> VarietyPresentation {
        let mut multilinear_basis: Vec<Identity> = Vec::new();
        for ident in &identities {
            for (_, component) in ident.poly().homogeneous_components() {
                let family = component
                    .multilinearize()
                    .expect("homogeneous component polarizes");
                for m in family {
                    let candidate = Identity::new(m);
                    if !multilinear_basis.contains(&candidate) {
                        multilinear_basis.push(candidate);
                    }
                }
            }
        }
        let hash = presentation_hash(&identities);
        VarietyPresentation {
            name: name.into(),
            identities,
            multilinear_basis,
            hash,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    /// Multilinear identities generating the same consequence spaces as the
    /// original presentation (characteristic zero).
    pub fn multilinear_basis(&self) -> &[Identity] {
        &self.multilinear_basis
    }

    /// Hash of the canonical presentation text. The name is deliberately
    /// excluded so equal law sets share cache entries.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn shared(self) -> Arc<VarietyPresentation> {
        Arc::new(self)
    }
}

impl fmt::Debug for VarietyPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarietyPresentation({}, {} identities)", self.name, self.identities.len())
    }
}

fn presentation_hash(identities: &[Identity]) -> String {
    let mut lines: Vec<String> = identities
        .iter()
        .filter(|i| !i.poly().is_zero())
        .map(|i| i.to_string())
        .collect();
    lines.sort();
    lines.dedup();
    let mut hasher = Sha256::new();
    for line in &lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

/// The built-in catalogue.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Builtin {
    /// No identities: all algebras.
    Alg,
    /// Alternating: x*x = 0.
    Alt,
    /// Associative.
    Assoc,
    /// Antiassociative: x*(y*z) = -(x*y)*z.
    AAAlg,
    /// Alternating and antiassociative.
    AAAAlg,
    /// Lie: alternating plus the Jacobi identity.
    Lie,
    /// Right Leibniz.
    LeibnizRight,
    /// Left Leibniz.
    LeibnizLeft,
    /// Symmetric Leibniz: both Leibniz identities.
    SymLeibniz,
    /// Abelian: x*y = 0.
    Abelian,
    /// Left-nilpotent of class two: x*(y*z) = 0.
    Nil2a,
}

pub const ALL_BUILTINS: [Builtin; 11] = [
    Builtin::Alg,
    Builtin::Alt,
    Builtin::Assoc,
    Builtin::AAAlg,
    Builtin::AAAAlg,
    Builtin::Lie,
    Builtin::LeibnizRight,
    Builtin::LeibnizLeft,
    Builtin::SymLeibniz,
    Builtin::Abelian,
    Builtin::Nil2a,
];

impl Builtin {
    pub fn key(self) -> &'static str {
        match self {
            Builtin::Alg => "alg",
            Builtin::Alt => "alt",
            Builtin::Assoc => "assoc",
            Builtin::AAAlg => "aaalg",
            Builtin::AAAAlg => "aaaalg",
            Builtin::Lie => "lie",
            Builtin::LeibnizRight => "leibniz-right",
            Builtin::LeibnizLeft => "leibniz-left",
            Builtin::SymLeibniz => "sym-leibniz",
            Builtin::Abelian => "abelian",
            Builtin::Nil2a => "nil2a",
        }
    }

    pub fn from_key(key: &str) -> Option<Builtin> {
        ALL_BUILTINS.iter().copied().find(|b| b.key() == key)
    }

    fn sources(self) -> (&'static str, &'static [&'static str]) {
        const JACOBI: &str = "x*(y*z) + z*(x*y) + y*(z*x)";
        const LEIBNIZ_RIGHT: &str = "(x*y)*z - x*(y*z) - (x*z)*y";
        const LEIBNIZ_LEFT: &str = "x*(y*z) - (x*y)*z - y*(x*z)";
        match self {
            Builtin::Alg => ("Alg", &[]),
            Builtin::Alt => ("Alt", &["x*x"]),
            Builtin::Assoc => ("Assoc", &["x*(y*z) - (x*y)*z"]),
            Builtin::AAAlg => ("AAAlg", &["x*(y*z) + (x*y)*z"]),
            Builtin::AAAAlg => ("AAAAlg", &["x*x", "x*(y*z) + (x*y)*z"]),
            Builtin::Lie => ("Lie", &["x*x", JACOBI]),
            Builtin::LeibnizRight => ("LeibnizRight", &[LEIBNIZ_RIGHT]),
            Builtin::LeibnizLeft => ("LeibnizLeft", &[LEIBNIZ_LEFT]),
            Builtin::SymLeibniz => ("SymLeibniz", &[LEIBNIZ_RIGHT, LEIBNIZ_LEFT]),
            Builtin::Abelian => ("Abelian", &["x*y"]),
            Builtin::Nil2a => ("Nil2a", &["x*(y*z)"]),
        }
    }
}

pub fn builtin_variety(which: Builtin) -> VarietyPresentation {
    let (name, sources) = which.sources();
    let identities = sources
        .iter()
        .map(|s| parse_identity(s).expect("built-in identity parses"))
        .collect();
    VarietyPresentation::new(name, identities)
}

#[derive(Debug, Error)]
pub enum VarietyFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid variety file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("identity {index} ({text:?}): {source}")]
    BadIdentity {
        index: usize,
        text: String,
        source: ParseError,
    },
}

#[derive(Serialize, Deserialize)]
struct VarietyFile {
    name: String,
    identities: Vec<String>,
}

/// Parses the on-disk presentation format: a JSON object with a `name` and a
/// list of identity strings.
pub fn variety_from_json(text: &str) -> Result<VarietyPresentation, VarietyFileError> {
    let file: VarietyFile = serde_json::from_str(text)?;
    let mut identities = Vec::with_capacity(file.identities.len());
    for (index, src) in file.identities.iter().enumerate() {
        let ident = parse_identity(src).map_err(|source| VarietyFileError::BadIdentity {
            index,
            text: src.clone(),
            source,
        })?;
        identities.push(ident);
    }
    Ok(VarietyPresentation::new(file.name, identities))
}

pub fn variety_to_json(v: &VarietyPresentation) -> String {
    let file = VarietyFile {
        name: v.name().to_string(),
        identities: v.identities().iter().map(|i| i.to_string()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn load_variety_file(path: &Path) -> Result<VarietyPresentation, VarietyFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| VarietyFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    variety_from_json(&text)
}

/// Resolves `builtin:<key>` to the catalogue and anything else as a file path.
pub fn resolve_variety(spec: &str) -> Result<VarietyPresentation, String> {
    if let Some(key) = spec.strip_prefix("builtin:") {
        match Builtin::from_key(key) {
            Some(b) => Ok(builtin_variety(b)),
            None => Err(format!(
                "unknown builtin {:?}; available: {}",
                key,
                ALL_BUILTINS.map(|b| b.key()).join(", ")
            )),
        }
    } else {
        load_variety_file(Path::new(spec)).map_err(|e| e.to_string())
    }
}

/// Canonically renames the variables of a polynomial onto the given names in
/// ascending order of the old names. Intended for comparing derived
/// identities up to renaming.
pub fn rename_canonical(p: &Polynomial, names: &[&str]) -> Polynomial {
    let support: Vec<VarId> = p.support().into_iter().collect();
    assert!(support.len() <= names.len(), "not enough names");
    let map: BTreeMap<VarId, VarId> = support
        .into_iter()
        .zip(names)
        .map(|(old, new)| (old, VarId::new(new).expect("valid name")))
        .collect();
    p.rename(&map)
}
