//! Finite-dimensional algebras given by structure constants: evaluation of
//! words and polynomials, law verification on basis tuples, semidirect
//! products for algebras with an action, and the membership-obstruction
//! fixture behind the `gray` subcommand.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::poly::{scalar_from_str, scalar_int, scalar_to_string, Polynomial, Scalar};
use crate::variety::{parse_identity, VarietyPresentation};
use crate::words::{VarId, Word, WordView};

/// Coordinates of an algebra element in the basis of its [`StructureAlgebra`].
pub type Element = Vec<Scalar>;

#[derive(Debug, Error)]
pub enum FdalgError {
    #[error("invalid structure algebra: {0}")]
    Invalid(String),
    #[error("unknown variable '{0}' in evaluation assignment")]
    UnknownVariable(String),
    #[error("element has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid structure-algebra file: {0}")]
    BadFile(String),
}

/// A finite-dimensional algebra presented by an ordered basis and the
/// coordinates of every product of two basis elements. Multiplication is the
/// bilinear extension of the table; no associativity or other law is assumed.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    basis: Vec<String>,
    /// `table[i][j]` = coordinates of (basis i) · (basis j).
    table: Vec<Vec<Element>>,
}

impl StructureAlgebra {
    pub fn new(basis: Vec<String>, table: Vec<Vec<Element>>) -> Result<StructureAlgebra, FdalgError> {
        let n = basis.len();
        if n == 0 {
            return Err(FdalgError::Invalid("empty basis".to_string()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &basis {
            if name.is_empty() || name.contains(',') {
                return Err(FdalgError::Invalid(format!("invalid basis name {name:?}")));
            }
            if !seen.insert(name.clone()) {
                return Err(FdalgError::Invalid(format!("duplicate basis name {name:?}")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(FdalgError::Invalid(format!("table must be {n}x{n}")));
        }
        for row in &table {
            for entry in row {
                if entry.len() != n {
                    return Err(FdalgError::Invalid(format!(
                        "product vector has {} coordinates, expected {n}",
                        entry.len()
                    )));
                }
            }
        }
        Ok(StructureAlgebra { basis, table })
    }

    /// The algebra with the given basis and all products zero.
    pub fn zero_products(basis: &[&str]) -> StructureAlgebra {
        let n = basis.len();
        let table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        StructureAlgebra::new(basis.iter().map(|s| s.to_string()).collect(), table)
            .expect("zero table is valid")
    }

    /// Fixture-friendly constructor: start from zero products and set the
    /// listed integer products, e.g. `("m", "p", &[("q", 1)])` for m·p = q.
    pub fn from_integer_table(
        basis: &[&str],
        products: &[(&str, &str, &[(&str, i64)])],
    ) -> StructureAlgebra {
        let mut alg = StructureAlgebra::zero_products(basis);
        for (a, b, coords) in products {
            let mut value = alg.zero();
            for (name, c) in coords.iter() {
                let k = alg.index_of(name).expect("known basis name");
                value[k] = &value[k] + &scalar_int(*c);
            }
            alg.set_product(a, b, value);
        }
        alg
    }

    /// Overwrites one table entry (by basis names).
    pub fn set_product(&mut self, a: &str, b: &str, value: Element) {
        let i = self.index_of(a).expect("known basis name");
        let j = self.index_of(b).expect("known basis name");
        assert_eq!(value.len(), self.dim(), "product vector dimension");
        self.table[i][j] = value;
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn zero(&self) -> Element {
        vec![Scalar::zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = Scalar::one();
        e
    }

    /// The basis element with the given name.
    pub fn element(&self, name: &str) -> Option<Element> {
        self.index_of(name).map(|i| self.basis_element(i))
    }

    pub fn is_zero_element(e: &Element) -> bool {
        e.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, u: &Element, v: &Element) -> Element {
        u.iter().zip(v).map(|(a, b)| a + b).collect()
    }

    /// Bilinear product from the structure table.
    pub fn mul(&self, u: &Element, v: &Element) -> Element {
        let mut out = self.zero();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = &out[k] + &(&c * t);
                    }
                }
            }
        }
        out
    }

    fn checked(&self, e: Element) -> Result<Element, FdalgError> {
        if e.len() == self.dim() {
            Ok(e)
        } else {
            Err(FdalgError::DimensionMismatch {
                expected: self.dim(),
                got: e.len(),
            })
        }
    }

    /// Evaluates a word under an assignment of elements to its variables.
    pub fn eval_word(
        &self,
        w: &Word,
        asg: &BTreeMap<VarId, Element>,
    ) -> Result<Element, FdalgError> {
        match w.view() {
            WordView::Leaf(v) => {
                let e = asg
                    .get(v)
                    .cloned()
                    .ok_or_else(|| FdalgError::UnknownVariable(v.name().to_string()))?;
                self.checked(e)
            }
            WordView::Node(l, r) => {
                let a = self.eval_word(l, asg)?;
                let b = self.eval_word(r, asg)?;
                Ok(self.mul(&a, &b))
            }
        }
    }

    /// Evaluates a polynomial under an assignment.
    pub fn eval_poly(
        &self,
        p: &Polynomial,
        asg: &BTreeMap<VarId, Element>,
    ) -> Result<Element, FdalgError> {
        let mut out = self.zero();
        for (w, c) in p.terms() {
            let val = self.eval_word(w, asg)?;
            for (k, x) in val.iter().enumerate() {
                if !x.is_zero() {
                    out[k] = &out[k] + &(c * x);
                }
            }
        }
        Ok(out)
    }

    fn check_on_tuples(&self, p: &Polynomial) -> Result<(), LawFailure> {
        let vars: Vec<VarId> = p.support().into_iter().collect();
        if vars.is_empty() {
            return Ok(());
        }
        let n = self.dim();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let asg: BTreeMap<VarId, Element> = vars
                .iter()
                .zip(&idx)
                .map(|(v, &i)| (v.clone(), self.basis_element(i)))
                .collect();
            let value = self.eval_poly(p, &asg).expect("all variables assigned");
            if !Self::is_zero_element(&value) {
                return Err(LawFailure {
                    identity: p.clone(),
                    assignment: vars
                        .iter()
                        .zip(&idx)
                        .map(|(v, &i)| (v.clone(), self.basis[i].clone()))
                        .collect(),
                });
            }
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Verifies every law of the variety on this algebra. Each stored
    /// identity and each multilinear generator is evaluated on all basis
    /// tuples; by multilinearity the generator pass decides lawhood exactly
    /// over ℚ, while the direct pass reports the simplest witnesses first.
    pub fn check_laws(&self, variety: &VarietyPresentation) -> Result<(), LawFailure> {
        for identity in variety.identities() {
            self.check_on_tuples(identity.poly())?;
        }
        for generator in variety.multilinear_basis() {
            self.check_on_tuples(generator.poly())?;
        }
        Ok(())
    }

    /// Renders an element as a combination of basis names, e.g. `m + 2*p`.
    pub fn render(&self, e: &Element) -> String {
        if Self::is_zero_element(e) {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&scalar_to_string(&abs));
                out.push('*');
            }
            out.push_str(&self.basis[i]);
        }
        out
    }

    /// Serialises in the structure-algebra file format: omitted products are
    /// zero, coefficients are exact rational strings.
    pub fn to_json(&self) -> Value {
        let mut table = serde_json::Map::new();
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let entry = &self.table[i][j];
                if entry.iter().all(Scalar::is_zero) {
                    continue;
                }
                let mut coords = serde_json::Map::new();
                for (k, c) in entry.iter().enumerate() {
                    if !c.is_zero() {
                        coords.insert(self.basis[k].clone(), json!(scalar_to_string(c)));
                    }
                }
                table.insert(format!("{a},{b}"), Value::Object(coords));
            }
        }
        json!({ "basis": self.basis, "table": table })
    }

    /// Parses the structure-algebra file format.
    pub fn from_json(value: &Value) -> Result<StructureAlgebra, FdalgError> {
        let obj = value
            .as_object()
            .ok_or_else(|| FdalgError::BadFile("top level must be an object".to_string()))?;
        let basis: Vec<String> = obj
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| FdalgError::BadFile("missing \"basis\" array".to_string()))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| FdalgError::BadFile("basis names must be strings".to_string()))
            })
            .collect::<Result<_, _>>()?;
        let n = basis.len();
        let mut alg = StructureAlgebra::new(basis, vec![vec![vec![Scalar::zero(); n]; n]; n])?;
        let table = obj
            .get("table")
            .and_then(Value::as_object)
            .ok_or_else(|| FdalgError::BadFile("missing \"table\" object".to_string()))?;
        for (key, coords) in table {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| FdalgError::BadFile(format!("bad table key {key:?}")))?;
            let i = alg
                .index_of(a)
                .ok_or_else(|| FdalgError::BadFile(format!("unknown basis name {a:?}")))?;
            let j = alg
                .index_of(b)
                .ok_or_else(|| FdalgError::BadFile(format!("unknown basis name {b:?}")))?;
            let coords = coords
                .as_object()
                .ok_or_else(|| FdalgError::BadFile(format!("table entry {key:?} must be an object")))?;
            let mut entry = alg.zero();
            for (name, c) in coords {
                let k = alg
                    .index_of(name)
                    .ok_or_else(|| FdalgError::BadFile(format!("unknown basis name {name:?}")))?;
                let text = c
                    .as_str()
                    .ok_or_else(|| FdalgError::BadFile("coefficients must be strings".to_string()))?;
                entry[k] = scalar_from_str(text)
                    .map_err(|e| FdalgError::BadFile(format!("bad coefficient {text:?}: {e}")))?;
            }
            alg.table[i][j] = entry;
        }
        Ok(alg)
    }
}

/// A failed law check: the identity and the basis assignment violating it.
#[derive(Debug, Clone)]
pub struct LawFailure {
    pub identity: Polynomial,
    /// Variable → basis element name of the first failing tuple.
    pub assignment: BTreeMap<VarId, String>,
}

impl std::fmt::Display for LawFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tuple: Vec<String> = self
            .assignment
            .iter()
            .map(|(v, name)| format!("{}={}", v.name(), name))
            .collect();
        write!(f, "identity {} fails at ({})", self.identity, tuple.join(", "))
    }
}

/// An algebra acting on another from both sides: the raw data of a
/// semidirect product. `left_action[i][j]` is (acting basis i)·(carrier
/// basis j) and `right_action[j][i]` is (carrier basis j)·(acting basis i),
/// both landing in the carrier.
#[derive(Clone, Debug)]
pub struct ActedAlgebra {
    pub acting: StructureAlgebra,
    pub carrier: StructureAlgebra,
    pub left_action: Vec<Vec<Element>>,
    pub right_action: Vec<Vec<Element>>,
}

impl ActedAlgebra {
    pub fn new(
        acting: StructureAlgebra,
        carrier: StructureAlgebra,
        left_action: Vec<Vec<Element>>,
        right_action: Vec<Vec<Element>>,
    ) -> Result<ActedAlgebra, FdalgError> {
        let na = acting.dim();
        let nc = carrier.dim();
        let shape_ok = left_action.len() == na
            && left_action.iter().all(|row| row.len() == nc)
            && right_action.len() == nc
            && right_action.iter().all(|row| row.len() == na);
        if !shape_ok {
            return Err(FdalgError::Invalid("action table shape mismatch".to_string()));
        }
        for e in left_action.iter().flatten().chain(right_action.iter().flatten()) {
            if e.len() != nc {
                return Err(FdalgError::Invalid(
                    "action values must be carrier elements".to_string(),
                ));
            }
        }
        for a in acting.basis() {
            if carrier.index_of(a).is_some() {
                return Err(FdalgError::Invalid(format!(
                    "basis name {a:?} used by both acting algebra and carrier"
                )));
            }
        }
        Ok(ActedAlgebra {
            acting,
            carrier,
            left_action,
            right_action,
        })
    }

    /// An action where every mixed product is zero.
    pub fn trivial(acting: StructureAlgebra, carrier: StructureAlgebra) -> ActedAlgebra {
        let na = acting.dim();
        let nc = carrier.dim();
        let left = vec![vec![vec![Scalar::zero(); nc]; nc]; na];
        let right = vec![vec![vec![Scalar::zero(); nc]; na]; nc];
        ActedAlgebra::new(acting, carrier, left, right).expect("trivial action is well-shaped")
    }

    /// The semidirect product on (acting ⊕ carrier): block products given by
    /// the two algebras and the two action tables.
    pub fn semidirect(&self) -> StructureAlgebra {
        let na = self.acting.dim();
        let nc = self.carrier.dim();
        let n = na + nc;
        let basis: Vec<String> = self
            .acting
            .basis()
            .iter()
            .chain(self.carrier.basis())
            .cloned()
            .collect();
        let embed_acting = |e: &Element| -> Element {
            let mut out = vec![Scalar::zero(); n];
            out[..na].clone_from_slice(e);
            out
        };
        let embed_carrier = |e: &Element| -> Element {
            let mut out = vec![Scalar::zero(); n];
            out[na..].clone_from_slice(e);
            out
        };
        let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = match (i < na, j < na) {
                    (true, true) => {
                        embed_acting(&self.acting.mul(&self.acting.basis_element(i), &self.acting.basis_element(j)))
                    }
                    (true, false) => embed_carrier(&self.left_action[i][j - na]),
                    (false, true) => embed_carrier(&self.right_action[i - na][j]),
                    (false, false) => embed_carrier(&self.carrier.mul(
                        &self.carrier.basis_element(i - na),
                        &self.carrier.basis_element(j - na),
                    )),
                };
            }
        }
        StructureAlgebra::new(basis, table).expect("semidirect table is well-shaped")
    }

    /// Checks every law of the variety on the semidirect product, which
    /// covers the mixed action products as well as both blocks.
    pub fn validate(&self, variety: &VarietyPresentation) -> Result<(), LawFailure> {
        self.semidirect().check_laws(variety)
    }
}

/// The ambient variety of the obstruction fixture: commutative algebras in
/// which all triple products vanish.
pub fn gray_variety() -> VarietyPresentation {
    let identities = vec![
        parse_identity("x*y - y*x").expect("valid identity"),
        parse_identity("x*(y*z)").expect("valid identity"),
    ];
    VarietyPresentation::new("commutative-nil2", identities)
}

/// The acting algebra of the fixture: span{b, b2} with b·b = b2 and all
/// other products zero (b2 plays the square of b).
pub fn gray_acting() -> StructureAlgebra {
    StructureAlgebra::from_integer_table(&["b", "b2"], &[("b", "b", &[("b2", 1)])])
}

/// The acted-on argument algebra of the fixture: span{x, y} with zero
/// multiplication; b acts by b·x = x·b = y and kills y, b2 acts by zero.
pub fn gray_arguments() -> ActedAlgebra {
    let acting = gray_acting();
    let carrier = StructureAlgebra::zero_products(&["x", "y"]);
    let y = carrier.element("y").expect("basis y");
    let zero = carrier.zero();
    // left_action[i][j] = acting_i · carrier_j
    let left = vec![vec![y.clone(), zero.clone()], vec![zero.clone(), zero.clone()]];
    // right_action[j][i] = carrier_j · acting_i (symmetric to the left action)
    let right = vec![vec![y, zero.clone()], vec![zero.clone(), zero]];
    ActedAlgebra::new(acting, carrier, left, right).expect("well-shaped action")
}

/// The target algebra of the fixture: span{m, p, q} with m·p = p·m = q and
/// all other products zero; the `mutated` variant sets m·p = p·m = 0.
pub fn gray_target(mutated: bool) -> StructureAlgebra {
    if mutated {
        StructureAlgebra::zero_products(&["m", "p", "q"])
    } else {
        StructureAlgebra::from_integer_table(
            &["m", "p", "q"],
            &[("m", "p", &[("q", 1)]), ("p", "m", &[("q", 1)])],
        )
    }
}

/// Outcome of the membership-obstruction fixture. All element values are
/// rendered in the basis of their algebra.
#[derive(Clone, Debug)]
pub struct GrayReport {
    pub mutated: bool,
    /// The semidirect product of the acting algebra and the arguments
    /// satisfies the ambient laws.
    pub ambient_laws_hold: bool,
    /// The target with the trivial action satisfies the ambient laws.
    pub target_laws_hold: bool,
    /// g (sending both argument generators to m) is an algebra homomorphism.
    pub g_is_homomorphism: bool,
    /// f(0,b) = 0·x + b·x, computed through the action.
    pub f_of_b: String,
    /// g applied to that value.
    pub g_of_f: String,
    /// The membership value g(f(0,b))·p in the target.
    pub obstruction: String,
    /// The value the trivial action forces for membership.
    pub required: String,
    pub obstruction_nonzero: bool,
    /// True when every structural check passed and the obstruction differs
    /// from the required value.
    pub counterexample: bool,
    pub notes: Vec<String>,
}

impl GrayReport {
    pub fn verdict(&self) -> &'static str {
        if self.counterexample {
            "counterexample confirmed"
        } else {
            "no obstruction"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fixture": "semidirect membership obstruction",
            "verdict": self.verdict(),
            "mutated": self.mutated,
            "ambient_laws_hold": self.ambient_laws_hold,
            "target_laws_hold": self.target_laws_hold,
            "g_is_homomorphism": self.g_is_homomorphism,
            "f_of_b": self.f_of_b,
            "g_of_f": self.g_of_f,
            "obstruction": self.obstruction,
            "required": self.required,
            "obstruction_nonzero": self.obstruction_nonzero,
            "counterexample": self.counterexample,
            "notes": self.notes,
        })
    }
}

/// Runs the obstruction fixture with exact arithmetic.
///
/// The fixture: b acts on the zero-multiplication algebra span{x, y} by
/// b·x = y; the map g sends x and y to m in the target span{m, p, q} where
/// m·p = q ≠ 0; the element f(0, b) = 0·x + b·x = y. Restricting along g
/// would require the membership value g(f(0,b))·p to be the value forced by
/// the trivial action on the target, namely 0 — but it computes to q ≠ 0, so
/// no such restriction exists. `mutated` replaces m·p = p·m = q by 0, which
/// removes the obstruction and serves as a negative control.
pub fn gray_counterexample(mutated: bool) -> GrayReport {
    let variety = gray_variety();
    let arguments = gray_arguments();
    let target = gray_target(mutated);

    let ambient_laws_hold = arguments.validate(&variety).is_ok();
    let target_laws_hold =
        ActedAlgebra::trivial(gray_acting(), target.clone()).validate(&variety).is_ok();

    // g: arguments → target, linear with g(x) = g(y) = m.
    let m = target.element("m").expect("basis m");
    let g_images = vec![m.clone(), m];
    let apply_g = |e: &Element| -> Element {
        let mut out = target.zero();
        for (j, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, x) in g_images[j].iter().enumerate() {
                if !x.is_zero() {
                    out[k] = &out[k] + &(c * x);
                }
            }
        }
        out
    };
    let carrier = &arguments.carrier;
    let mut g_is_homomorphism = true;
    for i in 0..carrier.dim() {
        for j in 0..carrier.dim() {
            let u = carrier.basis_element(i);
            let v = carrier.basis_element(j);
            let lhs = apply_g(&carrier.mul(&u, &v));
            let rhs = target.mul(&apply_g(&u), &apply_g(&v));
            if lhs != rhs {
                g_is_homomorphism = false;
            }
        }
    }

    // f(0, b) = 0·x + b·x, evaluated through the semidirect product.
    let semidirect = arguments.semidirect();
    let na = arguments.acting.dim();
    let mut b_embedded = semidirect.zero();
    b_embedded[arguments.acting.index_of("b").expect("basis b")] = Scalar::one();
    let mut x_embedded = semidirect.zero();
    x_embedded[na + carrier.index_of("x").expect("basis x")] = Scalar::one();
    let product = semidirect.mul(&b_embedded, &x_embedded);
    assert!(
        product[..na].iter().all(Scalar::is_zero),
        "the action lands in the carrier"
    );
    let f_value: Element = product[na..].to_vec();

    let g_of_f = apply_g(&f_value);
    let p = target.element("p").expect("basis p");
    let obstruction = target.mul(&g_of_f, &p);
    let required = target.zero();
    let obstruction_nonzero = !StructureAlgebra::is_zero_element(&obstruction);

    GrayReport {
        mutated,
        ambient_laws_hold,
        target_laws_hold,
        g_is_homomorphism,
        f_of_b: carrier.render(&f_value),
        g_of_f: target.render(&g_of_f),
        obstruction: target.render(&obstruction),
        required: target.render(&required),
        obstruction_nonzero,
        counterexample: ambient_laws_hold
            && target_laws_hold
            && g_is_homomorphism
            && obstruction_nonzero,
        notes: vec![
            "normalization: all structure constants are integers; computing over exact \
             rationals is lossless and the nonzero obstruction coefficient is an integer, \
             so the verdict is characteristic-free"
                .to_string(),
            "normalization: the membership product g(y)*n is evaluated at n = p, the basis \
             element with m*p = q"
                .to_string(),
        ],
    }
}
