//! Degreewise consequence spaces of a set of identities.
//!
//! The consequences of a family of identities form a T-ideal: the smallest
//! ideal of the free nonassociative algebra closed under substitution. Over
//! the rationals its component at a fixed multidegree `d` is the linear span
//! of all context-embedded substitution instances `C[m(w_1, ..., w_k)]`,
//! where `m` ranges over the derived multilinear generators, the `w_i` over
//! words, and `C` over one-hole contexts, such that the result has
//! multidegree exactly `d`. This module materializes those spans as reduced
//! row-echelon bases and answers membership, normal-form and quotient-basis
//! queries from them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::matrix::{zero_vector, RowReducer, Vector};
use crate::poly::Polynomial;
use crate::variety::{parse_identity, VarietyPresentation};
use crate::words::{
    enumerate_contexts, enumerate_words, hole_var, Multidegree, VarId, Word,
};

/// The span of all consequences of a variety's identities at one multidegree,
/// in reduced row-echelon form.
///
/// Linear-algebra columns are indexed by words of the multidegree in
/// *descending* word order, so the pivot of a row is its largest word (its
/// leading monomial) and reduction rewrites large words into combinations of
/// smaller ones.
pub struct ConsequenceSpace {
    variety_hash: String,
    degree: Multidegree,
    words: Arc<Vec<Word>>,
    reducer: RowReducer,
}

impl ConsequenceSpace {
    /// Computes the space from scratch.
    pub fn compute(variety: &VarietyPresentation, degree: &Multidegree) -> ConsequenceSpace {
        let words = enumerate_words(degree);
        let mut space = ConsequenceSpace {
            variety_hash: variety.hash().to_string(),
            degree: degree.clone(),
            words,
            reducer: RowReducer::new(0),
        };
        space.reducer = RowReducer::new(space.words.len());
        for row in instance_polynomials(variety, degree) {
            let vec = space.poly_to_vec(&row);
            space.reducer.insert(vec);
        }
        space
    }

    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    pub fn variety_hash(&self) -> &str {
        &self.variety_hash
    }

    /// All words of the multidegree, ascending.
    pub fn all_words(&self) -> &[Word] {
        &self.words
    }

    /// Dimension of the whole component of the free algebra.
    pub fn full_dimension(&self) -> usize {
        self.words.len()
    }

    /// Dimension of the consequence span.
    pub fn dimension(&self) -> usize {
        self.reducer.rank()
    }

    /// Dimension of the quotient (the relatively free algebra's component).
    pub fn quotient_dimension(&self) -> usize {
        self.full_dimension() - self.dimension()
    }

    fn col_of(&self, w: &Word) -> Option<usize> {
        self.words
            .binary_search(w)
            .ok()
            .map(|i| self.words.len() - 1 - i)
    }

    fn word_at_col(&self, col: usize) -> &Word {
        &self.words[self.words.len() - 1 - col]
    }

    /// Converts a homogeneous polynomial of this multidegree to coordinates.
    /// Panics if a term has the wrong multidegree.
    fn poly_to_vec(&self, p: &Polynomial) -> Vector {
        let mut v = zero_vector(self.words.len());
        for (w, c) in p.terms() {
            let col = self
                .col_of(w)
                .unwrap_or_else(|| panic!("word {} is not of multidegree {}", w, self.degree));
            v[col] = c.clone();
        }
        v
    }

    fn try_poly_to_vec(&self, p: &Polynomial) -> Option<Vector> {
        let mut v = zero_vector(self.words.len());
        for (w, c) in p.terms() {
            v[self.col_of(w)?] = c.clone();
        }
        Some(v)
    }

    fn vec_to_poly(&self, v: &[crate::poly::Scalar]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (col, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.word_at_col(col).clone(), c.clone());
            }
        }
        p
    }

    /// The pivot words (largest word of some reduced row), ascending.
    pub fn leading_monomials(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .reducer
            .pivots()
            .iter()
            .map(|&col| self.word_at_col(col).clone())
            .collect();
        out.sort();
        out
    }

    /// The non-pivot words, ascending: a basis of the quotient.
    pub fn quotient_basis(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .reducer
            .free_columns()
            .into_iter()
            .map(|col| self.word_at_col(col).clone())
            .collect();
        out.sort();
        out
    }

    /// Membership of a homogeneous polynomial of this multidegree.
    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reducer.contains(&self.poly_to_vec(p))
    }

    /// Normal form modulo the span: the unique representative supported on
    /// the quotient basis. `p - reduce(p)` lies in the span.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut v = self.poly_to_vec(p);
        self.reducer.reduce(&mut v);
        self.vec_to_poly(&v)
    }

    /// The reduced rows as polynomials (a canonical basis of the span),
    /// in pivot order (descending pivot word).
    pub fn row_polynomials(&self) -> Vec<Polynomial> {
        self.reducer.rows().iter().map(|r| self.vec_to_poly(r)).collect()
    }
}

impl fmt::Debug for ConsequenceSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ConsequenceSpace(degree {}, rank {}/{})",
            self.degree,
            self.dimension(),
            self.full_dimension()
        )
    }
}

/// All context-embedded substitution instances of the variety's multilinear
/// generators at the given multidegree, deduplicated and in a deterministic
/// order. The span of these polynomials is the consequence space.
pub(crate) fn instance_polynomials(
    variety: &VarietyPresentation,
    degree: &Multidegree,
) -> Vec<Polynomial> {
    let mut out: BTreeSet<Polynomial> = BTreeSet::new();
    for generator in variety.multilinear_basis() {
        let vars = generator.vars();
        let k = vars.len();
        if k == 0 {
            continue;
        }
        for parts in degree.decompositions(k + 1) {
            let (context_degree, factor_degrees) = parts.split_first().expect("k+1 >= 1 parts");
            if factor_degrees.iter().any(|f| f.total() == 0) {
                continue;
            }
            let contexts = enumerate_contexts(context_degree);
            let factor_lists: Vec<Arc<Vec<Word>>> =
                factor_degrees.iter().map(enumerate_words).collect();
            for combo in cartesian(&factor_lists) {
                let map: std::collections::BTreeMap<VarId, Polynomial> = vars
                    .iter()
                    .cloned()
                    .zip(combo.iter().map(|w| Polynomial::monomial(w.clone())))
                    .collect();
                let inner = generator
                    .poly()
                    .substitute(&map)
                    .expect("generator variables all assigned");
                if inner.is_zero() {
                    continue;
                }
                for context in contexts.iter() {
                    let mut row = Polynomial::zero();
                    for (w, c) in inner.terms() {
                        let mut hole = std::collections::BTreeMap::new();
                        hole.insert(hole_var(), w.clone());
                        row.add_term(context.expand_leaves(&hole), c.clone());
                    }
                    if !row.is_zero() {
                        out.insert(row);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Ordered tuples drawing one word from each list.
fn cartesian(lists: &[Arc<Vec<Word>>]) -> Vec<Vec<Word>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for w in list.iter() {
                let mut tuple = prefix.clone();
                tuple.push(w.clone());
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

/// Verdict of a law check, with one entry per homogeneous component.
#[derive(Clone, Debug)]
pub struct LawCheck {
    pub holds: bool,
    pub components: Vec<ComponentCheck>,
}

#[derive(Clone, Debug)]
pub struct ComponentCheck {
    pub degree: Multidegree,
    pub holds: bool,
}

const CACHE_HEADER: &str = "varlab consequence-space v1";

/// Memoized access to consequence spaces, optionally backed by an on-disk
/// cache of the reduced bases.
///
/// The in-memory memo and the cache files are keyed by the presentation hash
/// (which ignores the variety's name) and the multidegree, so syntactically
/// equal presentations share entries.
pub struct Tables {
    cache_dir: Option<PathBuf>,
    memo: Mutex<HashMap<(String, Multidegree), Arc<ConsequenceSpace>>>,
}

impl Tables {
    pub fn new(cache_dir: Option<PathBuf>) -> Tables {
        Tables {
            cache_dir,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn in_memory() -> Tables {
        Tables::new(None)
    }

    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> Tables {
        Tables::new(Some(dir.into()))
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// The consequence space of `variety` at `degree`, computed at most once.
    pub fn consequence_space(
        &self,
        variety: &VarietyPresentation,
        degree: &Multidegree,
    ) -> Arc<ConsequenceSpace> {
        let key = (variety.hash().to_string(), degree.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let space = self
            .load_from_disk(variety, degree)
            .unwrap_or_else(|| {
                let computed = ConsequenceSpace::compute(variety, degree);
                self.save_to_disk(&computed);
                computed
            });
        let arc = Arc::new(space);
        self.memo
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(arc)
            .clone()
    }

    /// Whether `p = 0` holds identically in the variety. Works one
    /// homogeneous component at a time; over the rationals a polynomial is a
    /// law exactly when each component is.
    pub fn is_law(&self, variety: &VarietyPresentation, p: &Polynomial) -> LawCheck {
        let mut components = Vec::new();
        let mut holds = true;
        for (degree, component) in p.homogeneous_components() {
            let space = self.consequence_space(variety, &degree);
            let ok = space.contains(&component);
            holds &= ok;
            components.push(ComponentCheck { degree, holds: ok });
        }
        LawCheck { holds, components }
    }

    /// Normal form of an arbitrary polynomial: each homogeneous component is
    /// reduced in its own consequence space.
    pub fn reduce(&self, variety: &VarietyPresentation, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (degree, component) in p.homogeneous_components() {
            let space = self.consequence_space(variety, &degree);
            out = out.add(&space.reduce(&component));
        }
        out
    }

    pub fn quotient_basis(
        &self,
        variety: &VarietyPresentation,
        degree: &Multidegree,
    ) -> Vec<Word> {
        self.consequence_space(variety, degree).quotient_basis()
    }

    fn cache_path(&self, variety_hash: &str, degree: &Multidegree) -> Option<PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        // Degrees mentioning engine-internal variables (which cannot
        // round-trip through the identity grammar) stay memory-only.
        for v in degree.vars() {
            if VarId::new(v.name()).is_err() {
                return None;
            }
        }
        let slug: Vec<String> = degree.iter().map(|(v, k)| format!("{}{}", v, k)).collect();
        let slug = if slug.is_empty() {
            "empty".to_string()
        } else {
            slug.join("-")
        };
        Some(dir.join(format!("{}-{}.csp", &variety_hash[..16], slug)))
    }

    fn load_from_disk(
        &self,
        variety: &VarietyPresentation,
        degree: &Multidegree,
    ) -> Option<ConsequenceSpace> {
        let path = self.cache_path(variety.hash(), degree)?;
        let text = fs::read_to_string(&path).ok()?;
        let mut lines = text.lines();
        if lines.next()? != CACHE_HEADER {
            return None;
        }
        if lines.next()? != format!("variety: {}", variety.hash()) {
            return None;
        }
        if lines.next()? != format!("degree: {}", degree) {
            return None;
        }
        let count: usize = lines.next()?.strip_prefix("rows: ")?.parse().ok()?;
        let mut space = ConsequenceSpace {
            variety_hash: variety.hash().to_string(),
            degree: degree.clone(),
            words: enumerate_words(degree),
            reducer: RowReducer::new(0),
        };
        space.reducer = RowReducer::new(space.words.len());
        for _ in 0..count {
            let line = lines.next()?;
            let poly = parse_identity(line).ok()?;
            let vec = space.try_poly_to_vec(poly.poly())?;
            space.reducer.insert(vec);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return None;
        }
        // The stored rows must be independent; anything else is corruption.
        if space.reducer.rank() != count {
            return None;
        }
        Some(space)
    }

    /// Best-effort write; cache failures never affect results.
    fn save_to_disk(&self, space: &ConsequenceSpace) {
        let Some(path) = self.cache_path(&space.variety_hash, &space.degree) else {
            return;
        };
        let mut text = String::new();
        text.push_str(CACHE_HEADER);
        text.push('\n');
        text.push_str(&format!("variety: {}\n", space.variety_hash));
        text.push_str(&format!("degree: {}\n", space.degree));
        text.push_str(&format!("rows: {}\n", space.reducer.rank()));
        for row in space.row_polynomials() {
            text.push_str(&row.to_string());
            text.push('\n');
        }
        let Some(dir) = path.parent() else { return };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if fs::write(&tmp, text).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }
}
